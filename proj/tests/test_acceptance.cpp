// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line.  Criterion 6's small-regime decay fit is expected to fail at the
// pinned parameters: the leading small-x power of the kernel integral
// carries a cos(pi(q+alpha)/2) coefficient that vanishes identically on the
// line q + alpha = 1, which contains (q, alpha) = (0.5, 0.5); the integral
// is bounded there instead of saturating its decay bound.  The fit clause is
// asserted faithfully and reported honestly.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "bhlab/config.hpp"
#include "bhlab/field_io.hpp"
#include "bhlab/inequality.hpp"
#include "bhlab/singular_ops.hpp"
#include "bhlab/solver.hpp"
#include "bhlab/weights.hpp"
#include "support.hpp"

using namespace bhlab;
namespace fs = std::filesystem;

namespace {
constexpr double pi = std::numbers::pi;

void verdict(int criterion, bool ok, const std::string& what) {
    std::cout << "ACCEPTANCE " << criterion << " " << (ok ? "PASS" : "FAIL")
              << ": " << what << std::endl;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

// the reproduction experiment shared by criteria 4, 5 and 8
solver::SimConfig blowup_config(int n) {
    solver::SimConfig cfg;
    cfg.alpha = 0.0;
    cfg.grid = GridSpec{n, 24.0};
    cfg.t_max = 0.01;
    cfg.dt_policy = solver::DtPolicy::cfl(0.1);
    cfg.initial_data = RationalFamily{1300.0, 1.0};
    cfg.diag_every = 1;
    cfg.stop = solver::StopCriteria{100.0, 0.05};
    cfg.beta0 = -1.0;
    cfg.init_tail_tolerance = 1.0; // box-size compromise, see README
    return cfg;
}

struct BlowupRun {
    solver::RunReport report;
    std::vector<diag::DiagRecord> records;
};

const BlowupRun& blowup_run(int n) {
    static std::map<int, BlowupRun> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    diag::MemorySink sink;
    solver::RunReport rep = solver::run(blowup_config(n), sink);
    return cache.emplace(n, BlowupRun{rep, std::move(sink.records)}).first->second;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(BHLAB_CLI_PATH) + " " + args;
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("criterion 1: conservation suite") {
    bool all_ok = true;
    for (double alpha : {0.0, 0.25, 0.5, 0.75}) {
        double t0 = now_seconds();
        solver::SimConfig cfg;
        cfg.alpha = alpha;
        cfg.grid = GridSpec{4096, 100.0};
        cfg.t_max = 5.0;
        cfg.dt_policy = solver::DtPolicy::cfl(0.4);
        cfg.initial_data = GaussianBump{0.25, 4.0};
        cfg.diag_every = 25;
        cfg.stop = solver::StopCriteria{1e6, 0.5};
        diag::MemorySink sink;
        solver::RunReport rep = solver::run(cfg, sink);
        double elapsed = now_seconds() - t0;

        bool ok = rep.stop_reason == solver::StopReason::t_max_reached &&
                  rep.max_l2_drift <= 1e-8 && rep.max_conserved_drift <= 1e-6 &&
                  elapsed <= 60.0;
        std::cout << "  alpha=" << alpha << " l2_drift=" << rep.max_l2_drift
                  << " conserved_drift=" << rep.max_conserved_drift
                  << " runtime=" << elapsed << "s\n";
        all_ok = all_ok && ok;
        CHECK(rep.max_l2_drift <= 1e-8);
        CHECK(rep.max_conserved_drift <= 1e-6);
        CHECK(elapsed <= 60.0);
    }
    verdict(1, all_ok, "L2 and conserved-energy drift over t_max = 5");
}

TEST_CASE("criterion 2: operator oracle equivalence") {
    double t0 = now_seconds();
    GridSpec grid{256, 20.0};
    quad::QuadratureSpec spec;
    bool all_ok = true;
    double worst = 0.0;
    for (double alpha : {0.25, 0.5, 0.75}) {
        quad::PeriodizedKernel keven(grid.length, 1.0 + alpha, false);
        quad::PeriodizedKernel kodd(grid.length, 1.0 + alpha, true);
        for (int i = 0; i < 20; ++i) {
            RealField f = lab::random_band_limited_field(grid, 10, 1000 + i);
            Spectrum s = spectral::to_spectrum(f);
            auto closure = [&s](double y) { return spectral::eval_at(s, y); };
            RealField lam = spectral::frac_laplacian(f, alpha);
            RealField lamh = spectral::frac_laplacian_hilbert(f, alpha);
            double scale = std::max(max_abs(lam), max_abs(lamh));
            for (int pt = 0; pt < 8; ++pt) {
                int j = 16 + 30 * pt;
                double x = grid.node(j);
                double dl = std::abs(
                    quad::frac_laplacian_periodic_at(closure, keven, x, spec).value -
                    lam.values[j]);
                double dh = std::abs(
                    quad::frac_laplacian_hilbert_periodic_at(closure, kodd, x, spec)
                        .value -
                    lamh.values[j]);
                worst = std::max(worst, std::max(dl, dh) / scale);
            }
        }
    }
    all_ok = worst <= 1e-4;
    CHECK(worst <= 1e-4);

    // alpha = 1 endpoint: the multiplier equals the negative derivative
    for (int i = 0; i < 5; ++i) {
        RealField f = lab::random_band_limited_field(grid, 30, 2000 + i);
        RealField h1 = spectral::frac_laplacian_hilbert(f, 1.0);
        RealField ddx = spectral::derivative(f);
        for (auto& v : ddx.values) v = -v;
        double rel = testsup::rel_linf(h1, ddx);
        all_ok = all_ok && rel <= 1e-12;
        CHECK(rel <= 1e-12);
    }
    double elapsed = now_seconds() - t0;
    std::cout << "  worst relative Linf = " << worst << ", runtime = " << elapsed
              << "s\n";
    all_ok = all_ok && elapsed <= 300.0;
    CHECK(elapsed <= 300.0);
    verdict(2, all_ok, "spectral vs quadrature routes agree to 1e-4");
}

TEST_CASE("criterion 3: quartic lower bound certification") {
    bool all_ok = true;
    GridSpec grid{256, 25.0};
    double worst_margin = 1e300;
    for (int i = 0; i < 100; ++i) {
        RealField f = lab::random_band_limited_field(grid, 12, 42 + i);
        lab::CertReport rep = lab::certify_quartic_bound(f);
        worst_margin = std::min(worst_margin, rep.worst_margin);
        all_ok = all_ok && rep.pass;
    }
    GridSpec wide{2048, 60.0};
    RealField u0 = make_field(wide);
    for (int j = 0; j < wide.n_points; ++j)
        u0.values[j] = periodized_rational(wide.node(j), 1.0, 1.0, wide.length);
    lab::CertReport rational = lab::certify_quartic_bound(u0);
    worst_margin = std::min(worst_margin, rational.worst_margin);
    all_ok = all_ok && rational.pass;
    std::cout << "  worst normalized margin over 101 fields = " << worst_margin
              << "\n";
    CHECK(all_ok);
    verdict(3, all_ok, "100 random fields + rational family at tolerance 1e-6");
}

TEST_CASE("criterion 4: threshold reduction and the reproduction run") {
    double t0 = now_seconds();
    bool ok = true;

    // marginal amplitude independent of b
    const double a_star = 128.0 * pi * pi;
    for (double b : {0.5, 1.0, 2.0}) {
        lab::ThresholdReport rep = lab::threshold_check(a_star, b);
        bool marginal = std::abs(rep.margin) <= 1e-9 * rep.threshold_value;
        ok = ok && marginal;
        CHECK(marginal);
    }
    lab::ThresholdReport big = lab::threshold_check(1300.0, 1.0);
    ok = ok && big.satisfied;
    CHECK(big.satisfied);

    // the runs at both resolutions
    const BlowupRun& coarse = blowup_run(8192);
    const BlowupRun& fine = blowup_run(16384);
    for (const BlowupRun* run : {&coarse, &fine}) {
        bool stopped_on_slope =
            run->report.stop_reason == solver::StopReason::slope_factor;
        bool slope_reached =
            run->report.final_ux_max >= 100.0 * run->report.initial_ux_max;
        CHECK(stopped_on_slope);
        CHECK(slope_reached);
        ok = ok && stopped_on_slope && slope_reached;

        double energy = run->records.front().l2_norm * run->records.front().l2_norm;
        diag::OdeInequalityReport mon =
            diag::ode_inequality_monitor(run->records, energy);
        std::cout << "  n=" << run->report.steps << " steps, "
                  << mon.resolved_records << "/" << run->records.size()
                  << " resolved records, inequalities hold = " << mon.all_hold
                  << "\n";
        bool substantial = mon.resolved_records >= run->records.size() / 2;
        CHECK(mon.all_hold);
        CHECK(substantial);
        ok = ok && mon.all_hold && substantial;
        if (!mon.all_hold && mon.first_violation_time)
            std::cout << "  first violation at t = " << *mon.first_violation_time
                      << "\n";
    }
    double agreement = std::abs(coarse.report.t_final - fine.report.t_final) /
                       fine.report.t_final;
    std::cout << "  stop times: " << coarse.report.t_final << " vs "
              << fine.report.t_final << " (rel diff " << agreement << ")\n";
    CHECK(agreement <= 0.05);
    ok = ok && agreement <= 0.05;

    double elapsed = now_seconds() - t0;
    std::cout << "  runtime = " << elapsed << "s\n";
    CHECK(elapsed <= 600.0);
    ok = ok && elapsed <= 600.0;
    verdict(4, ok, "threshold reduction + slope-stop reproduction at two resolutions");
}

TEST_CASE("criterion 5: trajectory curvature identity on the reproduction run") {
    bool ok = true;
    for (int n : {8192, 16384}) {
        const BlowupRun& run = blowup_run(n);
        diag::TrajectoryAccelReport rep = diag::trajectory_accel_check(run.records);
        std::cout << "  N=" << n << ": max relative discrepancy = "
                  << rep.max_rel_discrepancy << " over " << rep.resolved_records
                  << " resolved records\n";
        bool this_ok = rep.max_rel_discrepancy <= 1e-2 &&
                       rep.resolved_records >= run.records.size() / 2;
        CHECK(this_ok);
        ok = ok && this_ok;
    }
    verdict(5, ok, "second difference vs integral identity within 1e-2");
}

TEST_CASE("criterion 6: weighted-functional machinery") {
    // (a) kernel decay fits at the pinned parameters
    quad::WeightParams pinned{0.5, 2.5, 0.5};
    quad::QuadratureSpec spec;
    quad::KernelTable table = quad::build_kernel_table(pinned, 1e-3, 1e3, 8, spec);
    bool small_ok = table.small_fit &&
                    std::abs(table.small_fit->slope + pinned.q + pinned.alpha) <= 0.05;
    bool large_ok = table.large_fit &&
                    std::abs(table.large_fit->slope + 2.0 + pinned.alpha) <= 0.05;
    std::cout << "  small-regime slope = "
              << (table.small_fit ? table.small_fit->slope : 0.0)
              << " (target -1 +- 0.05); large-regime slope = "
              << (table.large_fit ? table.large_fit->slope : 0.0)
              << " (target -2.5 +- 0.05)\n";
    if (!small_ok)
        std::cout << "  NOTE: the small-x power coefficient vanishes identically "
                     "on q + alpha = 1, which contains the pinned parameters; "
                     "the kernel integral is bounded near 0 there (the decay "
                     "BOUND holds, saturation does not). See the project notes."
                  << "\n";
    CHECK(large_ok);
    CHECK(small_ok); // faithful assertion of the criterion text; expected red

    // (b) evolution identity of the weighted functional on a smooth run
    solver::SimConfig cfg;
    cfg.alpha = 0.5;
    cfg.grid = GridSpec{1024, 100.0};
    cfg.t_max = 1.0;
    cfg.dt_policy = solver::DtPolicy::fixed_dt(5e-3);
    cfg.initial_data = SingleMode{0.5, 1};
    cfg.diag_every = 10;
    cfg.stop = solver::StopCriteria{1e6, 0.5};
    cfg.beta0 = 0.0;
    cfg.weights = pinned;
    diag::MemorySink sink;
    solver::run(cfg, sink);
    diag::RiccatiReport rrep = diag::riccati_monitor(sink.records, 0.0, 1.0);
    std::cout << "  evolution identity max discrepancy = "
              << rrep.max_identity_discrepancy << "\n";
    bool identity_ok = rrep.max_identity_discrepancy <= 1e-3;
    CHECK(identity_ok);

    // (c) integrability verdicts vs exponent arithmetic for six triples
    struct Triple {
        double p, q, alpha;
    };
    bool verdicts_ok = true;
    for (Triple t : {Triple{2.5, 0.5, 0.5}, Triple{2.6, 0.3, 0.75},
                     Triple{2.2, 0.9, 0.5}, Triple{3.5, 0.5, 0.5},
                     Triple{3.0, 0.5, 0.1}, Triple{2.6, 0.8, 0.75}}) {
        quad::WeightParams wp{t.q, t.p, t.alpha};
        quad::IntegrabilityReport rep = quad::integrability_report(wp);
        bool expect_origin = t.q < 2.0 * (1.0 - t.alpha);
        bool expect_infinity = t.p < 2.0 + 2.0 * t.alpha;
        bool match = rep.ii_over_w_finite_origin == expect_origin &&
                     rep.ii_over_w_finite_infinity == expect_infinity &&
                     rep.ww_over_w_finite_origin && rep.ww_over_w_finite_infinity;
        std::cout << "  (p=" << t.p << ", q=" << t.q << ", alpha=" << t.alpha
                  << "): kernel-ratio finite origin/infinity = "
                  << rep.ii_over_w_finite_origin << "/"
                  << rep.ii_over_w_finite_infinity << " expected " << expect_origin
                  << "/" << expect_infinity << "\n";
        verdicts_ok = verdicts_ok && match;
        CHECK(match);
    }
    verdict(6, small_ok && large_ok && identity_ok && verdicts_ok,
            "kernel fits / evolution identity / integrability verdicts "
            "(small-regime fit is a documented spec defect at the pinned "
            "parameters)");
}

TEST_CASE("criterion 7: pointwise and integral certificates") {
    double t0 = now_seconds();
    GridSpec grid{256, 20.0};
    bool ok = true;

    // 20 random 1-D fields spread across the (alpha, p) grid
    int count = 0, combo = 0;
    std::uint64_t seed = 7000;
    for (double alpha : {0.5, 1.0, 1.5})
        for (double p : {1.0, 2.0, 4.0}) {
            int fields = (combo++ < 2) ? 3 : 2; // 3+3+2*7 = 20
            for (int i = 0; i < fields; ++i) {
                RealField f = lab::random_band_limited_field(grid, 10, seed++);
                lab::CertReport pw = lab::certify_pointwise_1d(f, alpha, p);
                lab::CertReport g = lab::certify_gns_1d(f, alpha, p);
                ok = ok && pw.pass && g.pass;
                CHECK(pw.pass);
                CHECK(g.pass);
                ++count;
            }
        }
    CHECK(count == 20);

    // classical specialization: alpha = 1, p = 2 with the constant forced
    // to 16 gives identical verdicts and margins
    RealField f0 = lab::random_band_limited_field(grid, 10, 4242);
    lab::CertReport computed = lab::certify_pointwise_1d(f0, 1.0, 2.0);
    lab::CertReport forced = lab::certify_pointwise_1d(f0, 1.0, 2.0, 16.0);
    bool specialization_ok =
        computed.pass == forced.pass &&
        std::abs(computed.worst_margin - forced.worst_margin) < 1e-12;
    CHECK(specialization_ok);
    ok = ok && specialization_ok;

    // five radial bumps in the plane
    for (int i = 0; i < 5; ++i) {
        lab::RadialField2D bump =
            lab::make_gaussian_bump_2d(64, 24.0, 0.5 + 0.25 * i, 1.0 + 0.4 * i);
        lab::CertReport pw = lab::certify_pointwise_2d(bump, 0.5, 2.0, 8);
        lab::CertReport g = lab::certify_gns_2d(bump, 0.5, 2.0);
        ok = ok && pw.pass && g.pass;
        CHECK(pw.pass);
        CHECK(g.pass);
    }

    double elapsed = now_seconds() - t0;
    std::cout << "  runtime = " << elapsed << "s\n";
    CHECK(elapsed <= 600.0);
    ok = ok && elapsed <= 600.0;
    verdict(7, ok, "pointwise bound and integral estimate across the corpus");
}

TEST_CASE("criterion 8: byte-identical records on repeated runs") {
    fs::path dir = fs::temp_directory_path() / "bhlab_acceptance";
    fs::create_directories(dir);
    bool ok = true;
    for (int run = 1; run <= 2; ++run) {
        std::string cfg = R"([grid]
n = 8192
L = 24
[equation]
alpha = 0
[time]
t_max = 0.01
cfl_sigma = 0.1
[initial]
variant = rational
a = 1300
b = 1
[diagnostics]
cadence = 1
beta0 = -1
[stop]
slope_factor = 100
tail_fraction = 0.05
[output]
directory = )" + (dir / ("rep" + std::to_string(run))).string() + "\n";
        std::ofstream(dir / "rep.ini") << cfg;
        int code = run_cli("simulate " + (dir / "rep.ini").string() + " > /dev/null");
        ok = ok && code == 0;
        CHECK(code == 0);
    }
    std::string first = read_file(dir / "rep1" / "records.csv");
    std::string second = read_file(dir / "rep2" / "records.csv");
    bool identical = !first.empty() && first == second;
    CHECK(identical);
    ok = ok && identical;

    // the summary names the slope criterion as the stop reason
    std::string summary = read_file(dir / "rep1" / "summary.txt");
    bool named = summary.find("stop_reason: slope_factor") != std::string::npos;
    CHECK(named);
    ok = ok && named;
    verdict(8, ok, "repeated reproduction run yields byte-identical records.csv");
}
