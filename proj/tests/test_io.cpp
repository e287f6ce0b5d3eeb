#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bhlab/config.hpp"
#include "bhlab/field_io.hpp"
#include "bhlab/report_io.hpp"
#include "support.hpp"

using namespace bhlab;
namespace fs = std::filesystem;

namespace {

const char* kGoodConfig = R"(# comment line
[grid]
n = 256
L = 30
[equation]
alpha = 0.25
[time]
t_max = 0.5
cfl_sigma = 0.4
[initial]
variant = rational
a = 2
b = 1
[diagnostics]
cadence = 5
beta0 = -1
weight_p = 2.5
weight_q = 0.5
[stop]
slope_factor = 100
tail_fraction = 0.2
[output]
directory = out
plot = off
)";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "bhlab_io_test";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(BHLAB_CLI_PATH) + " " + args;
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("config: happy path populates every section") {
    io::RunConfig cfg = io::parse_config_text(kGoodConfig);
    CHECK(cfg.sim.grid.n_points == 256);
    CHECK(cfg.sim.grid.length == 30.0);
    CHECK(cfg.sim.alpha == 0.25);
    CHECK(cfg.sim.t_max == 0.5);
    CHECK(cfg.sim.dt_policy.kind == solver::DtPolicy::Kind::cfl);
    CHECK(std::get<RationalFamily>(cfg.sim.initial_data).a == 2.0);
    CHECK(cfg.sim.diag_every == 5);
    CHECK(cfg.sim.beta0.value() == -1.0);
    REQUIRE(cfg.sim.weights.has_value());
    CHECK(cfg.sim.weights->p == 2.5);
    CHECK(cfg.sim.weights->alpha == 0.25);
    CHECK(cfg.output_directory == "out");
    CHECK(!cfg.plot);
}

TEST_CASE("config: missing and unknown keys are named in the error") {
    std::string no_alpha = kGoodConfig;
    no_alpha.replace(no_alpha.find("alpha = 0.25"), 12, "# removed");
    try {
        io::parse_config_text(no_alpha);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }

    std::string unknown = kGoodConfig;
    unknown += "\n[grid]\n";
    CHECK_THROWS_AS((void)io::parse_config_text(kGoodConfig + std::string("junk = 1\n")),
                    config_error);

    std::string both_dt = kGoodConfig;
    both_dt.replace(both_dt.find("cfl_sigma = 0.4"), 15, "cfl_sigma = 0.4\ndt = 0.1");
    CHECK_THROWS_AS((void)io::parse_config_text(both_dt), config_error);

    std::string bad_variant = kGoodConfig;
    bad_variant.replace(bad_variant.find("variant = rational"), 18,
                        "variant = sawtooth");
    CHECK_THROWS_AS((void)io::parse_config_text(bad_variant), config_error);

    std::string lonely_weight = kGoodConfig;
    lonely_weight.replace(lonely_weight.find("weight_q = 0.5"), 14, "# removed");
    CHECK_THROWS_AS((void)io::parse_config_text(lonely_weight), config_error);
}

TEST_CASE("field file: exact round trip") {
    testsup::Rng rng(314);
    GridSpec grid{64, 12.5};
    RealField f = make_field(grid);
    for (auto& v : f.values) v = rng.sym() * std::pow(10.0, rng.integer(-8, 8));

    fs::path path = temp_dir() / "field.txt";
    io::write_field_file(path.string(), f);
    RealField g = io::read_field_file(path.string());
    CHECK(g.grid == f.grid);
    for (int j = 0; j < grid.n_points; ++j)
        CHECK(g.values[j] == f.values[j]); // bitwise
    std::string header = read_file(path).substr(0, 24);
    CHECK(header.rfind("# bh-field v1 n=64 L=", 0) == 0);

    CHECK_THROWS_AS((void)io::read_field_file("/nonexistent/path.txt"), config_error);
}

TEST_CASE("records csv: fixed schema and 17-digit serialization") {
    CHECK(std::string(io::kRecordsCsvHeader) ==
          "t,l2,hamiltonian,mean,u_max,ux_max,J_traj,HJ_traj,dini_at_traj,"
          "J_weight,rhs8_value");
    diag::DiagRecord r;
    r.t = 1.0 / 3.0;
    r.l2_norm = 0.1;
    r.conserved_energy = -2.5;
    std::string line = io::record_csv_line(r);
    CHECK(line.rfind("0.33333333333333331,0.10000000000000001,-2.5,", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ',') == 10);
}

TEST_CASE("format_double round-trips through parse_double") {
    testsup::Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        double v = rng.sym() * std::pow(10.0, rng.integer(-12, 12));
        CHECK(io::parse_double(io::format_double(v)) == v);
    }
}

TEST_CASE("cli: config errors name the offending key and exit 1") {
    fs::path dir = temp_dir();
    std::string text = kGoodConfig;
    text.replace(text.find("alpha = 0.25"), 12, "# removed");
    std::ofstream(dir / "broken.ini") << text;
    int code = run_cli("simulate " + (dir / "broken.ini").string() +
                       " 2> " + (dir / "err.txt").string());
    CHECK(code == 1);
    CHECK(read_file(dir / "err.txt").find("alpha") != std::string::npos);
}

TEST_CASE("cli: a zero-amplitude run exits 0 with all-zero records") {
    fs::path dir = temp_dir();
    fs::path out = dir / "zero_out";
    std::string cfg = R"([grid]
n = 64
L = 10
[equation]
alpha = 0
[time]
t_max = 0.1
dt = 0.01
[initial]
variant = single_mode
amplitude = 0
wavenumber = 1
[diagnostics]
cadence = 1
[stop]
slope_factor = 100
tail_fraction = 0.5
[output]
directory = )" + out.string() + "\n";
    std::ofstream(dir / "zero.ini") << cfg;
    int code = run_cli("simulate " + (dir / "zero.ini").string() + " > /dev/null");
    CHECK(code == 0);
    std::istringstream csv(read_file(out / "records.csv"));
    std::string line;
    std::getline(csv, line); // header
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        // every column after t is exactly zero
        auto first_comma = line.find(',');
        std::istringstream cols(line.substr(first_comma + 1));
        std::string cell;
        while (std::getline(cols, cell, ','))
            CHECK(io::parse_double(cell) == 0.0);
    }
    CHECK(rows >= 2);
}

TEST_CASE("cli: certification verdict drives the exit code") {
    CHECK(run_cli("certify threshold --a 1300 --b 1 > /dev/null") == 0);
    CHECK(run_cli("certify threshold --a 1 --b 1 > /dev/null") == 3);
    CHECK(run_cli("certify threshold --a -3 --b 1 > /dev/null 2>&1") == 1);
    // invalid weight parameter: q must lie in (0, 1)
    CHECK(run_cli("kernel-table --p 2.5 --q 1.5 --alpha 0.5 > /dev/null 2>&1") == 1);
}

TEST_CASE("cli: identical configs produce byte-identical records") {
    fs::path dir = temp_dir();
    for (int run = 1; run <= 2; ++run) {
        std::string cfg = R"([grid]
n = 256
L = 30
[equation]
alpha = 0.5
[time]
t_max = 0.05
cfl_sigma = 0.4
[initial]
variant = rational
a = 5
b = 1
[diagnostics]
cadence = 2
weight_p = 2.5
weight_q = 0.5
[stop]
slope_factor = 100
tail_fraction = 0.2
[output]
directory = )" + (dir / ("det" + std::to_string(run))).string() + "\n";
        std::ofstream(dir / "det.ini") << cfg;
        REQUIRE(run_cli("simulate " + (dir / "det.ini").string() + " > /dev/null") == 0);
    }
    std::string first = read_file(dir / "det1" / "records.csv");
    std::string second = read_file(dir / "det2" / "records.csv");
    CHECK(first.size() > 100);
    CHECK(first == second);
}

TEST_CASE("cli: kernel table fits pass away from the degenerate line") {
    fs::path dir = temp_dir();
    // q + alpha != 1: both decay fits land on their predicted exponents
    int code = run_cli("kernel-table --p 2.5 --q 0.5 --alpha 0.75 --out " +
                       (dir / "kt").string() + " > " +
                       (dir / "kt.txt").string());
    CHECK(code == 0);
    std::string csv = read_file(dir / "kt" / "kernel.csv");
    CHECK(csv.rfind("x,I_value,tail_bound\n", 0) == 0);

    // mid-range only: no fit is asserted, the bounded-regime constant is
    // reported, exit is clean
    code = run_cli("kernel-table --p 2.5 --q 0.5 --alpha 0.5 --x-min 0.5 "
                   "--x-max 2 --out " + (dir / "kt_mid").string() + " > " +
                   (dir / "kt_mid.txt").string());
    CHECK(code == 0);
    CHECK(read_file(dir / "kt_mid.txt").find("mid-range only") != std::string::npos);
}

TEST_CASE("cli: seeded certificates are deterministic and pass") {
    fs::path dir = temp_dir();
    for (int run = 1; run <= 2; ++run) {
        int code = run_cli("certify lemma22 --fields 100 --seed 42 --out " +
                           (dir / ("cert" + std::to_string(run) + ".txt")).string() +
                           " > /dev/null");
        CHECK(code == 0);
    }
    std::string first = read_file(dir / "cert1.txt");
    CHECK(first.find("verdict: pass") != std::string::npos);
    CHECK(first == read_file(dir / "cert2.txt"));
}
