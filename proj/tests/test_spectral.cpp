#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <thread>

#include "bhlab/initial_data.hpp"
#include "bhlab/spectral.hpp"
#include "support.hpp"

using namespace bhlab;
using namespace bhlab::spectral;
using testsup::Rng;

namespace {
constexpr double pi = std::numbers::pi;

RealField sampled(const GridSpec& grid, const std::function<double(double)>& f) {
    RealField out = make_field(grid);
    for (int j = 0; j < grid.n_points; ++j) out.values[j] = f(grid.node(j));
    return out;
}
} // namespace

TEST_CASE("transform round trip: zero field") {
    GridSpec grid{64, 10.0};
    RealField z = make_field(grid);
    Spectrum s = to_spectrum(z);
    for (auto c : s.coeffs) CHECK(std::abs(c) == 0.0);
    RealField back = from_spectrum(s);
    CHECK(testsup::max_abs_diff(z, back) == 0.0);
}

TEST_CASE("transform: cosine mode hits exactly one stored coefficient") {
    GridSpec grid{128, 5.0};
    RealField f = sampled(grid, [&](double x) { return std::cos(grid.wavenumber(1) * x); });
    Spectrum s = to_spectrum(f);
    CHECK(std::abs(s.coeffs[1] - std::complex<double>(0.5, 0.0)) < 1e-14);
    for (int k = 0; k <= s.max_mode(); ++k) {
        if (k == 1) continue;
        CHECK(std::abs(s.coeffs[k]) < 1e-14);
    }
}

TEST_CASE("transform round trip vs direct Fourier sum on random fields") {
    Rng rng(2024);
    GridSpec grid{128, 7.5};
    for (int trial = 0; trial < 5; ++trial) {
        RealField f = make_field(grid);
        for (auto& v : f.values) v = rng.sym();
        Spectrum s = to_spectrum(f);
        auto oracle = testsup::dft_oracle(f);
        for (int k = 0; k <= s.max_mode(); ++k)
            CHECK(std::abs(s.coeffs[k] - oracle[k]) < 1e-12);
        RealField back = from_spectrum(s);
        CHECK(testsup::rel_linf(back, f) < 1e-12);
    }
}

TEST_CASE("transform: length mismatch is a configuration error") {
    GridSpec grid{64, 10.0};
    RealField bad{grid, std::vector<double>(63, 0.0)};
    CHECK_THROWS_AS((void)to_spectrum(bad), config_error);
}

TEST_CASE("hilbert: single modes") {
    GridSpec grid{256, 4.0};
    RealField z = make_field(grid);
    CHECK(max_abs(hilbert(z)) == 0.0);
    for (int m : {1, 3, 7}) {
        double k = grid.wavenumber(m);
        RealField f = sampled(grid, [&](double x) { return std::sin(k * x); });
        RealField expect = sampled(grid, [&](double x) { return -std::cos(k * x); });
        CHECK(testsup::rel_linf(hilbert(f), expect) < 1e-13);
    }
}

TEST_CASE("hilbert of the rational family matches the closed form") {
    // a = b = 1 on a wide box; compare on the central half of the domain.
    // The periodic transform returns the mean-free representative, so the
    // box mean of the closed-form target (~ a*pi/(b*L)) is subtracted for a
    // like-for-like comparison.
    GridSpec grid{32768, 800.0};
    const double a = 1.0, b = 1.0;
    RealField u0 = sampled(grid, [&](double x) {
        return periodized_rational(x, a, b, grid.length);
    });
    RealField hu = hilbert(u0);
    const double box_mean =
        (2.0 * a / (b * grid.length)) * std::atan(b * grid.length / 2.0);
    double worst = 0.0;
    for (int j = 0; j < grid.n_points; ++j) {
        double x = grid.node(j);
        if (std::abs(x) > grid.length / 4) continue;
        worst = std::max(worst, std::abs(hu.values[j] + box_mean -
                                         rational_profile_hilbert(x, a, b)));
    }
    CHECK(worst < 1e-3);
    // and the periodized closed form reproduces it much more tightly
    double worst_per = 0.0;
    for (int j = 0; j < grid.n_points; ++j) {
        double x = grid.node(j);
        worst_per = std::max(
            worst_per,
            std::abs(hu.values[j] - periodized_rational_hilbert(x, a, b, grid.length)));
    }
    CHECK(worst_per < 1e-11);
}

TEST_CASE("frac_laplacian: constants and single modes") {
    GridSpec grid{128, 6.0};
    RealField c = sampled(grid, [](double) { return 2.5; });
    for (double s : {0.25, 0.5, 1.0})
        CHECK(max_abs(frac_laplacian(c, s)) < 1e-13);

    for (int m : {1, 4}) {
        double k = grid.wavenumber(m);
        RealField f = sampled(grid, [&](double x) { return std::sin(k * x); });
        for (double s : {0.25, 0.5, 1.5}) {
            RealField expect = sampled(grid, [&](double x) {
                return std::pow(k, s) * std::sin(k * x);
            });
            CHECK(testsup::rel_linf(frac_laplacian(f, s), expect) < 1e-12);
        }
    }
}

TEST_CASE("frac_laplacian: negative power requires a mean-free field") {
    GridSpec grid{64, 6.0};
    RealField biased = sampled(grid, [](double) { return 1.0; });
    CHECK_THROWS_AS((void)frac_laplacian(biased, -0.5), precondition_error);
    RealField ok = sampled(grid, [&](double x) {
        return std::sin(grid.wavenumber(2) * x);
    });
    CHECK_NOTHROW((void)frac_laplacian(ok, -0.5));
}

TEST_CASE("nonlocal term: alpha endpoints and half power") {
    GridSpec grid{256, 9.0};
    Rng rng(77);
    testsup::TrigField tf = testsup::random_trig_field(grid, 12, rng);

    RealField h0 = frac_laplacian_hilbert(tf.field, 0.0);
    CHECK(testsup::rel_linf(h0, hilbert(tf.field)) < 1e-13);

    RealField h1 = frac_laplacian_hilbert(tf.field, 1.0);
    RealField ddx = derivative(tf.field);
    for (auto& v : ddx.values) v = -v;
    CHECK(testsup::rel_linf(h1, ddx) < 1e-12);

    double k = grid.wavenumber(1);
    RealField f = sampled(grid, [&](double x) { return std::sin(k * x); });
    RealField expect = sampled(grid, [&](double x) {
        return -std::sqrt(k) * std::cos(k * x);
    });
    CHECK(testsup::rel_linf(frac_laplacian_hilbert(f, 0.5), expect) < 1e-12);

    CHECK_THROWS_AS((void)frac_laplacian_hilbert(tf.field, 1.5), config_error);
}

TEST_CASE("dealias: support rules and the convolution oracle") {
    GridSpec grid{128, 2.0 * pi};
    const int cut = grid.n_points / 3;

    Rng rng(5);
    testsup::TrigField a = testsup::random_trig_field(grid, cut / 2, rng);
    Spectrum sa = to_spectrum(a.field);
    Spectrum da = dealias(sa);
    for (int k = 0; k <= sa.max_mode(); ++k)
        CHECK(std::abs(da.coeffs[k] - sa.coeffs[k]) < 1e-15);

    Spectrum nyq{grid, std::vector<std::complex<double>>(grid.n_points / 2 + 1)};
    nyq.coeffs[grid.n_points / 2] = 1.0;
    Spectrum dn = dealias(nyq);
    for (auto c : dn.coeffs) CHECK(std::abs(c) == 0.0);

    // product of two fields supported on |k| <= n/3: the dealiased
    // pseudospectral product equals the exact truncated convolution
    testsup::TrigField b = testsup::random_trig_field(grid, cut / 2, rng);
    Spectrum sb = to_spectrum(b.field);
    RealField prod = make_field(grid);
    for (int j = 0; j < grid.n_points; ++j)
        prod.values[j] = a.field.values[j] * b.field.values[j];
    Spectrum sp = dealias(to_spectrum(prod));

    auto full = [&](const Spectrum& s, int k) { return s.coeff(k); };
    for (int k = 0; k <= cut; ++k) {
        std::complex<double> conv = 0.0;
        for (int m = -cut; m <= cut; ++m) {
            if (std::abs(k - m) > cut) continue;
            conv += full(sa, m) * full(sb, k - m);
        }
        CHECK(std::abs(sp.coeffs[k] - conv) < 1e-13);
    }
}

TEST_CASE("property: Parseval over random fields") {
    Rng rng(9001);
    GridSpec grid{256, 11.0};
    for (int trial = 0; trial < 100; ++trial) {
        RealField f = make_field(grid);
        for (auto& v : f.values) v = rng.sym();
        Spectrum s = to_spectrum(f);
        double grid_sum = 0.0;
        for (double v : f.values) grid_sum += v * v;
        grid_sum *= grid.spacing();
        double spec_sum = grid.length * spectral_energy(s);
        CHECK(std::abs(grid_sum - spec_sum) <= 1e-12 * grid_sum);
    }
}

TEST_CASE("property: hilbert twice negates mean-free fields") {
    Rng rng(13);
    GridSpec grid{128, 3.0};
    for (int trial = 0; trial < 20; ++trial) {
        testsup::TrigField tf = testsup::random_trig_field(grid, 40, rng);
        RealField hh = hilbert(hilbert(tf.field));
        RealField neg = tf.field;
        for (auto& v : neg.values) v = -v;
        // the Nyquist-free content must negate exactly; these fields have none
        CHECK(testsup::rel_linf(hh, neg) < 1e-12);
    }
}

TEST_CASE("property: fractional powers compose additively") {
    Rng rng(31);
    GridSpec grid{128, 5.0};
    testsup::TrigField tf = testsup::random_trig_field(grid, 30, rng);
    for (double a : {0.25, 0.5, -0.5})
        for (double b : {0.25, 0.5, -0.5}) {
            RealField lhs = frac_laplacian(frac_laplacian(tf.field, a), b);
            RealField rhs = frac_laplacian(tf.field, a + b);
            CHECK(testsup::rel_linf(lhs, rhs) < 1e-10);
        }
}

TEST_CASE("property: the nonlocal term factors through either order") {
    Rng rng(47);
    GridSpec grid{128, 5.0};
    testsup::TrigField tf = testsup::random_trig_field(grid, 30, rng);
    for (double alpha : {0.25, 0.5, 0.75}) {
        RealField direct = frac_laplacian_hilbert(tf.field, alpha);
        RealField hl = hilbert(frac_laplacian(tf.field, alpha));
        RealField lh = frac_laplacian(hilbert(tf.field), alpha);
        CHECK(testsup::rel_linf(direct, hl) < 1e-12);
        CHECK(testsup::rel_linf(direct, lh) < 1e-12);
    }
}

TEST_CASE("transforms are safe to run concurrently") {
    Rng rng(99);
    GridSpec grid{512, 8.0};
    testsup::TrigField tf = testsup::random_trig_field(grid, 50, rng);
    RealField reference = hilbert(tf.field);
    std::vector<RealField> results(8);
    std::vector<std::thread> workers;
    for (auto& slot : results)
        workers.emplace_back([&tf, &slot] { slot = hilbert(tf.field); });
    for (auto& w : workers) w.join();
    for (const auto& r : results) CHECK(testsup::max_abs_diff(r, reference) == 0.0);
}

TEST_CASE("off-grid evaluation reproduces band-limited closures") {
    Rng rng(3);
    GridSpec grid{128, 6.0};
    testsup::TrigField tf = testsup::random_trig_field(grid, 20, rng);
    Spectrum s = to_spectrum(tf.field);
    for (int i = 0; i < 50; ++i) {
        double x = rng.uniform(-3.0, 3.0);
        CHECK(std::abs(eval_at(s, x) - tf.closure(x)) < 1e-11);
    }
}
