#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "bhlab/field.hpp"

// Shared test helpers: a deterministic RNG (identical streams on every
// platform), random band-limited fields with analytic closures, and the
// independent brute-force oracles used to freeze expected values.
namespace testsup {

// splitmix64: tiny, seedable, stable across implementations
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [-1, 1]
    double sym() { return 2.0 * (next_u64() >> 11) * 0x1.0p-53 - 1.0; }
    // uniform in [a, b]
    double uniform(double a, double b) {
        return a + (b - a) * ((next_u64() >> 11) * 0x1.0p-53);
    }
    int integer(int lo, int hi) { // inclusive
        return lo + static_cast<int>(next_u64() % (hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

struct TrigField {
    bhlab::RealField field;
    std::function<double(double)> closure; // same trig polynomial on the line
    std::vector<double> cos_coeff, sin_coeff; // index = mode number, 0 unused
    int k_max = 0;
};

// random band-limited mean-free field: modes 1..k_max with 1/k-weighted
// coefficients
inline TrigField random_trig_field(bhlab::GridSpec grid, int k_max, Rng& rng) {
    TrigField out;
    out.k_max = k_max;
    out.cos_coeff.assign(k_max + 1, 0.0);
    out.sin_coeff.assign(k_max + 1, 0.0);
    for (int k = 1; k <= k_max; ++k) {
        out.cos_coeff[k] = rng.sym() / k;
        out.sin_coeff[k] = rng.sym() / k;
    }
    const double k1 = grid.wavenumber(1);
    out.closure = [cos_c = out.cos_coeff, sin_c = out.sin_coeff, k1,
                   k_max](double x) {
        double acc = 0.0;
        for (int k = 1; k <= k_max; ++k)
            acc += cos_c[k] * std::cos(k1 * k * x) + sin_c[k] * std::sin(k1 * k * x);
        return acc;
    };
    out.field = bhlab::make_field(grid);
    for (int j = 0; j < grid.n_points; ++j)
        out.field.values[j] = out.closure(grid.node(j));
    return out;
}

// O(n^2) discrete Fourier sum: series coefficients for nodes starting at
// -L/2, forward 1/n normalization (the independent oracle for the FFT path)
inline std::vector<std::complex<double>> dft_oracle(const bhlab::RealField& f) {
    const int n = f.grid.n_points;
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n; ++j) {
            double phase = -f.grid.wavenumber(k) * f.grid.node(j);
            acc += f.values[j] * std::polar(1.0, phase);
        }
        out[k] = acc / static_cast<double>(n);
    }
    return out;
}

// composite Simpson on [a, b] (even n)
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double max_abs_diff(const bhlab::RealField& a, const bhlab::RealField& b) {
    double m = 0.0;
    for (int j = 0; j < a.grid.n_points; ++j)
        m = std::max(m, std::abs(a.values[j] - b.values[j]));
    return m;
}

inline double rel_linf(const bhlab::RealField& approx, const bhlab::RealField& ref) {
    double scale = bhlab::max_abs(ref);
    return max_abs_diff(approx, ref) / (scale > 0 ? scale : 1.0);
}

} // namespace testsup
