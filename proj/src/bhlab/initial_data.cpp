#include "bhlab/initial_data.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "bhlab/field_io.hpp"

namespace bhlab {

namespace {

constexpr double pi = std::numbers::pi;

std::complex<double> cot(std::complex<double> w) {
    return std::cos(w) / std::sin(w);
}

// relative L2 mass of the whole-line rational profile outside [-L/2, L/2]
double rational_tail_fraction(double a, double b, double L) {
    // int_T^inf t^2/(1+t^2)^2 dt = (pi/2 - atan T + T/(1+T^2)) / 2
    double T = b * L / 2.0;
    double tail = 0.5 * (pi / 2.0 - std::atan(T) + T / (1.0 + T * T));
    double full = pi / 4.0; // one-sided
    (void)a;
    return tail / full;
}

} // namespace

double rational_profile(double x, double a, double b) {
    return -a * x / (1.0 + (b * x) * (b * x));
}

double rational_profile_hilbert(double x, double a, double b) {
    return (a / b) / (1.0 + (b * x) * (b * x));
}

double periodized_rational(double x, double a, double b, double period) {
    std::complex<double> w(pi * x / period, -pi / (b * period));
    return -(a / (b * b)) * (pi / period) * cot(w).real();
}

double periodized_rational_hilbert(double x, double a, double b, double period) {
    std::complex<double> w(pi * x / period, -pi / (b * period));
    return (a / (b * b)) * (pi / period) * (cot(w).imag() - 1.0);
}

InitialData sample_initial_data(const InitialDataSpec& spec, const GridSpec& grid,
                                double tail_tolerance) {
    grid.validate();
    InitialData out;
    out.field = make_field(grid);
    const int n = grid.n_points;
    const double L = grid.length;

    if (const auto* r = std::get_if<RationalFamily>(&spec)) {
        if (!(r->a > 0.0) || !(r->b > 0.0))
            throw config_error("rational family requires a > 0 and b > 0");
        for (int j = 0; j < n; ++j)
            out.field.values[j] = periodized_rational(grid.node(j), r->a, r->b, L);
        out.beta0_default = -1.0 / r->b; // maximizer of the profile
        out.truncation_tail = rational_tail_fraction(r->a, r->b, L);
        if (out.truncation_tail > tail_tolerance)
            out.warnings.push_back(
                "initial data truncation tail " + std::to_string(out.truncation_tail) +
                " exceeds tolerance " + std::to_string(tail_tolerance));
    } else if (const auto* m = std::get_if<SingleMode>(&spec)) {
        if (m->wavenumber < 1 || m->wavenumber > n / 2)
            throw config_error("single mode wavenumber out of range");
        double k = grid.wavenumber(m->wavenumber);
        for (int j = 0; j < n; ++j)
            out.field.values[j] = m->amplitude * std::sin(k * grid.node(j));
    } else if (const auto* g = std::get_if<GaussianBump>(&spec)) {
        if (!(g->width > 0.0))
            throw config_error("gaussian bump requires positive width");
        for (int j = 0; j < n; ++j) {
            double x = grid.node(j);
            out.field.values[j] =
                g->amplitude * std::exp(-x * x / (2.0 * g->width * g->width));
        }
    } else if (const auto* ff = std::get_if<FromFile>(&spec)) {
        RealField loaded = io::read_field_file(ff->path);
        if (!(loaded.grid == grid))
            throw config_error("field file grid does not match configured grid");
        out.field = std::move(loaded);
    }

    double m = mean_value(out.field);
    if (std::abs(m) > 1e-12) {
        for (double& v : out.field.values) v -= m;
        out.warnings.push_back("initial data mean " + std::to_string(m) +
                               " subtracted to enforce the mean-free invariant");
    }
    out.field.validate();
    return out;
}

} // namespace bhlab
