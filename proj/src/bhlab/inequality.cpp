#include "bhlab/inequality.hpp"

#include <cmath>
#include <numbers>

#include "bhlab/fft.hpp"
#include "bhlab/initial_data.hpp"
#include "bhlab/quadrature.hpp"
#include "bhlab/singular_ops.hpp"
#include "bhlab/spectral.hpp"

namespace bhlab::lab {

namespace {

constexpr double pi = std::numbers::pi;

// volume coefficient of the n-ball: |{|y| < r}| = c_n r^n
double ball_coefficient(int dim) {
    return 2.0 * std::pow(pi, 0.5 * dim) / (dim * std::tgamma(0.5 * dim));
}

void finalize(CertReport& rep) {
    rep.pass = rep.worst_margin >= -rep.tolerance;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

RealField random_band_limited_field(const GridSpec& grid, int k_max,
                                    std::uint64_t seed) {
    grid.validate();
    if (k_max < 1 || k_max > grid.n_points / 3)
        throw config_error("random field: k_max out of the dealiased band");
    std::uint64_t state = seed;
    auto sym = [&] { return 2.0 * (splitmix64(state) >> 11) * 0x1.0p-53 - 1.0; };
    std::vector<double> cos_c(k_max + 1), sin_c(k_max + 1);
    for (int k = 1; k <= k_max; ++k) {
        cos_c[k] = sym() / k;
        sin_c[k] = sym() / k;
    }
    RealField f = make_field(grid);
    for (int j = 0; j < grid.n_points; ++j) {
        double x = grid.node(j), acc = 0.0;
        for (int k = 1; k <= k_max; ++k) {
            double th = grid.wavenumber(k) * x;
            acc += cos_c[k] * std::cos(th) + sin_c[k] * std::sin(th);
        }
        f.values[j] = acc;
    }
    return f;
}

CertReport certify_quartic_bound(const RealField& u) {
    u.validate();
    CertReport rep;
    rep.id = "quartic-lower-bound";
    const int n = u.grid.n_points;
    const double h = u.grid.spacing();

    double energy = 0.0;
    for (double v : u.values) energy += v * v;
    energy *= h;
    if (energy == 0.0) { // the zero field: both sides vanish everywhere
        rep.points_checked = n;
        rep.worst_margin = 0.0;
        finalize(rep);
        return rep;
    }

    const double coeff = 1.0 / (32.0 * pi * energy);
    quad::DiniEvaluator dini(u);
    double u_sup = max_abs(u);
    rep.scale = std::max(1.0, std::pow(u_sup, 4) * coeff);
    rep.worst_margin = 1e300;
    for (int j = 0; j < n; ++j) {
        double lhs = coeff * std::pow(u.values[j], 4);
        double rhs = dini.at_node(j);
        double margin = (rhs - lhs) / rep.scale;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_x = u.grid.node(j);
            rep.worst_lhs = lhs;
            rep.worst_rhs = rhs;
        }
    }
    rep.points_checked = n;
    finalize(rep);
    return rep;
}

ThresholdReport threshold_check(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw config_error("threshold_check requires a > 0 and b > 0");
    ThresholdReport rep;
    rep.beta0 = -1.0 / b;

    // ||u0||^2 on the line by quadrature with an algebraic tail
    auto integrand = [&](double y) {
        double v = rational_profile(y, a, b);
        return v * v;
    };
    const double R = 1e7 / b;
    std::vector<double> edges{0.0};
    quad::append_log_edges(edges, 1e-6 / b, R, 32);
    double one_sided = quad::integrate_panels(integrand, edges,
                                              quad::PanelOptions{0.0, 1e-13, 16, true});
    double tail_coeff = R * R * integrand(R); // ~ a^2/b^4
    one_sided += tail_coeff / R;
    rep.energy = 2.0 * one_sided;

    rep.threshold_value = std::cbrt(32.0 * pi * rep.energy);
    double u0_at = rational_profile(rep.beta0, a, b); // = a / (2b)
    rep.margin = u0_at - rep.threshold_value;
    rep.hu0_at_beta0 = rational_profile_hilbert(rep.beta0, a, b);
    rep.satisfied = rep.hu0_at_beta0 > 0.0 && rep.margin >= 0.0;
    return rep;
}

double pointwise_constant_combined(double alpha, double p, int dim) {
    if (!(alpha > 0.0) || !(alpha < 2.0) || !(p > 0.0) || dim < 1)
        throw config_error("pointwise constant: need alpha in (0,2), p > 0");
    const double n = dim;
    const double cn = ball_coefficient(dim);
    return (4.0 * alpha / n) * std::pow((n + alpha) / (alpha * cn), 1.0 + alpha / n) *
           std::pow(2.0, p * alpha / n);
}

double pointwise_constant(double alpha, double p, int dim) {
    return pointwise_constant_combined(alpha, p, dim) /
           quad::frac_laplacian_coeff_nd(alpha, dim);
}

CertReport certify_pointwise_1d(const RealField& f, double alpha, double p,
                                std::optional<double> combined_override) {
    f.validate();
    CertReport rep;
    rep.id = "pointwise-1d";
    const int n = f.grid.n_points;
    const double L = f.grid.length;
    const double h = f.grid.spacing();

    double norm_p = 0.0;
    for (double v : f.values) norm_p += std::pow(std::abs(v), p);
    norm_p = std::pow(norm_p * h, 1.0 / p);
    if (norm_p == 0.0) {
        rep.points_checked = n;
        finalize(rep);
        return rep;
    }

    const double combined =
        combined_override.value_or(pointwise_constant_combined(alpha, p, 1));
    const double exponent = 2.0 + alpha * p;
    const double norm_factor = std::pow(norm_p, alpha * p);

    Spectrum s = spectral::to_spectrum(f);
    auto fn = [&s](double y) { return spectral::eval_at(s, y); };
    quad::PeriodizedKernel kernel(L, 1.0 + alpha, false);
    quad::QuadratureSpec spec;

    rep.worst_margin = 1e300;
    std::vector<double> rhs(n), lhs(n);
    for (int j = 0; j < n; ++j) {
        double x = f.grid.node(j);
        double sq = quad::squared_difference_form_periodic(fn, kernel, x, spec).value;
        rhs[j] = combined * norm_factor * sq;
        lhs[j] = std::pow(std::abs(f.values[j]), exponent);
        rep.scale = std::max(rep.scale, rhs[j]);
    }
    for (int j = 0; j < n; ++j) {
        double margin = (rhs[j] - lhs[j]) / rep.scale;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_x = f.grid.node(j);
            rep.worst_lhs = lhs[j];
            rep.worst_rhs = rhs[j];
        }
    }
    rep.points_checked = n;
    finalize(rep);
    return rep;
}

CertReport certify_gns_1d(const RealField& f, double alpha, double p) {
    f.validate();
    CertReport rep;
    rep.id = "gns-1d";
    const double h = f.grid.spacing();
    const double L = f.grid.length;

    double norm_p = 0.0, lhs = 0.0;
    const double exponent = 2.0 + alpha * p;
    for (double v : f.values) {
        norm_p += std::pow(std::abs(v), p);
        lhs += std::pow(std::abs(v), exponent);
    }
    norm_p = std::pow(norm_p * h, 1.0 / p);
    lhs *= h;

    Spectrum half = spectral::frac_laplacian(spectral::to_spectrum(f), 0.5 * alpha);
    double seminorm_sq = L * spectral::spectral_energy(half);

    double rhs = 2.0 * pointwise_constant(alpha, p, 1) * std::pow(norm_p, alpha * p) *
                 seminorm_sq;
    rep.points_checked = 1;
    rep.scale = std::max(1.0, rhs);
    rep.worst_margin = (rhs - lhs) / rep.scale;
    rep.worst_lhs = lhs;
    rep.worst_rhs = rhs;
    finalize(rep);
    return rep;
}

RadialField2D make_gaussian_bump_2d(int n, double length, double amplitude,
                                    double width) {
    if (n < 16 || n > 512)
        throw config_error("2-D grids are limited to 16..512 per side");
    if (!(width > 0.0) || !(length > 0.0))
        throw config_error("gaussian bump needs positive width and box size");
    RadialField2D f;
    f.n = n;
    f.length = length;
    f.amplitude = amplitude;
    f.width = width;
    f.radial = [amplitude, width](double r) {
        return amplitude * std::exp(-r * r / (2.0 * width * width));
    };
    f.evaluator = [radial = f.radial](double x, double y) {
        return radial(std::hypot(x, y));
    };
    f.values.resize(static_cast<std::size_t>(n) * n);
    const double h = length / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = -0.5 * length + i * h;
            double y = -0.5 * length + j * h;
            f.values[static_cast<std::size_t>(i) * n + j] = f.evaluator(x, y);
        }
    return f;
}

namespace {

// the squared-difference quadratic form around x in the plane, polar
// quadrature: int r^(-1-alpha) Theta(r) dr with
// Theta(r) = int (f(x + r e_theta) - f(x))^2 dtheta
double squared_difference_form_2d(const RadialField2D& f, double px, double py,
                                  double alpha) {
    const int n_theta = 64;
    const double fx = f.evaluator(px, py);
    auto theta_avg = [&](double r) {
        double acc = 0.0;
        for (int k = 0; k < n_theta; ++k) {
            double th = 2.0 * pi * k / n_theta;
            double d = f.evaluator(px + r * std::cos(th), py + r * std::sin(th)) - fx;
            acc += d * d;
        }
        return acc * (2.0 * pi / n_theta);
    };

    const double eps = 1e-6 * f.width;
    double gx = (f.evaluator(px + eps, py) - f.evaluator(px - eps, py)) / (2.0 * eps);
    double gy = (f.evaluator(px, py + eps) - f.evaluator(px, py - eps)) / (2.0 * eps);
    double inner = pi * (gx * gx + gy * gy) * std::pow(eps, 2.0 - alpha) / (2.0 - alpha);

    const double reach = std::hypot(px, py) + 12.0 * f.width + 10.0;
    std::vector<double> edges;
    quad::append_log_edges(edges, eps, reach, 24);
    auto integrand = [&](double r) {
        return theta_avg(r) * std::pow(r, -1.0 - alpha);
    };
    double mid = quad::integrate_panels(integrand, edges,
                                        quad::PanelOptions{0.0, 1e-8, 12, true});

    // beyond the reach the bump is numerically zero
    double tail = 2.0 * pi * fx * fx * std::pow(reach, -alpha) / alpha;
    return inner + mid + tail;
}

double radial_power_integral(const RadialField2D& f, double exponent) {
    auto integrand = [&](double r) {
        return 2.0 * pi * r * std::pow(std::abs(f.radial(r)), exponent);
    };
    std::vector<double> edges{0.0};
    quad::append_log_edges(edges, 1e-6 * f.width, 12.0 * f.width + 10.0, 24);
    return quad::integrate_panels(integrand, edges,
                                  quad::PanelOptions{0.0, 1e-11, 12, true});
}

} // namespace

CertReport certify_pointwise_2d(const RadialField2D& f, double alpha, double p,
                                int sample_stride) {
    CertReport rep;
    rep.id = "pointwise-2d";
    if (sample_stride < 1) throw config_error("sample stride must be >= 1");

    const double norm_p = std::pow(radial_power_integral(f, p), 1.0 / p);
    const double combined = pointwise_constant_combined(alpha, p, 2);
    const double exponent = 2.0 + alpha * p / 2.0;
    const double norm_factor = std::pow(norm_p, alpha * p / 2.0);
    const double h = f.length / f.n;

    rep.worst_margin = 1e300;
    std::vector<std::pair<double, double>> points;
    std::vector<double> rhs_all, lhs_all;
    for (int i = 0; i < f.n; i += sample_stride)
        for (int j = 0; j < f.n; j += sample_stride) {
            double x = -0.5 * f.length + i * h;
            double y = -0.5 * f.length + j * h;
            double sq = squared_difference_form_2d(f, x, y, alpha);
            rhs_all.push_back(combined * norm_factor * sq);
            lhs_all.push_back(std::pow(std::abs(f.evaluator(x, y)), exponent));
            points.emplace_back(x, y);
            rep.scale = std::max(rep.scale, rhs_all.back());
        }
    for (std::size_t k = 0; k < rhs_all.size(); ++k) {
        double margin = (rhs_all[k] - lhs_all[k]) / rep.scale;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_x = points[k].first;
            rep.worst_y = points[k].second;
            rep.worst_lhs = lhs_all[k];
            rep.worst_rhs = rhs_all[k];
        }
    }
    rep.points_checked = static_cast<int>(rhs_all.size());
    finalize(rep);
    return rep;
}

CertReport certify_gns_2d(const RadialField2D& f, double alpha, double p) {
    CertReport rep;
    rep.id = "gns-2d";
    const double exponent = 2.0 + alpha * p / 2.0;
    double lhs = radial_power_integral(f, exponent);
    double norm_p = std::pow(radial_power_integral(f, p), 1.0 / p);

    // spectral Parseval on the periodic box (the bump is numerically
    // compactly supported, so the box surrogate is exact to rounding)
    std::vector<std::complex<double>> fhat = fft::forward_2d(f.n, f.values);
    const double k0 = 2.0 * pi / f.length;
    double seminorm_sq = 0.0;
    const int half = f.n / 2;
    for (int i = 0; i < f.n; ++i) {
        int ki = (i <= half) ? i : i - f.n;
        for (int j = 0; j <= half; ++j) {
            double w = (j == 0 || j == half) ? 1.0 : 2.0;
            double ksq = k0 * k0 * (static_cast<double>(ki) * ki +
                                    static_cast<double>(j) * j);
            seminorm_sq += w * std::pow(ksq, 0.5 * alpha) *
                           std::norm(fhat[static_cast<std::size_t>(i) * (half + 1) + j]);
        }
    }
    seminorm_sq *= f.length * f.length;

    double rhs = 2.0 * pointwise_constant(alpha, p, 2) *
                 std::pow(norm_p, alpha * p / 2.0) * seminorm_sq;
    rep.points_checked = 1;
    rep.scale = std::max(1.0, rhs);
    rep.worst_margin = (rhs - lhs) / rep.scale;
    rep.worst_lhs = lhs;
    rep.worst_rhs = rhs;
    finalize(rep);
    return rep;
}

} // namespace bhlab::lab
