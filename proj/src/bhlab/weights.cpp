#include "bhlab/weights.hpp"

#include <algorithm>
#include <cmath>

#include "bhlab/singular_ops.hpp"

namespace bhlab::quad {

void WeightParams::validate() const {
    if (!(q > 0.0) || !(q < 1.0))
        throw config_error("weight params require 0 < q < 1");
    if (!(p > 2.0))
        throw config_error("weight params require p > 2");
}

double weight_w(double x, const WeightParams& wp) {
    if (x == 0.0)
        throw config_error("weight_w: x must be nonzero");
    double ax = std::abs(x);
    double mag = (ax < 1.0) ? std::pow(ax, -wp.q) : std::pow(ax, -wp.p);
    return x > 0.0 ? mag : -mag;
}

double weight_W(double x, const WeightParams& wp) {
    if (x == 0.0)
        throw config_error("weight_W: x must be nonzero");
    double ax = std::abs(x);
    return (ax < 1.0) ? wp.q * std::pow(ax, -wp.q - 1.0)
                      : wp.p * std::pow(ax, -wp.p - 1.0);
}

namespace {

// log-graded edges over [a, b] with interior breakpoints (kinks)
std::vector<double> log_edges_with_breaks(double a, double b,
                                          std::vector<double> breaks,
                                          int per_decade) {
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double t : breaks)
        if (t > a * (1.0 + 1e-12) && t < b * (1.0 - 1e-12)) pts.push_back(t);
    pts.push_back(b);
    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        append_log_edges(edges, pts[i], pts[i + 1], per_decade);
    return edges;
}

// absolute tolerance floors: the integrands are built from differences of
// O(sup) function values, so no result can be resolved below
// eps * sup * (L1 mass of the kernel over the panel range)
PanelOptions weight_opts(double sup, double kernel_mass) {
    return PanelOptions{1e-13 * sup * kernel_mass + 1e-300, 1e-9, 14, true};
}

} // namespace

QuadResult weighted_functional(const Fn& u, double period, double x,
                               const WeightParams& wp, double u_sup) {
    wp.validate();
    const double half = 0.5 * period;
    const double eps = std::min(1e-5, 1e-4 * half);
    // odd kernel: J u(x) = int_0^{L/2} w(s) [u(x-s) - u(x+s)] ds
    auto g = [&](double s) { return u(x - s) - u(x + s); };

    // w(s) = s^-q on the inner slice; g(s) ~ -2 u'(x) s there
    double inner = g(eps) * std::pow(eps, 1.0 - wp.q) / (2.0 - wp.q);

    std::vector<double> edges =
        log_edges_with_breaks(eps, half, {1.0}, 32);
    apply_width_cap(edges, period / 64.0);
    auto integrand = [&](double s) { return weight_w(s, wp) * g(s); };
    double qerr = 0.0;
    double kernel_mass = 2.0 / (1.0 - wp.q) + 2.0 / (wp.p - 1.0);
    double mid = integrate_panels(integrand, edges,
                                  weight_opts(u_sup, kernel_mass), &qerr);

    double tail_bound =
        2.0 * u_sup * std::pow(half, 1.0 - wp.p) / (wp.p - 1.0);
    return {inner + mid, qerr, tail_bound};
}

QuadResult weighted_difference(const Fn& g, double period, double x,
                               const WeightParams& wp, double g_sup) {
    wp.validate();
    const double half = 0.5 * period;
    const double eps = std::min(1e-5, 1e-4 * half);
    const double gx = g(x);

    double d2 = (g(x + eps) - 2.0 * gx + g(x - eps)) / (eps * eps);
    double inner = -d2 * wp.q * std::pow(eps, 2.0 - wp.q) / (2.0 - wp.q);

    std::vector<double> edges =
        log_edges_with_breaks(eps, half, {1.0}, 32);
    apply_width_cap(edges, period / 64.0);
    auto integrand = [&](double s) {
        return weight_W(s, wp) * (2.0 * gx - g(x - s) - g(x + s));
    };
    double qerr = 0.0;
    double kernel_mass = 4.0 * (std::pow(eps, -wp.q) + 1.0);
    double mid = integrate_panels(integrand, edges,
                                  weight_opts(g_sup, kernel_mass), &qerr);

    double tail_bound = 2.0 * g_sup * std::pow(half, -wp.p);
    return {inner + mid, qerr, tail_bound};
}

QuadResult weighted_square_difference(const Fn& u, double period, double x,
                                      const WeightParams& wp, double u_sup) {
    wp.validate();
    const double half = 0.5 * period;
    const double eps = std::min(1e-5, 1e-4 * half);
    const double ux = u(x);

    double d1 = (u(x + eps) - u(x - eps)) / (2.0 * eps);
    double inner = 2.0 * d1 * d1 * wp.q * std::pow(eps, 2.0 - wp.q) / (2.0 - wp.q);

    std::vector<double> edges =
        log_edges_with_breaks(eps, half, {1.0}, 32);
    apply_width_cap(edges, period / 64.0);
    auto integrand = [&](double s) {
        double dm = ux - u(x - s), dp = ux - u(x + s);
        return weight_W(s, wp) * (dm * dm + dp * dp);
    };
    double qerr = 0.0;
    double kernel_mass = 4.0 * (std::pow(eps, -wp.q) + 1.0);
    double mid = integrate_panels(integrand, edges,
                                  weight_opts(u_sup * u_sup, kernel_mass), &qerr);

    double tail_bound = 4.0 * u_sup * u_sup * std::pow(half, -wp.p);
    return {inner + mid, qerr, tail_bound};
}

namespace {

// one-sided Taylor coefficients of t -> (x0 +/- t)^(-gamma) at t = 0
struct SideSeries {
    double c1, c2, c3;
};

SideSeries branch_series(double x0, double gamma, double sgn) {
    double c1 = sgn * -gamma * std::pow(x0, -gamma - 1.0);
    double c2 = gamma * (gamma + 1.0) * std::pow(x0, -gamma - 2.0) / 2.0;
    double c3 = sgn * -gamma * (gamma + 1.0) * (gamma + 2.0) *
                std::pow(x0, -gamma - 3.0) / 6.0;
    return {c1, c2, c3};
}

} // namespace

QuadResult kernel_integral(double x_in, const WeightParams& wp,
                           const QuadratureSpec& spec) {
    wp.validate();
    spec.validate();
    if (x_in == 0.0)
        throw config_error("kernel_integral: x must be nonzero");
    const double x = std::abs(x_in); // the integral is even in x
    const double alpha = wp.alpha;
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw config_error("kernel_integral: need 0 < alpha < 1");

    const double d = 0.5 * x;
    double tau0 = std::abs(1.0 - x); // kink offset from the expansion point
    const bool at_unit = tau0 < 1e-10 * std::max(1.0, x);
    if (at_unit) tau0 = 0.0;

    const int ppd = std::max(spec.panels_per_decade, 16);
    const PanelOptions opts{0.0, 1e-11, 16, true};
    double err = 0.0, qe = 0.0;

    // region A: symmetric window around the expansion point,
    //   int_0^d [w(x+t) - w(x-t)] t^(-1-alpha) dt
    double eps = d / 64.0;
    if (tau0 > 0.0) eps = std::min(eps, tau0 / 4.0);
    // eps < tau0/4 keeps both sides on a single branch of the kernel
    double gamma_plus = (x >= 1.0 || at_unit) ? wp.p : wp.q;
    double gamma_minus = (x <= 1.0 || at_unit) ? wp.q : wp.p;
    SideSeries plus = branch_series(x, gamma_plus, +1.0);
    SideSeries minus = branch_series(x, gamma_minus, -1.0);
    double c1 = plus.c1 - minus.c1;
    double c2 = plus.c2 - minus.c2;
    double c3 = plus.c3 - minus.c3;
    double inner_a = c1 * std::pow(eps, 1.0 - alpha) / (1.0 - alpha) +
                     c2 * std::pow(eps, 2.0 - alpha) / (2.0 - alpha) +
                     c3 * std::pow(eps, 3.0 - alpha) / (3.0 - alpha);
    auto f_a = [&](double t) {
        return (weight_w(x + t, wp) - weight_w(x - t, wp)) *
               std::pow(t, -1.0 - alpha);
    };
    std::vector<double> breaks_a;
    if (tau0 > 0.0 && tau0 < d) breaks_a.push_back(tau0);
    double region_a =
        integrate_panels(f_a, log_edges_with_breaks(eps, d, breaks_a, ppd), opts, &qe);
    err += qe;

    // region B: paired +/- y over |y| < x - d,
    //   P(y) = w(x)[(x-y)^(-1-a) + (x+y)^(-1-a)] - w(y)[(x-y)^(-1-a) - (x+y)^(-1-a)]
    const double b_hi = x - d;
    auto f_b = [&](double y) {
        double km = std::pow(x - y, -1.0 - alpha);
        double kp = std::pow(x + y, -1.0 - alpha);
        return weight_w(x, wp) * (km + kp) - weight_w(y, wp) * (km - kp);
    };
    double floor_b = 1e-8 * std::min(x, 1.0);
    double region_b = integrate_panels(
        f_b, log_edges_with_breaks(floor_b, b_hi, {1.0}, ppd), opts, &qe);
    err += qe;
    // graded floor remainder: integrand -> w(x) * 2 x^(-1-a) as y -> 0
    region_b += weight_w(x, wp) * 2.0 * std::pow(x, -1.0 - alpha) * floor_b;

    // far regions, numeric to S then algebraic tails
    const double S = std::max(spec.outer_cut, 100.0 * std::max(x, 1.0));
    const double wx = weight_w(x, wp);

    // T1: int_d^inf [w(x+t) - w(x)] t^(-1-alpha) dt
    auto f_t1 = [&](double t) {
        return (weight_w(x + t, wp) - wx) * std::pow(t, -1.0 - alpha);
    };
    std::vector<double> breaks_t1;
    if (x < 1.0 && 1.0 - x > d) breaks_t1.push_back(1.0 - x);
    double region_t1 = integrate_panels(
        f_t1, log_edges_with_breaks(d, S, breaks_t1, ppd), opts, &qe);
    err += qe;
    region_t1 += -wx * std::pow(S, -alpha) / alpha;
    region_t1 += std::pow(S, -wp.p - alpha) / (wp.p + alpha) -
                 wp.p * x * std::pow(S, -wp.p - alpha - 1.0) / (wp.p + alpha + 1.0);

    // T2: int_{x-d}^inf [w(x) + w(u)] (x+u)^(-1-alpha) du
    auto f_t2 = [&](double u) {
        return (wx + weight_w(u, wp)) * std::pow(x + u, -1.0 - alpha);
    };
    std::vector<double> breaks_t2;
    if (1.0 > x - d) breaks_t2.push_back(1.0);
    double region_t2 = integrate_panels(
        f_t2, log_edges_with_breaks(x - d, S, breaks_t2, ppd), opts, &qe);
    err += qe;
    region_t2 += wx * std::pow(x + S, -alpha) / alpha;
    region_t2 += std::pow(S, -wp.p - alpha) / (wp.p + alpha) -
                 (1.0 + alpha) * x * std::pow(S, -wp.p - alpha - 1.0) / (wp.p + alpha + 1.0);

    double tail_bound =
        (wp.p * (wp.p + 1.0) * x * x + 2.0) * std::pow(S, -wp.p - alpha - 2.0);

    return {inner_a + region_a + region_b + region_t1 + region_t2, err, tail_bound};
}

namespace {

PowerFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                    double lo, double hi) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] >= lo * (1.0 - 1e-12) && xs[i] <= hi * (1.0 + 1e-12) &&
            std::abs(ys[i]) > 0.0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(std::abs(ys[i])));
        }
    }
    PowerFit fit;
    fit.points = static_cast<int>(lx.size());
    if (fit.points < 3) return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / std::max(1, fit.points - 2) / sxx);
    return fit;
}

} // namespace

KernelTable build_kernel_table(const WeightParams& wp, double x_min, double x_max,
                               int per_decade, const QuadratureSpec& spec) {
    wp.validate();
    if (!(x_min > 0.0) || !(x_max > x_min))
        throw config_error("build_kernel_table: need 0 < x_min < x_max");
    KernelTable table;
    table.params = wp;
    const double ratio = std::pow(10.0, 1.0 / std::max(per_decade, 2));
    for (double x = x_min; x <= x_max * (1.0 + 1e-12); x *= ratio) {
        QuadResult r = kernel_integral(x, wp, spec);
        table.x.push_back(x);
        table.value.push_back(r.value);
        table.tail_bound.push_back(r.conservative_error());
    }

    auto fit_if_covered = [&](double lo, double hi) -> std::optional<PowerFit> {
        PowerFit f = fit_loglog(table.x, table.value, lo, hi);
        if (f.points >= 3) return f;
        return std::nullopt;
    };
    table.small_fit = fit_if_covered(1e-3, 1e-1);
    table.large_fit = fit_if_covered(1e1, 1e3);

    for (std::size_t i = 0; i < table.x.size(); ++i) {
        double xv = table.x[i], av = std::abs(table.value[i]);
        if (xv <= 1e-1)
            table.k1 = std::max(table.k1, av * std::pow(xv, wp.q + wp.alpha));
        if (xv >= 1e1)
            table.k2 = std::max(table.k2, av * std::pow(xv, 2.0 + wp.alpha));
        if (xv >= 0.5 && xv <= 2.0) table.k3 = std::max(table.k3, av);
    }
    return table;
}

IntegrabilityReport integrability_report(const WeightParams& wp) {
    wp.validate();
    IntegrabilityReport rep;
    rep.params = wp;
    rep.in_strict_window = wp.strict_window();

    QuadratureSpec ispec;
    ispec.outer_cut = 1e4;

    auto ii_integrand = [&](double x) {
        double v = kernel_integral(x, wp, ispec).value;
        return v * v / weight_W(x, wp);
    };
    auto ww_integrand = [&](double x) {
        double v = weight_w(x, wp);
        return v * v / weight_W(x, wp);
    };

    auto decade_sums = [&](const Fn& f, int points_per_decade) {
        std::vector<double> sums;
        for (int dec = -4; dec < 4; ++dec) {
            double a = std::pow(10.0, dec), b = 10.0 * a;
            std::vector<double> edges;
            append_log_edges(edges, a, b, points_per_decade);
            sums.push_back(integrate_panels(f, edges,
                                            PanelOptions{0.0, 1e-6, 10, false}));
        }
        return sums;
    };
    rep.ii_decade_sums = decade_sums(ii_integrand, 8);
    rep.ww_decade_sums = decade_sums(ww_integrand, 16);

    // Cauchy-in-decades test: contributions must shrink geometrically toward
    // the singular end; when they do, the remainder is extrapolated.
    auto analyze = [](const std::vector<double>& s, bool& fin0, bool& fin_inf,
                      double& total) {
        double r0 = s[0] / std::max(s[1], 1e-300);
        double ri = s[7] / std::max(s[6], 1e-300);
        fin0 = r0 < 0.9;
        fin_inf = ri < 0.9;
        total = 0.0;
        for (double v : s) total += v;
        if (fin0) total += s[0] * r0 / (1.0 - r0);
        if (fin_inf) total += s[7] * ri / (1.0 - ri);
    };
    analyze(rep.ii_decade_sums, rep.ii_over_w_finite_origin,
            rep.ii_over_w_finite_infinity, rep.ii_over_w_integral);
    analyze(rep.ww_decade_sums, rep.ww_over_w_finite_origin,
            rep.ww_over_w_finite_infinity, rep.ww_over_w_integral);

    // two-sided integrals: the integrands are even
    if (rep.ww_over_w_finite_origin && rep.ww_over_w_finite_infinity)
        rep.growth_coefficient = 1.0 / (8.0 * rep.ww_over_w_integral);
    if (rep.ii_over_w_finite_origin && rep.ii_over_w_finite_infinity) {
        double k = frac_laplacian_hilbert_coeff(wp.alpha);
        rep.damping_constant = 2.0 * k * k * rep.ii_over_w_integral;
    }
    return rep;
}

} // namespace bhlab::quad
