#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bhlab/quadrature.hpp"

// The two-branch power weight kernel pair and the machinery built on it:
// the weighted convolution functional, the kernel integral with its decay
// regimes, and the integrability report that produces the constants of the
// quadratic evolution inequality.
namespace bhlab::quad {

struct WeightParams {
    double q = 0.5;
    double p = 2.5;
    double alpha = 0.5;

    // the window in which both kernel ratios are integrable
    bool strict_window() const {
        return 2.0 < p && p < 2.0 + 2.0 * alpha && q < 2.0 * (1.0 - alpha);
    }
    void validate() const; // 0 < q < 1, p > 2
};

// odd kernel: sign(x)|x|^-q inside the unit interval, sign(x)|x|^-p outside
double weight_w(double x, const WeightParams& wp);
// even kernel: q|x|^-(q+1) inside, p|x|^-(p+1) outside; equals -w'
double weight_W(double x, const WeightParams& wp);

// J u(x) = int w(x - y) u(y) dy, kernel truncated at |x - y| = period/2
// (neglected tail bounded via the p-branch decay and reported)
QuadResult weighted_functional(const Fn& u, double period, double x,
                               const WeightParams& wp, double u_sup);

// int (g(x) - g(y)) W(x - y) dy, same truncation
QuadResult weighted_difference(const Fn& g, double period, double x,
                               const WeightParams& wp, double g_sup);

// int (u(x) - u(y))^2 W(x - y) dy, same truncation; nonnegative
QuadResult weighted_square_difference(const Fn& u, double period, double x,
                                      const WeightParams& wp, double u_sup);

// I(x) = int [w(x) - w(y)] sign(x - y) |x - y|^(-1-alpha) dy  (even in x)
QuadResult kernel_integral(double x, const WeightParams& wp,
                           const QuadratureSpec& spec);

struct PowerFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    int points = 0;
};

struct KernelTable {
    WeightParams params;
    std::vector<double> x;
    std::vector<double> value;
    std::vector<double> tail_bound;
    std::optional<PowerFit> small_fit; // log-log over x in [1e-3, 1e-1]
    std::optional<PowerFit> large_fit; // log-log over x in [1e1, 1e3]
    double k1 = 0.0; // sup |I| x^(q+alpha) over the sampled small regime
    double k2 = 0.0; // sup |I| x^(2+alpha) over the sampled large regime
    double k3 = 0.0; // sup |I| over [1/2, 2] (if sampled)
};

KernelTable build_kernel_table(const WeightParams& wp, double x_min, double x_max,
                               int per_decade, const QuadratureSpec& spec);

// Numerical integrability of I^2/W and w^2/W over a log range, detected by
// decade-contribution decay, plus the derived inequality constants
//   c = 1 / (4 int w^2/W),   C = k_alpha^2 int I^2/W
// (meaningful when the corresponding integrals are finite).
struct IntegrabilityReport {
    WeightParams params;
    bool in_strict_window = false;
    bool ii_over_w_finite_origin = false;
    bool ii_over_w_finite_infinity = false;
    bool ww_over_w_finite_origin = false;
    bool ww_over_w_finite_infinity = false;
    double ii_over_w_integral = 0.0; // over [1e-4, 1e4]
    double ww_over_w_integral = 0.0;
    double growth_coefficient = 0.0;  // c(q,p), 0 when not finite
    double damping_constant = 0.0;    // C(q,p), 0 when not finite
    std::vector<double> ii_decade_sums;
    std::vector<double> ww_decade_sums;
};

IntegrabilityReport integrability_report(const WeightParams& wp);

} // namespace bhlab::quad
