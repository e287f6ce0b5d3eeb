#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bhlab/errors.hpp"

// Panel-based adaptive quadrature for the singular kernels used throughout:
// callers seed a panel decomposition (log-graded toward integrable
// singularities, split at kinks), panels are integrated with Gauss-Legendre
// and bisected until the error estimate meets the tolerance.
namespace bhlab::quad {

using Fn = std::function<double(double)>;

struct QuadratureSpec {
    double inner_cut = 1e-6;     // epsilon: analytic-slice radius at singular points
    double outer_cut = 1e4;      // R: numeric truncation of whole-line integrals
    int panels_per_decade = 32;  // log-panel density
    bool tail_correction = true; // apply fitted decay-model tail corrections

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0; // quadrature error (refinement residual)
    double tail_bound = 0.0;     // analytic bound on neglected tails

    double conservative_error() const { return error_estimate + tail_bound; }
};

struct PanelOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_rounds = 14;
    bool throw_on_failure = true;
};

// Integrate f over the panels defined by consecutive edge pairs.  Edges must
// be strictly increasing.  Gauss-Legendre nodes are interior, so integrable
// endpoint singularities are permitted at panel edges.
double integrate_panels(const Fn& f, std::span<const double> edges,
                        const PanelOptions& opts, double* err_out = nullptr);

// Append geometrically spaced edges from `from` to `to` (0 < from < to),
// `per_decade` panels per factor of ten.  The first appended edge is `from`
// unless the list already ends there; the last is exactly `to`.
void append_log_edges(std::vector<double>& edges, double from, double to,
                      int per_decade);

// Split any panel wider than `cap` into equal subpanels (used to resolve
// oscillatory integrands regardless of the log grading).
void apply_width_cap(std::vector<double>& edges, double cap);

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_rule(int order);

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, y2_;
};

// Lattice sums over periodic images:
//   even: sum_{m in Z} |s + m*L|^(-gamma)
//   odd:  s^(-gamma) + sum_{m>=1} [(m*L+s)^(-gamma) - (m*L-s)^(-gamma)]
// for 0 < s < L and gamma > 1 (Euler-Maclaurin accelerated tails).
double lattice_power_sum(double s, double period, double gamma);
double lattice_power_sum_odd(double s, double period, double gamma);

// |s|^(-gamma) plus the spline-cached smooth image part; exact kernel of the
// whole-line integral restricted to one period of a periodic integrand.
class PeriodizedKernel {
public:
    PeriodizedKernel(double period, double gamma, bool odd);
    double operator()(double s) const; // s in (0, period/2]
    double period() const { return period_; }
    double exponent() const { return gamma_; }
    bool odd() const { return odd_; }

private:
    double period_ = 0.0, gamma_ = 0.0;
    bool odd_ = false;
    CubicSpline smooth_;
};

} // namespace bhlab::quad
