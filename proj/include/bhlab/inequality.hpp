#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/field.hpp"

// Standalone numerical certification of the pointwise and integral
// inequalities: the quartic lower bound on the singular quadratic integral,
// the blow-up threshold for the rational data family, the n-dimensional
// pointwise bound with its explicit constant, and the derived
// Gagliardo-Nirenberg-Sobolev estimate.
namespace bhlab::lab {

struct CertReport {
    std::string id;
    int points_checked = 0;
    double worst_margin = 0.0; // min over points of (RHS - LHS)/scale
    double worst_x = 0.0, worst_y = 0.0;
    double worst_lhs = 0.0, worst_rhs = 0.0; // the two sides at the worst point
    double scale = 1.0;                      // max(1, max RHS)
    double tolerance = 1e-6;
    bool pass = false;
};

// deterministic band-limited random field (modes 1..k_max, 1/k-weighted
// coefficients, mean-free); the same seed yields the same field everywhere
RealField random_band_limited_field(const GridSpec& grid, int k_max,
                                    std::uint64_t seed);

// dini(u, x_j) >= u(x_j)^4 / (32 pi E) at every grid node, E the torus
// squared L2 norm
CertReport certify_quartic_bound(const RealField& u);

struct ThresholdReport {
    bool satisfied = false;
    double beta0 = 0.0;
    double margin = 0.0;        // u0(beta0) - (32 pi E)^(1/3)
    double energy = 0.0;        // whole-line ||u0||^2 by quadrature
    double hu0_at_beta0 = 0.0;
    double threshold_value = 0.0;
};
// blow-up threshold for the family -a x / (1 + (bx)^2) at beta0 = -1/b;
// the analytic reduction makes satisfaction equivalent to a >= 128 pi^2,
// independent of b
ThresholdReport threshold_check(double a, double b);

// explicit constant of the pointwise bound
//   |f(x)|^(2 + a p / n) <= C(a,p,n) ||f||_p^(a p / n) (2 f L^a f - L^a f^2)(x)
double pointwise_constant(double alpha, double p, int dim);
// C(a,p,n) * k_{a,n}: the form multiplying the raw squared-difference
// integral, independent of the kernel normalization
double pointwise_constant_combined(double alpha, double p, int dim);

// 1-D certification on a periodic field (quadratic form by quadrature of the
// squared-difference integral against the lattice kernel).  The optional
// override replaces the combined constant (e.g. 16 recovers the classical
// quartic pointwise bound at alpha = 1, p = 2).
CertReport certify_pointwise_1d(const RealField& f, double alpha, double p,
                                std::optional<double> combined_override = {});

CertReport certify_gns_1d(const RealField& f, double alpha, double p);

// radial bump on an n x n periodic box with an analytic evaluator
struct RadialField2D {
    int n = 0;
    double length = 0.0;
    std::vector<double> values; // row-major
    std::function<double(double, double)> evaluator;
    std::function<double(double)> radial; // profile as a function of radius
    double amplitude = 0.0, width = 0.0;
};
RadialField2D make_gaussian_bump_2d(int n, double length, double amplitude,
                                    double width);

CertReport certify_pointwise_2d(const RadialField2D& f, double alpha, double p,
                                int sample_stride);
CertReport certify_gns_2d(const RadialField2D& f, double alpha, double p);

} // namespace bhlab::lab
