#pragma once

#include "bhlab/field.hpp"
#include "bhlab/quadrature.hpp"

// Real-space evaluation of the nonlocal operators as singular integrals.
// These are the independent route against the spectral multipliers: the
// difference kernel is integrated directly, with the slice at the
// singularity estimated from local finite differences and algebraic tail
// corrections beyond the outer cut.
namespace bhlab::quad {

// kernel constants of the singular-integral representations
double frac_laplacian_coeff(double alpha);          // Gamma(1+a)*cos((1-a)*pi/2)/pi
double frac_laplacian_hilbert_coeff(double alpha);  // -Gamma(1+a)*sin((1+a)*pi/2)/pi
// n-dimensional fractional Laplacian constant, standard normalization
double frac_laplacian_coeff_nd(double alpha, int dim);

// Whole-line evaluations on decaying functions (assumed |f(y)| <= C/|y| far
// out; with tail_correction the leading 1/y coefficient is fitted and the
// first-order tail applied, otherwise only bounded).
QuadResult frac_laplacian_at(const Fn& f, double x, double alpha,
                             const QuadratureSpec& spec);
QuadResult frac_laplacian_hilbert_at(const Fn& f, double x, double alpha,
                                     const QuadratureSpec& spec);
QuadResult hilbert_pv_at(const Fn& f, double x, const QuadratureSpec& spec);

// Periodic evaluations: the whole-line integral of a periodic function is
// folded onto one period with the lattice-sum kernel, so there is no outer
// truncation at all.  Exact counterparts of the torus multipliers.
QuadResult frac_laplacian_periodic_at(const Fn& f, const PeriodizedKernel& kernel,
                                      double x, const QuadratureSpec& spec);
QuadResult frac_laplacian_hilbert_periodic_at(const Fn& f,
                                              const PeriodizedKernel& kernel,
                                              double x,
                                              const QuadratureSpec& spec);

// Pointwise nonlocal quadratic form on a periodic function:
//   integral of (f(x) - f(y))^2 * K(x - y) dy over the line,
// folded to one period (even lattice kernel).  Positive integrand.
QuadResult squared_difference_form_periodic(const Fn& f,
                                            const PeriodizedKernel& kernel,
                                            double x,
                                            const QuadratureSpec& spec);

// Dini-type quadratic integral
//   (1/2pi) * integral of (u(x_j) - u(y))^2 / (x_j - y)^2 dy
// of the periodic extension over the whole line; the 1/s^2 lattice sum has
// the closed form (pi/L)^2 / sin^2(pi s / L).  The removable singularity at
// y = x contributes u'(x)^2.
class DiniEvaluator {
public:
    explicit DiniEvaluator(const RealField& u);
    double at_node(int j) const;
    double at(double x) const; // off-grid evaluation (spectral interpolation)
    const RealField& derivative() const { return deriv_; }

private:
    RealField u_;
    Spectrum spectrum_;
    Spectrum deriv_spectrum_;
    RealField deriv_;
    std::vector<double> kernel_; // periodized 1/s^2 at grid offsets
};

// convenience form matching the one-shot signature; heavy sweeps should use
// DiniEvaluator directly
double dini_integral(const RealField& u, int j);

} // namespace bhlab::quad
