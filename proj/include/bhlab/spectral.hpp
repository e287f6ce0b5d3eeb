#pragma once

#include <complex>

#include "bhlab/field.hpp"

// Fourier-multiplier operators on periodic fields.  All multipliers use the
// principal-value convention sign(0) = 0, and odd multipliers (those carrying
// a sign(k) factor) zero the Nyquist mode so that real fields map to real
// fields exactly.
namespace bhlab::spectral {

Spectrum to_spectrum(const RealField& f);
RealField from_spectrum(const Spectrum& s);

// multiplier -i*sign(k); the zero mode is mapped to 0
RealField hilbert(const RealField& f);
Spectrum hilbert(const Spectrum& s);

// multiplier |k*2pi/L|^s; for s < 0 the zero mode maps to 0 and the input
// must be mean-free to relative tolerance 1e-10
RealField frac_laplacian(const RealField& f, double s);
Spectrum frac_laplacian(const Spectrum& s, double power);

// multiplier -i*sign(k)*|k*2pi/L|^alpha, 0 <= alpha <= 1
RealField frac_laplacian_hilbert(const RealField& f, double alpha);
Spectrum frac_laplacian_hilbert(const Spectrum& s, double alpha);

// multiplier i*k*2pi/L, Nyquist zeroed
RealField derivative(const RealField& f);
Spectrum derivative(const Spectrum& s);

// 2/3-rule truncation: zero all modes with |k| > floor(n/3)
Spectrum dealias(Spectrum s);

// same coefficients on a grid refined by `factor` (trigonometric
// interpolation onto the finer grid)
Spectrum upsample(const Spectrum& s, int factor);

// sup of |f| over the continuum, read off a twice-refined grid (the node max
// under-reads steep interpolants)
double interpolant_max_abs(const Spectrum& s);

// trigonometric interpolation at arbitrary x (exact for band-limited fields)
double eval_at(const Spectrum& s, double x);

// sum over all modes of |c_k|^2 (negative modes included); the torus L2 norm
// squared is length * spectral_energy
double spectral_energy(const Spectrum& s);

// energy fraction carried by modes with |k| > floor(n/3); 0 for a zero field
double tail_energy_fraction(const Spectrum& s);

} // namespace bhlab::spectral
