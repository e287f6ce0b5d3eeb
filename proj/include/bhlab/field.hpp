#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "bhlab/errors.hpp"

namespace bhlab {

// Uniform periodic grid on [-L/2, L/2): x_j = -L/2 + j*h, h = L/n.
struct GridSpec {
    int n_points = 0;
    double length = 0.0;

    double spacing() const { return length / n_points; }
    double node(int j) const { return -0.5 * length + j * spacing(); }
    // wavenumber of integer mode k in physical units
    double wavenumber(int k) const {
        return 2.0 * std::numbers::pi * k / length;
    }
    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

// Samples of a real function on a GridSpec.
struct RealField {
    GridSpec grid;
    std::vector<double> values;

    void validate() const;
};

RealField make_field(const GridSpec& grid);

// Fourier-series coefficients c_k of u(x) = sum_k c_k exp(i*k*(2pi/L)*x),
// stored for k = 0..n/2.  Negative modes follow from conjugate symmetry
// (the type only ever represents spectra of real fields), so Hermitian
// symmetry holds by construction.  The k = n/2 slot is the cosine Nyquist
// coefficient and is real for grid data.
struct Spectrum {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs; // size n/2 + 1

    int max_mode() const { return grid.n_points / 2; }
    // coefficient for signed mode k, |k| <= n/2
    std::complex<double> coeff(int k) const {
        return k >= 0 ? coeffs[static_cast<std::size_t>(k)]
                      : std::conj(coeffs[static_cast<std::size_t>(-k)]);
    }
    void validate() const;
};

// h-weighted norms and basic reductions
double l2_norm(const RealField& f);
double mean_value(const RealField& f);
double max_value(const RealField& f);
double min_value(const RealField& f);
double max_abs(const RealField& f);

} // namespace bhlab
