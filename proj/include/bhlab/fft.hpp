#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bhlab/field.hpp"

// Thin wrapper around FFTW real transforms.  Plans are cached per size
// behind a mutex and executed on per-call buffers, so transforms of fields
// on immutable inputs are safe to run concurrently.
namespace bhlab::fft {

// Forward transform of real samples indexed from x_0 = -L/2.  Returns the
// Fourier-series coefficients c_k, k = 0..n/2, with the 1/n normalization
// on the forward side (the (-1)^k demodulation for the -L/2 origin is
// applied here, so coefficients multiply exp(i*k*(2pi/L)*x) directly).
std::vector<std::complex<double>> forward(const GridSpec& grid,
                                          std::span<const double> values);

std::vector<double> inverse(const GridSpec& grid,
                            std::span<const std::complex<double>> coeffs);

// 2-D r2c transform of an n-by-n row-major array, 1/n^2 normalized, grid
// index phase (used only for Parseval sums, where phases drop out).
// Output layout: n rows by (n/2 + 1) columns.
std::vector<std::complex<double>> forward_2d(int n,
                                             std::span<const double> values);

} // namespace bhlab::fft
