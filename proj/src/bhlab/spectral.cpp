#include "bhlab/spectral.hpp"

#include <cmath>
#include <utility>

#include "bhlab/fft.hpp"

namespace bhlab::spectral {

namespace {

using cplx = std::complex<double>;

void require_mean_free(const Spectrum& s) {
    double scale = std::sqrt(spectral_energy(s));
    if (std::abs(s.coeffs[0]) > 1e-10 * std::max(1.0, scale))
        throw precondition_error(
            "negative fractional power requires a mean-free field");
}

} // namespace

Spectrum to_spectrum(const RealField& f) {
    f.validate();
    return Spectrum{f.grid, fft::forward(f.grid, f.values)};
}

RealField from_spectrum(const Spectrum& s) {
    s.validate();
    return RealField{s.grid, fft::inverse(s.grid, s.coeffs)};
}

Spectrum hilbert(const Spectrum& s) {
    Spectrum out = s;
    const int nyq = s.max_mode();
    out.coeffs[0] = 0.0;
    for (int k = 1; k < nyq; ++k) out.coeffs[k] *= cplx(0.0, -1.0);
    out.coeffs[nyq] = 0.0;
    return out;
}

RealField hilbert(const RealField& f) {
    return from_spectrum(hilbert(to_spectrum(f)));
}

Spectrum frac_laplacian(const Spectrum& s, double power) {
    if (power < 0.0) require_mean_free(s);
    Spectrum out = s;
    out.coeffs[0] = 0.0; // |0|^s * c0 = 0 for s > 0; convention for s < 0
    for (int k = 1; k <= s.max_mode(); ++k)
        out.coeffs[k] *= std::pow(s.grid.wavenumber(k), power);
    return out;
}

RealField frac_laplacian(const RealField& f, double s) {
    return from_spectrum(frac_laplacian(to_spectrum(f), s));
}

Spectrum frac_laplacian_hilbert(const Spectrum& s, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw config_error("frac_laplacian_hilbert requires 0 <= alpha <= 1");
    Spectrum out = s;
    const int nyq = s.max_mode();
    out.coeffs[0] = 0.0;
    for (int k = 1; k < nyq; ++k)
        out.coeffs[k] *= cplx(0.0, -std::pow(s.grid.wavenumber(k), alpha));
    out.coeffs[nyq] = 0.0;
    return out;
}

RealField frac_laplacian_hilbert(const RealField& f, double alpha) {
    return from_spectrum(frac_laplacian_hilbert(to_spectrum(f), alpha));
}

Spectrum derivative(const Spectrum& s) {
    Spectrum out = s;
    const int nyq = s.max_mode();
    out.coeffs[0] = 0.0;
    for (int k = 1; k < nyq; ++k)
        out.coeffs[k] *= cplx(0.0, s.grid.wavenumber(k));
    out.coeffs[nyq] = 0.0;
    return out;
}

RealField derivative(const RealField& f) {
    return from_spectrum(derivative(to_spectrum(f)));
}

Spectrum dealias(Spectrum s) {
    const int cut = s.grid.n_points / 3;
    for (int k = cut + 1; k <= s.max_mode(); ++k) s.coeffs[k] = 0.0;
    return s;
}

Spectrum upsample(const Spectrum& s, int factor) {
    if (factor < 1) throw config_error("upsample factor must be >= 1");
    GridSpec fine{s.grid.n_points * factor, s.grid.length};
    Spectrum out{fine, std::vector<cplx>(fine.n_points / 2 + 1, 0.0)};
    for (int k = 0; k <= s.max_mode(); ++k) out.coeffs[k] = s.coeffs[k];
    // the source Nyquist cosine carried implicit half weight; as an interior
    // mode of the finer grid it is counted twice
    if (factor > 1) out.coeffs[s.max_mode()] *= 0.5;
    return out;
}

double interpolant_max_abs(const Spectrum& s) {
    return max_abs(from_spectrum(upsample(s, 2)));
}

double eval_at(const Spectrum& s, double x) {
    const int nyq = s.max_mode();
    const double k1 = s.grid.wavenumber(1);
    const cplx rot = std::polar(1.0, k1 * x);
    cplx phase = rot;
    double acc = s.coeffs[0].real();
    for (int k = 1; k < nyq; ++k) {
        acc += 2.0 * (s.coeffs[k] * phase).real();
        phase *= rot;
        // refresh the rotation periodically to keep the recurrence tight
        if ((k & 1023) == 0) phase = std::polar(1.0, k1 * x * (k + 1));
    }
    acc += (s.coeffs[nyq] * std::polar(1.0, s.grid.wavenumber(nyq) * x)).real();
    return acc;
}

double spectral_energy(const Spectrum& s) {
    const int nyq = s.max_mode();
    double e = std::norm(s.coeffs[0]);
    for (int k = 1; k < nyq; ++k) e += 2.0 * std::norm(s.coeffs[k]);
    e += std::norm(s.coeffs[nyq]);
    return e;
}

double tail_energy_fraction(const Spectrum& s) {
    // the top third of the retained band: with the 2/3 rule the solver only
    // ever populates |k| <= n/3, so resolution is judged against that band
    const int cut_hi = s.grid.n_points / 3;
    const int cut_lo = 2 * cut_hi / 3;
    const int nyq = s.max_mode();
    double total = 0.0, tail = 0.0;
    for (int k = 1; k <= nyq; ++k) {
        double w = (k == nyq) ? 1.0 : 2.0;
        double e = w * std::norm(s.coeffs[k]);
        total += e;
        if (k > cut_lo && k <= cut_hi) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

} // namespace bhlab::spectral
