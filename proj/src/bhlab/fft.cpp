#include "bhlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace bhlab::fft {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
// Plans are created once per size with FFTW_ESTIMATE | FFTW_UNALIGNED and
// reused through the new-array execute interface.
struct PlanCache {
    std::mutex mutex;
    std::map<int, fftw_plan> r2c;
    std::map<int, fftw_plan> c2r;
    std::map<int, fftw_plan> r2c_2d;

    fftw_plan get_r2c(int n) {
        std::lock_guard lock(mutex);
        auto it = r2c.find(n);
        if (it != r2c.end()) return it->second;
        std::vector<double> in(n);
        std::vector<fftw_complex> out(n / 2 + 1);
        fftw_plan p = fftw_plan_dft_r2c_1d(n, in.data(), out.data(),
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
        r2c.emplace(n, p);
        return p;
    }

    fftw_plan get_c2r(int n) {
        std::lock_guard lock(mutex);
        auto it = c2r.find(n);
        if (it != c2r.end()) return it->second;
        std::vector<fftw_complex> in(n / 2 + 1);
        std::vector<double> out(n);
        fftw_plan p = fftw_plan_dft_c2r_1d(n, in.data(), out.data(),
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
        c2r.emplace(n, p);
        return p;
    }

    fftw_plan get_r2c_2d(int n) {
        std::lock_guard lock(mutex);
        auto it = r2c_2d.find(n);
        if (it != r2c_2d.end()) return it->second;
        std::vector<double> in(static_cast<std::size_t>(n) * n);
        std::vector<fftw_complex> out(static_cast<std::size_t>(n) * (n / 2 + 1));
        fftw_plan p = fftw_plan_dft_r2c_2d(n, n, in.data(), out.data(),
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
        r2c_2d.emplace(n, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

} // namespace

std::vector<std::complex<double>> forward(const GridSpec& grid,
                                          std::span<const double> values) {
    const int n = grid.n_points;
    std::vector<double> in(values.begin(), values.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_execute_dft_r2c(cache().get_r2c(n), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    const double inv_n = 1.0 / n;
    for (int k = 0; k <= n / 2; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0; // origin shift to -L/2
        out[k] *= sign * inv_n;
    }
    return out;
}

std::vector<double> inverse(const GridSpec& grid,
                            std::span<const std::complex<double>> coeffs) {
    const int n = grid.n_points;
    std::vector<std::complex<double>> in(coeffs.size());
    for (int k = 0; k <= n / 2; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        in[k] = coeffs[k] * sign;
    }
    std::vector<double> out(n);
    // c2r destroys its input; `in` is already a scratch copy.
    fftw_execute_dft_c2r(cache().get_c2r(n), reinterpret_cast<fftw_complex*>(in.data()),
                         out.data());
    return out;
}

std::vector<std::complex<double>> forward_2d(int n,
                                             std::span<const double> values) {
    std::vector<double> in(values.begin(), values.end());
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * (n / 2 + 1));
    fftw_execute_dft_r2c(cache().get_r2c_2d(n), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    const double inv = 1.0 / (static_cast<double>(n) * n);
    for (auto& c : out) c *= inv;
    return out;
}

} // namespace bhlab::fft
