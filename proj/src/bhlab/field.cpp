#include "bhlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bhlab {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

void GridSpec::validate() const {
    if (n_points < 16 || !power_of_two(n_points))
        throw config_error("grid n_points must be a power of two >= 16, got " +
                           std::to_string(n_points));
    if (!(length > 0.0) || !std::isfinite(length))
        throw config_error("grid length must be positive and finite");
}

void RealField::validate() const {
    grid.validate();
    if (values.size() != static_cast<std::size_t>(grid.n_points))
        throw config_error("field length " + std::to_string(values.size()) +
                           " does not match grid n_points " +
                           std::to_string(grid.n_points));
    for (double v : values)
        if (!std::isfinite(v))
            throw config_error("field contains a nonfinite value");
}

RealField make_field(const GridSpec& grid) {
    grid.validate();
    return RealField{grid, std::vector<double>(grid.n_points, 0.0)};
}

void Spectrum::validate() const {
    grid.validate();
    if (coeffs.size() != static_cast<std::size_t>(grid.n_points / 2 + 1))
        throw config_error("spectrum length does not match grid");
    for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw config_error("spectrum contains a nonfinite coefficient");
}

double l2_norm(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.grid.spacing());
}

double mean_value(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s / f.values.size();
}

double max_value(const RealField& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

double min_value(const RealField& f) {
    return *std::min_element(f.values.begin(), f.values.end());
}

double max_abs(const RealField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace bhlab
