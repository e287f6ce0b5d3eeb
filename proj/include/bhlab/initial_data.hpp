#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bhlab/field.hpp"

namespace bhlab {

// -a x / (1 + (bx)^2) and its Hilbert transform on the line
double rational_profile(double x, double a, double b);
double rational_profile_hilbert(double x, double a, double b);

// Periodic counterparts: the sum of the profile over all periodic images has
// the closed form -(a/b^2)(pi/L) Re cot(pi (x - i/b) / L); its torus Hilbert
// transform is (a/b^2)(pi/L)(Im cot(pi (x - i/b) / L) - 1).  These converge
// to the whole-line formulas as L -> infinity and are smooth on the torus
// (no seam), which is what makes the family usable as periodic initial data.
double periodized_rational(double x, double a, double b, double period);
double periodized_rational_hilbert(double x, double a, double b, double period);

struct RationalFamily {
    double a = 1.0;
    double b = 1.0;
};
struct SingleMode {
    double amplitude = 1.0;
    int wavenumber = 1;
};
struct GaussianBump {
    double amplitude = 1.0;
    double width = 1.0;
};
struct FromFile {
    std::string path;
};

using InitialDataSpec =
    std::variant<RationalFamily, SingleMode, GaussianBump, FromFile>;

struct InitialData {
    RealField field;
    double beta0_default = 0.0;      // canonical characteristic start point
    double truncation_tail = 0.0;    // relative L2 mass outside the box (rational)
    std::vector<std::string> warnings;
};

InitialData sample_initial_data(const InitialDataSpec& spec, const GridSpec& grid,
                                double tail_tolerance = 1e-6);

} // namespace bhlab
