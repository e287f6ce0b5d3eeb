#pragma once

#include <stdexcept>
#include <string>

namespace bhlab {

// Invalid configuration: bad grid size, parameter out of range, malformed
// config file, schema violation.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation precondition was violated (e.g. non-mean-free input to a
// negative fractional power).
class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature did not converge to the requested accuracy.  Carries
// the error estimate that was actually achieved.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

// The time integrator produced a nonfinite state.  Distinct from the physical
// stop criteria: this is a failure of the scheme, not an observed blow-up.
class scheme_divergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bhlab
