#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bhlab/field.hpp"
#include "bhlab/spectral.hpp"
#include "bhlab/weights.hpp"

// Everything monitored along a run: conserved quantities, the tracked
// characteristic with the quantities living on it, the per-record identity
// and inequality monitors, and the blow-up time fit.
namespace bhlab::diag {

struct DiagRecord {
    double t = 0.0;
    double box_length = 0.0;
    double l2_norm = 0.0;
    double hamiltonian_functional = 0.0; // (1/2) u L^(a-1)u + u^3/6 integrated
    double conserved_energy = 0.0;       // u^3/3 + (L^((a-1)/2)u)^2 integrated
    double mean = 0.0;
    double u_max = 0.0, u_min = 0.0, ux_max = 0.0;
    double tail_fraction = 0.0;
    // quantities on the tracked characteristic
    double J_traj = 0.0;       // u at the characteristic
    double HJ_traj = 0.0;      // Hu at the characteristic
    double dini_at_traj = 0.0; // quadratic singular integral at the characteristic
    // weighted-functional quantities (zero unless weights configured)
    bool weights_active = false;
    double J_weight = 0.0;     // weighted functional at the characteristic
    double rhs8_value = 0.0;   // quadratic term / 2 + weighted functional of the nonlocal term
    double jw_quadratic = 0.0; // int (u(x)-u(y))^2 W(x-y) dy
    double jw_linear = 0.0;    // weighted functional of the nonlocal term
    double jw_transport_gap = 0.0; // relative gap of the convolution identity
};

struct DiagSink {
    virtual void on_record(const DiagRecord&) = 0;
    // field snapshot at record times; plot sinks override this
    virtual void on_snapshot(double /*t*/, const RealField& /*u*/) {}
    virtual ~DiagSink() = default;
};

struct MemorySink final : DiagSink {
    std::vector<DiagRecord> records;
    void on_record(const DiagRecord& r) override { records.push_back(r); }
};

// stage fields of one classical RK4 step, for integrating the trajectory
// equation dx/dt = u(x,t) at the same order as the field
struct StageFields {
    Spectrum s1, s2, s3, s4;
    double dt = 0.0;
};

struct Characteristic {
    double beta0 = 0.0;
    double x = 0.0;
    struct Sample {
        double t, x, u, hu;
    };
    std::vector<Sample> history;
};

Characteristic make_characteristic(double beta0);
void advance_characteristic(Characteristic& c, const StageFields& stages);

struct ConservedQuantities {
    double l2 = 0.0;
    double hamiltonian = 0.0;        // the functional whose gradient drives the flow
    double conserved_display = 0.0;  // the combination asserted for conservation
    double mean = 0.0;
};
ConservedQuantities conserved(const RealField& u, double alpha);

DiagRecord make_record(double t, const RealField& u, const Spectrum& spectrum,
                       double alpha, const Characteristic* tracked,
                       const std::optional<quad::WeightParams>& weights);

// second time-derivative of u along the characteristic vs the integral
// identity (alpha = 0): central differences of J_traj against
// dini_at_traj - J_traj
// Second differences along the characteristic are meaningful only while the
// solution is spectrally clean at the dealias cut: content of amplitude
// eta_J near the cut sweeps past the tracked point and enters a second
// difference at worst as 4 eta_J / dt^2, swamping the identity long before
// the field itself is in any physical trouble.  A record is "resolved" for
// these checks while that worst-case noise stays below a fraction of the
// identity scale |dini - J|; eta_J is read off the record's retained-band
// tail fraction.  The monitors process the maximal resolved prefix.
inline constexpr double kTrajectoryNoiseBudget = 0.005;

std::size_t resolved_prefix(std::span<const DiagRecord> records,
                            double noise_budget = kTrajectoryNoiseBudget);

struct TrajectoryAccelReport {
    struct Entry {
        double t;
        double second_difference;
        double identity_rhs;
        double rel_discrepancy;
    };
    std::vector<Entry> entries;
    double max_rel_discrepancy = 0.0;
    std::size_t resolved_records = 0;
};
TrajectoryAccelReport trajectory_accel_check(
    std::span<const DiagRecord> records,
    double noise_budget = kTrajectoryNoiseBudget);

// the two blow-up inequalities along the characteristic (alpha = 0):
//   accel:  J'' >= J^4/(32 pi E) - J
//   speed:  J'  >= sqrt(J'(0)^2 + (2C/5)(J^5 - J(0)^5) - (J^2 - J(0)^2))
// J' is read off as Hu at the characteristic (exact along trajectories).
struct OdeInequalityReport {
    double energy = 0.0;
    double c_constant = 0.0; // 1 / (32 pi E)
    struct Entry {
        double t;
        bool accel_ok, speed_ok, jt_positive, j_increasing;
        double accel_margin, speed_margin;
    };
    std::vector<Entry> entries;
    bool all_hold = true;
    std::optional<double> first_violation_time;
    std::size_t resolved_records = 0;
};
OdeInequalityReport ode_inequality_monitor(
    std::span<const DiagRecord> records, double energy,
    double noise_budget = kTrajectoryNoiseBudget);

// weighted-functional evolution: finite-difference dJ/dt against the stored
// right-hand side, the quadratic-term positivity, and the inequality
// dJ/dt >= c J^2 - C
struct RiccatiReport {
    struct Entry {
        double t;
        double djdt_fd;
        double rhs_value;
        double rel_discrepancy;
        bool inequality_ok;
        bool quadratic_nonneg;
        double transport_gap;
    };
    std::vector<Entry> entries;
    double max_identity_discrepancy = 0.0;
    double max_transport_gap = 0.0;
    bool inequality_all_hold = true;
    bool quadratic_all_nonneg = true;
};
RiccatiReport riccati_monitor(std::span<const DiagRecord> records,
                              double growth_coefficient, double damping_constant);

struct BlowupFit {
    double t_estimate = 0.0; // root of the fitted line through 1/ux_max
    double amplitude = 0.0;  // ansatz ux_max ~ A/(T-t); labeled an ansatz in reports
    std::size_t first = 0, last = 0;
    double residual = 0.0;   // rms residual of the linear fit
};
BlowupFit fit_blowup(std::span<const DiagRecord> records, std::size_t first,
                     std::size_t last);
// trailing window of strictly increasing ux_max (>= 8 records), if any
std::optional<std::pair<std::size_t, std::size_t>> auto_fit_window(
    std::span<const DiagRecord> records);

} // namespace bhlab::diag
