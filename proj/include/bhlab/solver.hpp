#pragma once

#include <optional>
#include <string>

#include "bhlab/diagnostics.hpp"
#include "bhlab/initial_data.hpp"

// Time integration of u_t + u u_x = (nonlocal dispersive term) with a
// dealiased pseudospectral right-hand side and classical RK4 stepping.
namespace bhlab::solver {

struct StopCriteria {
    double max_slope_factor = 100.0;      // stop when ux_max exceeds factor x initial
    double spectral_tail_fraction = 0.1;  // stop when the top-third energy fraction exceeds this
    void validate() const;
};

struct DtPolicy {
    enum class Kind { fixed, cfl };
    Kind kind = Kind::cfl;
    double dt = 0.0;
    double cfl_sigma = 0.4;

    static DtPolicy fixed_dt(double dt);
    static DtPolicy cfl(double sigma);
    void validate() const;
};

struct SimConfig {
    double alpha = 0.0; // in [0, 1)
    GridSpec grid;
    double t_max = 1.0;
    DtPolicy dt_policy;
    InitialDataSpec initial_data;
    int diag_every = 1;
    StopCriteria stop;
    std::optional<double> beta0;                 // characteristic start (default per data)
    std::optional<quad::WeightParams> weights;   // enables weighted-functional records
    bool nonlinear = true;                       // test hook: linear-only dynamics
    double init_tail_tolerance = 1e-6;

    void validate() const;
};

struct SolverState {
    double t = 0.0;
    RealField u;
    long step_count = 0;
    double last_dt = 0.0;
};

// -(1/2) d/dx dealias((dealias u)^2) + nonlocal term; mean-free output
RealField rhs(const RealField& u, double alpha, bool nonlinear = true);

// time step from the policy: sigma * h / (max|u| + 1) under cfl, capped by
// linear stability of the dispersive term
double policy_dt(const RealField& u, const SimConfig& cfg);

// one classical RK4 step; optionally exposes the stage fields so that
// characteristics can be advanced with the same stage combination
SolverState step(const SolverState& state, const SimConfig& cfg,
                 diag::StageFields* stages = nullptr,
                 std::optional<double> dt_override = std::nullopt);

// standalone trajectory advance consistent with the field integrator
diag::Characteristic track_characteristic(const SolverState& state,
                                          const SimConfig& cfg,
                                          diag::Characteristic c, double dt);

enum class StopReason { t_max_reached, slope_factor, tail_fraction, scheme_divergence };
const char* stop_reason_name(StopReason r);

struct RunReport {
    StopReason stop_reason = StopReason::t_max_reached;
    double t_final = 0.0;
    long steps = 0;
    std::size_t n_records = 0;
    double alpha = 0.0;
    double beta0 = 0.0;
    double initial_l2 = 0.0, max_l2_drift = 0.0;
    double initial_conserved = 0.0, max_conserved_drift = 0.0;
    double initial_hamiltonian = 0.0;
    double max_abs_mean = 0.0;
    double initial_ux_max = 0.0, final_ux_max = 0.0;
    std::optional<diag::BlowupFit> blowup; // 1/(T-t) ansatz fit, when applicable
    std::vector<std::string> warnings;
};

RunReport run(const SimConfig& cfg, diag::DiagSink& sink);

} // namespace bhlab::solver
