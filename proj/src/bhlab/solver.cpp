#include "bhlab/solver.hpp"

#include <algorithm>
#include <cmath>

namespace bhlab::solver {

using spectral::dealias;
using spectral::derivative;
using spectral::frac_laplacian_hilbert;
using spectral::from_spectrum;
using spectral::to_spectrum;

void StopCriteria::validate() const {
    if (!(max_slope_factor > 1.0))
        throw config_error("stop criteria require slope factor > 1");
    if (!(spectral_tail_fraction > 0.0) || !(spectral_tail_fraction < 1.0))
        throw config_error("stop criteria require tail fraction in (0,1)");
}

DtPolicy DtPolicy::fixed_dt(double dt) {
    DtPolicy p;
    p.kind = Kind::fixed;
    p.dt = dt;
    return p;
}

DtPolicy DtPolicy::cfl(double sigma) {
    DtPolicy p;
    p.kind = Kind::cfl;
    p.cfl_sigma = sigma;
    return p;
}

void DtPolicy::validate() const {
    if (kind == Kind::fixed) {
        if (!(dt > 0.0)) throw config_error("fixed dt must be positive");
    } else {
        if (!(cfl_sigma > 0.0) || !(cfl_sigma <= 1.0))
            throw config_error("cfl sigma must lie in (0, 1]");
    }
}

void SimConfig::validate() const {
    if (!(alpha >= 0.0) || !(alpha < 1.0))
        throw config_error("alpha must lie in [0, 1)");
    grid.validate();
    if (!(t_max >= 0.0)) throw config_error("t_max must be nonnegative");
    dt_policy.validate();
    if (diag_every < 1) throw config_error("diagnostic cadence must be >= 1");
    stop.validate();
    if (weights) weights->validate();
}

namespace {

Spectrum rhs_spectrum(const Spectrum& s, double alpha, bool nonlinear) {
    Spectrum out = frac_laplacian_hilbert(s, alpha);
    if (nonlinear) {
        RealField v = from_spectrum(dealias(s));
        for (double& value : v.values) value *= value;
        Spectrum w = derivative(dealias(to_spectrum(v)));
        for (std::size_t k = 0; k < out.coeffs.size(); ++k)
            out.coeffs[k] -= 0.5 * w.coeffs[k];
    }
    return out;
}

Spectrum axpy(const Spectrum& a, double scale, const Spectrum& b) {
    Spectrum out = a;
    for (std::size_t k = 0; k < out.coeffs.size(); ++k)
        out.coeffs[k] += scale * b.coeffs[k];
    return out;
}

} // namespace

RealField rhs(const RealField& u, double alpha, bool nonlinear) {
    return from_spectrum(rhs_spectrum(to_spectrum(u), alpha, nonlinear));
}

double policy_dt(const RealField& u, const SimConfig& cfg) {
    if (cfg.dt_policy.kind == DtPolicy::Kind::fixed) return cfg.dt_policy.dt;
    double advective = cfg.grid.spacing() / (max_abs(u) + 1.0);
    // explicit RK4 cap for the dispersive term (never binding for alpha < 1
    // at practical resolutions, kept as a guard)
    double lam = std::pow(cfg.grid.wavenumber(cfg.grid.n_points / 2), cfg.alpha);
    double dispersive = 2.5 / lam;
    return cfg.dt_policy.cfl_sigma * std::min(advective, dispersive);
}

SolverState step(const SolverState& state, const SimConfig& cfg,
                 diag::StageFields* stages, std::optional<double> dt_override) {
    // negative dt is legal here (reverse-time integration is a test
    // diagnostic); the run loop only ever produces positive steps
    const double dt = dt_override ? *dt_override : policy_dt(state.u, cfg);
    if (dt == 0.0 || !std::isfinite(dt))
        throw config_error("time step must be nonzero and finite");

    SolverState next;
    Spectrum s1 = to_spectrum(state.u);
    try {
        Spectrum k1 = rhs_spectrum(s1, cfg.alpha, cfg.nonlinear);
        Spectrum s2 = axpy(s1, 0.5 * dt, k1);
        Spectrum k2 = rhs_spectrum(s2, cfg.alpha, cfg.nonlinear);
        Spectrum s3 = axpy(s1, 0.5 * dt, k2);
        Spectrum k3 = rhs_spectrum(s3, cfg.alpha, cfg.nonlinear);
        Spectrum s4 = axpy(s1, dt, k3);
        Spectrum k4 = rhs_spectrum(s4, cfg.alpha, cfg.nonlinear);

        Spectrum snew = s1;
        for (std::size_t k = 0; k < snew.coeffs.size(); ++k)
            snew.coeffs[k] += dt / 6.0 *
                              (k1.coeffs[k] + 2.0 * k2.coeffs[k] +
                               2.0 * k3.coeffs[k] + k4.coeffs[k]);

        next.u = from_spectrum(snew);
        if (stages) *stages = diag::StageFields{std::move(s1), std::move(s2),
                                                std::move(s3), std::move(s4), dt};
    } catch (const config_error&) {
        // inside a step the only data-dependent validation is finiteness
        throw scheme_divergence_error("time step produced a nonfinite state");
    }
    next.t = state.t + dt;
    next.step_count = state.step_count + 1;
    next.last_dt = dt;
    for (double v : next.u.values)
        if (!std::isfinite(v))
            throw scheme_divergence_error("time step produced a nonfinite field");
    return next;
}

diag::Characteristic track_characteristic(const SolverState& state,
                                          const SimConfig& cfg,
                                          diag::Characteristic c, double dt) {
    diag::StageFields stages;
    step(state, cfg, &stages, dt);
    diag::advance_characteristic(c, stages);
    return c;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::t_max_reached: return "t_max_reached";
        case StopReason::slope_factor: return "slope_factor";
        case StopReason::tail_fraction: return "tail_fraction";
        case StopReason::scheme_divergence: return "scheme_divergence";
    }
    return "unknown";
}

RunReport run(const SimConfig& cfg, diag::DiagSink& sink) {
    cfg.validate();
    InitialData init = sample_initial_data(cfg.initial_data, cfg.grid,
                                           cfg.init_tail_tolerance);

    RunReport report;
    report.alpha = cfg.alpha;
    report.warnings = init.warnings;
    report.beta0 = cfg.beta0.value_or(init.beta0_default);

    diag::Characteristic tracked = diag::make_characteristic(report.beta0);
    SolverState state{0.0, std::move(init.field), 0, 0.0};

    std::vector<diag::DiagRecord> kept; // for the blow-up fit
    auto emit = [&](const RealField& u, const Spectrum& s, double t) {
        diag::DiagRecord rec =
            diag::make_record(t, u, s, cfg.alpha, &tracked, cfg.weights);
        tracked.history.push_back({t, tracked.x, rec.J_traj, rec.HJ_traj});
        sink.on_record(rec);
        sink.on_snapshot(t, u);
        kept.push_back(rec);
        ++report.n_records;
        if (report.n_records == 1) {
            report.initial_l2 = rec.l2_norm;
            report.initial_conserved = rec.conserved_energy;
            report.initial_hamiltonian = rec.hamiltonian_functional;
            report.initial_ux_max = rec.ux_max;
        } else {
            report.max_l2_drift =
                std::max(report.max_l2_drift,
                         std::abs(rec.l2_norm - report.initial_l2) /
                             std::max(report.initial_l2, 1e-300));
            report.max_conserved_drift =
                std::max(report.max_conserved_drift,
                         std::abs(rec.conserved_energy - report.initial_conserved) /
                             std::max(std::abs(report.initial_conserved), 1e-300));
        }
        report.max_abs_mean = std::max(report.max_abs_mean, std::abs(rec.mean));
        report.final_ux_max = rec.ux_max;
        return rec;
    };

    Spectrum spectrum = to_spectrum(state.u);
    emit(state.u, spectrum, 0.0);
    const double initial_ux = report.initial_ux_max;

    report.stop_reason = StopReason::t_max_reached;
    while (state.t < cfg.t_max * (1.0 - 1e-14)) {
        double dt = std::min(policy_dt(state.u, cfg), cfg.t_max - state.t);
        diag::StageFields stages;
        SolverState next;
        try {
            next = step(state, cfg, &stages, dt);
        } catch (const scheme_divergence_error&) {
            report.stop_reason = StopReason::scheme_divergence;
            break;
        }
        diag::advance_characteristic(tracked, stages);
        state = std::move(next);
        spectrum = to_spectrum(state.u);

        bool stopping = false;
        double ux = spectral::interpolant_max_abs(derivative(spectrum));
        if (ux > cfg.stop.max_slope_factor * initial_ux && initial_ux > 0.0) {
            report.stop_reason = StopReason::slope_factor;
            stopping = true;
        } else if (spectral::tail_energy_fraction(spectrum) >
                   cfg.stop.spectral_tail_fraction) {
            report.stop_reason = StopReason::tail_fraction;
            stopping = true;
        }

        bool at_t_max = state.t >= cfg.t_max * (1.0 - 1e-14);
        if (state.step_count % cfg.diag_every == 0 || stopping || at_t_max)
            emit(state.u, spectrum, state.t);
        if (stopping) break;
    }

    report.t_final = state.t;
    report.steps = state.step_count;

    if (report.stop_reason == StopReason::slope_factor) {
        if (auto window = diag::auto_fit_window(kept)) {
            try {
                report.blowup = diag::fit_blowup(kept, window->first, window->second);
            } catch (const precondition_error& e) {
                report.warnings.push_back(std::string("blow-up fit skipped: ") +
                                          e.what());
            }
        } else {
            report.warnings.push_back("blow-up fit skipped: no monotone window");
        }
    }
    return report;
}

} // namespace bhlab::solver
