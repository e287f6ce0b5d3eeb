#include "bhlab/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "bhlab/singular_ops.hpp"

namespace bhlab::diag {

namespace {

constexpr double pi = std::numbers::pi;

// nonuniform three-point first and second derivatives at the middle node
double fd_first(double t0, double y0, double t1, double y1, double t2, double y2) {
    double h1 = t1 - t0, h2 = t2 - t1;
    return -h2 / (h1 * (h1 + h2)) * y0 + (h2 - h1) / (h1 * h2) * y1 +
           h1 / (h2 * (h1 + h2)) * y2;
}

double fd_second(double t0, double y0, double t1, double y1, double t2, double y2) {
    double h1 = t1 - t0, h2 = t2 - t1;
    return 2.0 * (y0 / (h1 * (h1 + h2)) - y1 / (h1 * h2) + y2 / (h2 * (h1 + h2)));
}

} // namespace

Characteristic make_characteristic(double beta0) {
    return Characteristic{beta0, beta0, {}};
}

void advance_characteristic(Characteristic& c, const StageFields& st) {
    const double dt = st.dt;
    double k1 = spectral::eval_at(st.s1, c.x);
    double k2 = spectral::eval_at(st.s2, c.x + 0.5 * dt * k1);
    double k3 = spectral::eval_at(st.s3, c.x + 0.5 * dt * k2);
    double k4 = spectral::eval_at(st.s4, c.x + dt * k3);
    c.x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(c.x))
        throw scheme_divergence_error("characteristic position became nonfinite");
}

ConservedQuantities conserved(const RealField& u, double alpha) {
    u.validate();
    if (std::abs(mean_value(u)) > 1e-8 * std::max(1.0, max_abs(u)))
        throw precondition_error("conserved quantities require a mean-free field");
    const double h = u.grid.spacing();
    Spectrum s = spectral::to_spectrum(u);
    RealField lam_m1 = spectral::from_spectrum(spectral::frac_laplacian(s, alpha - 1.0));
    RealField lam_half =
        spectral::from_spectrum(spectral::frac_laplacian(s, 0.5 * (alpha - 1.0)));

    ConservedQuantities out;
    out.mean = mean_value(u);
    double l2sq = 0.0, ham = 0.0, disp = 0.0;
    for (int j = 0; j < u.grid.n_points; ++j) {
        double v = u.values[j];
        l2sq += v * v;
        ham += 0.5 * v * lam_m1.values[j] + v * v * v / 6.0;
        disp += v * v * v / 3.0 + lam_half.values[j] * lam_half.values[j];
    }
    out.l2 = std::sqrt(l2sq * h);
    out.hamiltonian = ham * h;
    out.conserved_display = disp * h;
    return out;
}

DiagRecord make_record(double t, const RealField& u, const Spectrum& spectrum,
                       double alpha, const Characteristic* tracked,
                       const std::optional<quad::WeightParams>& weights) {
    DiagRecord rec;
    rec.t = t;
    rec.box_length = u.grid.length;
    ConservedQuantities c = conserved(u, alpha);
    rec.l2_norm = c.l2;
    rec.hamiltonian_functional = c.hamiltonian;
    rec.conserved_energy = c.conserved_display;
    rec.mean = c.mean;
    rec.u_max = max_value(u);
    rec.u_min = min_value(u);
    rec.ux_max = spectral::interpolant_max_abs(spectral::derivative(spectrum));
    rec.tail_fraction = spectral::tail_energy_fraction(spectrum);

    if (tracked) {
        const double x = tracked->x;
        rec.J_traj = spectral::eval_at(spectrum, x);
        rec.HJ_traj = spectral::eval_at(spectral::hilbert(spectrum), x);
        rec.dini_at_traj = quad::DiniEvaluator(u).at(x);

        if (weights) {
            rec.weights_active = true;
            const double L = u.grid.length;
            const double u_sup = std::max(std::abs(rec.u_max), std::abs(rec.u_min));
            auto u_fn = [&spectrum](double y) { return spectral::eval_at(spectrum, y); };
            rec.J_weight =
                quad::weighted_functional(u_fn, L, x, *weights, u_sup).value;

            rec.jw_quadratic =
                quad::weighted_square_difference(u_fn, L, x, *weights, u_sup).value;
            Spectrum nonlocal = spectral::frac_laplacian_hilbert(spectrum, alpha);
            auto lin_fn = [&nonlocal](double y) {
                return spectral::eval_at(nonlocal, y);
            };
            double lin_sup = max_abs(spectral::from_spectrum(nonlocal));
            rec.jw_linear =
                quad::weighted_functional(lin_fn, L, x, *weights, lin_sup).value;
            rec.rhs8_value = 0.5 * rec.jw_quadratic + rec.jw_linear;

            // convolution identity:
            //   -(1/2) int (u(x)^2-u(y)^2) W + u(x) int (u(x)-u(y)) W
            //     = (1/2) int (u(x)-u(y))^2 W
            auto u2_fn = [&spectrum](double y) {
                double v = spectral::eval_at(spectrum, y);
                return v * v;
            };
            double a = quad::weighted_difference(u2_fn, L, x, *weights, u_sup * u_sup).value;
            double b = quad::weighted_difference(u_fn, L, x, *weights, u_sup).value;
            double lhs = -0.5 * a + rec.J_traj * b;
            double rhs = 0.5 * rec.jw_quadratic;
            rec.jw_transport_gap =
                std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
        }
    }
    return rec;
}

std::size_t resolved_prefix(std::span<const DiagRecord> records,
                            double noise_budget) {
    if (records.size() < 3) return records.size();
    std::size_t n = 1;
    while (n + 1 < records.size()) {
        const auto& r = records[n];
        double delta = 0.5 * (records[n + 1].t - records[n - 1].t);
        // cut-band content in field units, from the stored tail fraction
        double eta = r.l2_norm *
                     std::sqrt(std::max(r.tail_fraction, 0.0) /
                               std::max(r.box_length, 1e-300));
        double fd_noise = 4.0 * eta / (delta * delta);
        double scale = std::abs(r.dini_at_traj - r.J_traj);
        if (fd_noise > noise_budget * std::max(scale, 1e-300)) break;
        ++n;
    }
    return n + 1 == records.size() ? records.size() : n;
}

TrajectoryAccelReport trajectory_accel_check(std::span<const DiagRecord> records,
                                             double noise_budget) {
    if (records.size() < 5)
        throw precondition_error("trajectory check needs at least 5 records");
    TrajectoryAccelReport rep;
    rep.resolved_records = resolved_prefix(records, noise_budget);
    records = records.subspan(0, rep.resolved_records);
    if (records.size() < 3) return rep;
    for (std::size_t i = 1; i + 1 < records.size(); ++i) {
        const auto &a = records[i - 1], &b = records[i], &c = records[i + 1];
        double lhs = fd_second(a.t, a.J_traj, b.t, b.J_traj, c.t, c.J_traj);
        double rhs = b.dini_at_traj - b.J_traj;
        double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
        rep.entries.push_back({b.t, lhs, rhs, rel});
        rep.max_rel_discrepancy = std::max(rep.max_rel_discrepancy, rel);
    }
    return rep;
}

OdeInequalityReport ode_inequality_monitor(std::span<const DiagRecord> records,
                                           double energy, double noise_budget) {
    if (records.size() < 3)
        throw precondition_error("inequality monitor needs at least 3 records");
    OdeInequalityReport rep;
    rep.resolved_records = resolved_prefix(records, noise_budget);
    records = records.subspan(0, rep.resolved_records);
    if (records.size() < 3) return rep;
    rep.energy = energy;
    rep.c_constant = 1.0 / (32.0 * pi * energy);
    const double j0 = records.front().J_traj;
    const double jt0 = records.front().HJ_traj;
    const double C = rep.c_constant;

    double prev_j = records.front().J_traj;
    for (std::size_t i = 1; i + 1 < records.size(); ++i) {
        const auto &a = records[i - 1], &b = records[i], &c = records[i + 1];
        double jtt = fd_second(a.t, a.J_traj, b.t, b.J_traj, c.t, c.J_traj);
        double j = b.J_traj;
        double accel_margin = jtt - (C * j * j * j * j - j);
        double radicand = jt0 * jt0 +
                          0.4 * C * (std::pow(j, 5) - std::pow(j0, 5)) -
                          (j * j - j0 * j0);
        double speed_floor = std::sqrt(std::max(radicand, 0.0));
        double speed_margin = b.HJ_traj - speed_floor;

        OdeInequalityReport::Entry e;
        e.t = b.t;
        e.accel_ok = accel_margin >= 0.0;
        e.speed_ok = speed_margin >= 0.0;
        e.jt_positive = b.HJ_traj > 0.0;
        e.j_increasing = b.J_traj > prev_j;
        e.accel_margin = accel_margin;
        e.speed_margin = speed_margin;
        rep.entries.push_back(e);
        if (!(e.accel_ok && e.speed_ok && e.jt_positive && e.j_increasing) &&
            rep.all_hold) {
            rep.all_hold = false;
            rep.first_violation_time = b.t;
        }
        prev_j = b.J_traj;
    }
    return rep;
}

RiccatiReport riccati_monitor(std::span<const DiagRecord> records,
                              double growth_coefficient, double damping_constant) {
    if (records.size() < 3)
        throw precondition_error("riccati monitor needs at least 3 records");
    RiccatiReport rep;
    for (std::size_t i = 1; i + 1 < records.size(); ++i) {
        const auto &a = records[i - 1], &b = records[i], &c = records[i + 1];
        if (!b.weights_active)
            throw precondition_error("riccati monitor requires weighted records");
        RiccatiReport::Entry e;
        e.t = b.t;
        e.djdt_fd = fd_first(a.t, a.J_weight, b.t, b.J_weight, c.t, c.J_weight);
        e.rhs_value = b.rhs8_value;
        e.rel_discrepancy =
            std::abs(e.djdt_fd - e.rhs_value) / std::max(std::abs(e.rhs_value), 1e-12);
        double floor_v = growth_coefficient * b.J_weight * b.J_weight - damping_constant;
        e.inequality_ok = e.djdt_fd >= floor_v;
        e.quadratic_nonneg = b.jw_quadratic >= 0.0;
        e.transport_gap = b.jw_transport_gap;
        rep.entries.push_back(e);
        rep.max_identity_discrepancy =
            std::max(rep.max_identity_discrepancy, e.rel_discrepancy);
        rep.max_transport_gap = std::max(rep.max_transport_gap, e.transport_gap);
        rep.inequality_all_hold = rep.inequality_all_hold && e.inequality_ok;
        rep.quadratic_all_nonneg = rep.quadratic_all_nonneg && e.quadratic_nonneg;
    }
    return rep;
}

BlowupFit fit_blowup(std::span<const DiagRecord> records, std::size_t first,
                     std::size_t last) {
    if (last <= first || last >= records.size())
        throw precondition_error("fit_blowup: bad window");
    if (last - first + 1 < 8)
        throw precondition_error("fit_blowup: need at least 8 records");
    for (std::size_t i = first + 1; i <= last; ++i)
        if (!(records[i].ux_max > records[i - 1].ux_max))
            throw precondition_error("fit_blowup: ux_max not strictly increasing");

    // least squares on 1/ux_max vs t
    double st = 0.0, sz = 0.0, stt = 0.0, stz = 0.0;
    const double n = static_cast<double>(last - first + 1);
    for (std::size_t i = first; i <= last; ++i) {
        double z = 1.0 / records[i].ux_max;
        st += records[i].t;
        sz += z;
        stt += records[i].t * records[i].t;
        stz += records[i].t * z;
    }
    double denom = n * stt - st * st;
    double slope = (n * stz - st * sz) / denom;
    double intercept = (sz - slope * st) / n;
    if (!(slope < 0.0))
        throw precondition_error("fit_blowup: 1/ux_max is not decreasing");

    BlowupFit fit;
    fit.first = first;
    fit.last = last;
    fit.t_estimate = -intercept / slope;
    fit.amplitude = -1.0 / slope;
    double ss = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        double r = 1.0 / records[i].ux_max - (intercept + slope * records[i].t);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

std::optional<std::pair<std::size_t, std::size_t>> auto_fit_window(
    std::span<const DiagRecord> records) {
    if (records.size() < 8) return std::nullopt;
    std::size_t last = records.size() - 1;
    std::size_t first = last;
    while (first > 0 && records[first].ux_max > records[first - 1].ux_max &&
           last - first + 1 < 64)
        --first;
    if (last - first + 1 < 8) return std::nullopt;
    return std::make_pair(first, last);
}

} // namespace bhlab::diag
