#include "bhlab/report_io.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "bhlab/field_io.hpp"

namespace bhlab::io {

const char* kRecordsCsvHeader =
    "t,l2,hamiltonian,mean,u_max,ux_max,J_traj,HJ_traj,dini_at_traj,J_weight,"
    "rhs8_value";

std::string record_csv_line(const diag::DiagRecord& r) {
    std::string line;
    auto add = [&](double v, bool first = false) {
        if (!first) line += ',';
        line += format_double(v);
    };
    add(r.t, true);
    add(r.l2_norm);
    add(r.conserved_energy);
    add(r.mean);
    add(r.u_max);
    add(r.ux_max);
    add(r.J_traj);
    add(r.HJ_traj);
    add(r.dini_at_traj);
    add(r.J_weight);
    add(r.rhs8_value);
    return line;
}

CsvSink::CsvSink(const std::string& path) : out_(path) {
    if (!out_) throw config_error("cannot open records file: " + path);
    out_ << kRecordsCsvHeader << "\n";
}

void CsvSink::on_record(const diag::DiagRecord& r) {
    out_ << record_csv_line(r) << "\n";
}

void CsvSink::close() {
    out_.flush();
    out_.close();
}

void write_summary_text(const std::string& path, const solver::RunReport& rep) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open summary file: " + path);
    out << "stop_reason: " << solver::stop_reason_name(rep.stop_reason) << "\n"
        << "t_final: " << format_double(rep.t_final) << "\n"
        << "steps: " << rep.steps << "\n"
        << "records: " << rep.n_records << "\n"
        << "alpha: " << format_double(rep.alpha) << "\n"
        << "beta0: " << format_double(rep.beta0) << "\n"
        << "initial_l2: " << format_double(rep.initial_l2) << "\n"
        << "max_rel_l2_drift: " << format_double(rep.max_l2_drift) << "\n"
        << "initial_conserved_energy: " << format_double(rep.initial_conserved)
        << "\n"
        << "initial_hamiltonian_functional: "
        << format_double(rep.initial_hamiltonian) << "\n"
        << "max_rel_conserved_drift: " << format_double(rep.max_conserved_drift)
        << "\n"
        << "max_abs_mean: " << format_double(rep.max_abs_mean) << "\n"
        << "initial_ux_max: " << format_double(rep.initial_ux_max) << "\n"
        << "final_ux_max: " << format_double(rep.final_ux_max) << "\n";
    if (rep.blowup) {
        // the 1/(T-t) form is an extrapolation ansatz, not a derived rate
        out << "blowup_fit_ansatz: ux_max ~ A/(T-t)\n"
            << "blowup_T_estimate: " << format_double(rep.blowup->t_estimate) << "\n"
            << "blowup_amplitude: " << format_double(rep.blowup->amplitude) << "\n"
            << "blowup_fit_residual: " << format_double(rep.blowup->residual) << "\n";
    }
    for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
}

void write_summary_json(const std::string& path, const solver::RunReport& rep) {
    nlohmann::json j;
    j["stop_reason"] = solver::stop_reason_name(rep.stop_reason);
    j["t_final"] = rep.t_final;
    j["steps"] = rep.steps;
    j["records"] = rep.n_records;
    j["alpha"] = rep.alpha;
    j["beta0"] = rep.beta0;
    j["initial_l2"] = rep.initial_l2;
    j["max_rel_l2_drift"] = rep.max_l2_drift;
    j["initial_conserved_energy"] = rep.initial_conserved;
    j["initial_hamiltonian_functional"] = rep.initial_hamiltonian;
    j["max_rel_conserved_drift"] = rep.max_conserved_drift;
    j["max_abs_mean"] = rep.max_abs_mean;
    j["initial_ux_max"] = rep.initial_ux_max;
    j["final_ux_max"] = rep.final_ux_max;
    if (rep.blowup) {
        j["blowup_fit"] = {{"ansatz", "ux_max ~ A/(T-t)"},
                           {"t_estimate", rep.blowup->t_estimate},
                           {"amplitude", rep.blowup->amplitude},
                           {"residual", rep.blowup->residual}};
    }
    j["warnings"] = rep.warnings;
    std::ofstream out(path);
    if (!out) throw config_error("cannot open summary json: " + path);
    out << j.dump(2) << "\n";
}

void write_kernel_table_csv(const std::string& path, const quad::KernelTable& table) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open kernel table: " + path);
    out << "x,I_value,tail_bound\n";
    for (std::size_t i = 0; i < table.x.size(); ++i)
        out << format_double(table.x[i]) << ',' << format_double(table.value[i])
            << ',' << format_double(table.tail_bound[i]) << "\n";
}

void write_kernel_table_summary(const std::string& path,
                                const quad::KernelTable& table) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open kernel summary: " + path);
    out << "q: " << format_double(table.params.q) << "\n"
        << "p: " << format_double(table.params.p) << "\n"
        << "alpha: " << format_double(table.params.alpha) << "\n";
    auto dump_fit = [&](const char* name, const std::optional<quad::PowerFit>& fit,
                        double expected) {
        if (!fit) {
            out << name << ": not sampled\n";
            return;
        }
        out << name << "_slope: " << format_double(fit->slope) << "\n"
            << name << "_slope_stderr: " << format_double(fit->slope_stderr) << "\n"
            << name << "_expected: " << format_double(expected) << "\n"
            << name << "_points: " << fit->points << "\n";
    };
    dump_fit("small_regime", table.small_fit, -(table.params.q + table.params.alpha));
    dump_fit("large_regime", table.large_fit, -(2.0 + table.params.alpha));
    out << "k1: " << format_double(table.k1) << "\n"
        << "k2: " << format_double(table.k2) << "\n"
        << "k3: " << format_double(table.k3) << "\n";
}

void append_cert_report(std::ostream& out, const lab::CertReport& rep) {
    out << "id: " << rep.id << "\n"
        << "points_checked: " << rep.points_checked << "\n"
        << "worst_margin: " << format_double(rep.worst_margin) << "\n"
        << "worst_x: " << format_double(rep.worst_x) << "\n"
        << "worst_y: " << format_double(rep.worst_y) << "\n"
        << "tolerance: " << format_double(rep.tolerance) << "\n"
        << "verdict: " << (rep.pass ? "pass" : "fail") << "\n";
}

void write_cert_report(const std::string& path, const lab::CertReport& rep) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open cert report: " + path);
    append_cert_report(out, rep);
}

namespace {

struct SvgFrame {
    double width = 840, height = 560;
    double ml = 70, mr = 20, mt = 20, mb = 50;
    double x0, x1, y0, y1;

    double px(double x) const {
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr);
    }
    double py(double y) const {
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb);
    }
};

void svg_open(std::ofstream& out, const SvgFrame& f) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
        << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << " "
        << f.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << f.ml << "\" y1=\"" << f.height - f.mb << "\" x2=\""
        << f.width - f.mr << "\" y2=\"" << f.height - f.mb
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << f.ml << "\" y1=\"" << f.mt << "\" x2=\"" << f.ml
        << "\" y2=\"" << f.height - f.mb << "\" stroke=\"black\"/>\n";
    auto label = [&](double vx, double vy, const std::string& text) {
        out << "<text x=\"" << vx << "\" y=\"" << vy
            << "\" font-size=\"12\" font-family=\"monospace\">" << text
            << "</text>\n";
    };
    label(f.ml, f.height - f.mb + 30, format_double(f.x0));
    label(f.width - f.mr - 60, f.height - f.mb + 30, format_double(f.x1));
    label(5, f.height - f.mb, format_double(f.y0));
    label(5, f.mt + 12, format_double(f.y1));
}

void svg_polyline(std::ofstream& out, const SvgFrame& f,
                  const std::vector<double>& xs, const std::vector<double>& ys,
                  const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << f.px(xs[i]) << ',' << f.py(ys[i]) << ' ';
    out << "\"/>\n";
}

const char* kPalette[] = {"#1f4e9c", "#b02a1a", "#2a7d2a", "#8135a6",
                          "#b07c1a", "#1a8a8a", "#666666", "#d05090"};

} // namespace

void write_field_snapshots_svg(const std::string& path,
                               const std::vector<RealField>& snapshots,
                               const std::vector<double>& times) {
    if (snapshots.empty()) return;
    std::ofstream out(path);
    if (!out) throw config_error("cannot open svg: " + path);
    SvgFrame f;
    f.x0 = -0.5 * snapshots.front().grid.length;
    f.x1 = 0.5 * snapshots.front().grid.length;
    f.y0 = 1e300;
    f.y1 = -1e300;
    for (const auto& s : snapshots) {
        f.y0 = std::min(f.y0, min_value(s));
        f.y1 = std::max(f.y1, max_value(s));
    }
    if (f.y1 <= f.y0) {
        f.y0 -= 1.0;
        f.y1 += 1.0;
    }
    svg_open(out, f);
    const int max_points = 1024;
    for (std::size_t si = 0; si < snapshots.size(); ++si) {
        const RealField& s = snapshots[si];
        int stride = std::max(1, s.grid.n_points / max_points);
        std::vector<double> xs, ys;
        for (int j = 0; j < s.grid.n_points; j += stride) {
            xs.push_back(s.grid.node(j));
            ys.push_back(s.values[j]);
        }
        svg_polyline(out, f, xs, ys, kPalette[si % 8]);
        out << "<text x=\"" << f.width - 180 << "\" y=\"" << 30 + 16 * si
            << "\" font-size=\"12\" font-family=\"monospace\" fill=\""
            << kPalette[si % 8] << "\">t=" << format_double(times[si])
            << "</text>\n";
    }
    out << "</svg>\n";
}

void write_slope_history_svg(const std::string& path, const std::vector<double>& t,
                             const std::vector<double>& ux_max) {
    if (t.empty()) return;
    std::ofstream out(path);
    if (!out) throw config_error("cannot open svg: " + path);
    SvgFrame f;
    f.x0 = t.front();
    f.x1 = std::max(t.back(), t.front() + 1e-12);
    f.y0 = 0.0;
    f.y1 = *std::max_element(ux_max.begin(), ux_max.end()) * 1.05 + 1e-12;
    svg_open(out, f);
    svg_polyline(out, f, t, ux_max, kPalette[0]);
    out << "<text x=\"" << f.width - 180 << "\" y=\"30\" font-size=\"12\""
        << " font-family=\"monospace\" fill=\"" << kPalette[0]
        << "\">max|u_x|(t)</text>\n";
    out << "</svg>\n";
}

} // namespace bhlab::io
