#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "bhlab/diagnostics.hpp"
#include "bhlab/inequality.hpp"
#include "bhlab/solver.hpp"
#include "bhlab/weights.hpp"

namespace bhlab::io {

// records.csv sink with the fixed column schema
//   t, l2, hamiltonian, mean, u_max, ux_max, J_traj, HJ_traj,
//   dini_at_traj, J_weight, rhs8_value
// (the hamiltonian column carries the conserved combination, which is the
// quantity whose drift is asserted)
extern const char* kRecordsCsvHeader;

class CsvSink final : public diag::DiagSink {
public:
    explicit CsvSink(const std::string& path);
    void on_record(const diag::DiagRecord& r) override;
    void close();

private:
    std::ofstream out_;
};

std::string record_csv_line(const diag::DiagRecord& r);

void write_summary_text(const std::string& path, const solver::RunReport& report);
void write_summary_json(const std::string& path, const solver::RunReport& report);

// kernel.csv: columns x, I_value, tail_bound; plus the fitted exponents
void write_kernel_table_csv(const std::string& path, const quad::KernelTable& table);
void write_kernel_table_summary(const std::string& path,
                                const quad::KernelTable& table);

void write_cert_report(const std::string& path, const lab::CertReport& report);
void append_cert_report(std::ostream& out, const lab::CertReport& report);

// static polyline plots
void write_field_snapshots_svg(const std::string& path,
                               const std::vector<RealField>& snapshots,
                               const std::vector<double>& times);
void write_slope_history_svg(const std::string& path,
                             const std::vector<double>& t,
                             const std::vector<double>& ux_max);

} // namespace bhlab::io
