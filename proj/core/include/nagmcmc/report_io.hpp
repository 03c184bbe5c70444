#pragma once

#include <string>
#include <vector>

#include "nagmcmc/harness.hpp"

namespace nagmcmc {

// Deterministic column order, floats with 6 significant digits:
// snr_db,detector,ber,ser,bits,errors,mean_sa,mults_runtime,mults_closed_form
std::string report_csv(const SimReport& report);

// Config echo, seed, build id, rows with Wilson intervals.
std::string report_json(const SimReport& report);

std::string convergence_csv(const ConvergenceReport& report);
std::string gd_trace_csv(const std::vector<GdTraceRow>& rows);
std::string llr_csv(const std::vector<LlrDumpRow>& rows);
std::string audit_text(const AuditReport& report);

void write_text_file(const std::string& path, const std::string& content);

// Writes report.csv / report.json under out_dir per format (csv|json|both);
// returns the paths written.
std::vector<std::string> emit_report(const SimReport& report,
                                     const std::string& format,
                                     const std::string& out_dir);

}  // namespace nagmcmc
