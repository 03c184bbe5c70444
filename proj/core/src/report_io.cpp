#include "nagmcmc/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace nagmcmc {

namespace {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string report_csv(const SimReport& report) {
  std::string out =
      "snr_db,detector,ber,ser,bits,errors,mean_sa,mults_runtime,mults_closed_form\n";
  for (const ReportRow& r : report.rows) {
    out += fmt6(r.snr_db);
    out += ',';
    out += r.detector;
    out += ',';
    out += fmt6(r.ber);
    out += ',';
    out += fmt6(r.ser);
    out += ',';
    out += std::to_string(r.bits);
    out += ',';
    out += std::to_string(r.errors);
    out += ',';
    out += fmt6(r.mean_sa);
    out += ',';
    out += fmt6(r.mults_runtime);
    out += ',';
    out += fmt6(r.mults_closed_form);
    out += '\n';
  }
  return out;
}

std::string report_json(const SimReport& report) {
  nlohmann::ordered_json j;
  j["build_id"] = report.build_id;
  j["seed"] = report.seed;
  j["resampled_channels"] = report.resampled_channels;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config_echo) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["snr_db"] = r.snr_db;
    row["detector"] = r.detector;
    row["ber"] = r.ber;
    row["ser"] = r.ser;
    row["bits"] = r.bits;
    row["errors"] = r.errors;
    row["symbols"] = r.symbols;
    row["symbol_errors"] = r.symbol_errors;
    row["trials"] = r.trials;
    row["mean_sa"] = r.mean_sa;
    row["mults_runtime"] = r.mults_runtime;
    row["mults_closed_form"] = r.mults_closed_form;
    row["wilson_lo"] = r.wilson_lo;
    row["wilson_hi"] = r.wilson_hi;
    rows.push_back(std::move(row));
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "iteration,detector,ber,bits,errors\n";
  for (const ConvergenceRow& r : report.rows) {
    out += std::to_string(r.iteration);
    out += ',';
    out += r.detector;
    out += ',';
    out += fmt6(r.ber);
    out += ',';
    out += std::to_string(r.bits);
    out += ',';
    out += std::to_string(r.errors);
    out += '\n';
  }
  return out;
}

std::string gd_trace_csv(const std::vector<GdTraceRow>& rows) {
  std::string out = "instance,t,method,residual_norm\n";
  for (const GdTraceRow& r : rows) {
    out += std::to_string(r.instance);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += r.method;
    out += ',';
    out += fmt6(r.residual_norm);
    out += '\n';
  }
  return out;
}

std::string llr_csv(const std::vector<LlrDumpRow>& rows) {
  std::string out = "trial,bit,llr,saturated\n";
  for (const LlrDumpRow& r : rows) {
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.bit);
    out += ',';
    out += fmt6(r.llr);
    out += ',';
    out += std::to_string(static_cast<int>(r.saturated));
    out += '\n';
  }
  return out;
}

std::string audit_text(const AuditReport& report) {
  std::string out = "phase,runtime,closed_form,ratio\n";
  for (const PhaseAuditRow& r : report.rows) {
    out += r.phase;
    out += ',';
    out += fmt6(r.runtime);
    out += ',';
    out += fmt6(r.closed_form);
    out += ',';
    out += fmt6(r.ratio);
    out += '\n';
  }
  out += "total," + fmt6(report.runtime_total) + "," +
         fmt6(report.closed_form_total) + "," +
         fmt6(report.closed_form_total > 0.0
                  ? report.runtime_total / report.closed_form_total
                  : 1.0) +
         "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> emit_report(const SimReport& report,
                                     const std::string& format,
                                     const std::string& out_dir) {
  std::vector<std::string> paths;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (format == "csv" || format == "both") {
    const std::string p = (std::filesystem::path(out_dir) / "report.csv").string();
    write_text_file(p, report_csv(report));
    paths.push_back(p);
  }
  if (format == "json" || format == "both") {
    const std::string p = (std::filesystem::path(out_dir) / "report.json").string();
    write_text_file(p, report_json(report));
    paths.push_back(p);
  }
  return paths;
}

}  // namespace nagmcmc
