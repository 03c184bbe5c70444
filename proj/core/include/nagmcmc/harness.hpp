#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nagmcmc/channel.hpp"
#include "nagmcmc/complexity.hpp"
#include "nagmcmc/detectors.hpp"
#include "nagmcmc/sampler.hpp"
#include "nagmcmc/softout.hpp"

namespace nagmcmc {

enum class Algorithm { nag_mcmc, mmse, zf, ml_exhaustive };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);

struct DetectorSpec {
  Algorithm algo = Algorithm::nag_mcmc;
  SamplerParams params;
  double nmse = 0.0;  // channel-estimation error seen by this detector
  std::string label;  // auto-generated when empty

  std::string effective_label() const;
};

struct SimConfig {
  std::size_t n_rx = 8, n_tx = 8;
  int mod_order = 16;
  std::vector<double> snr_grid_db{20.0};
  std::vector<DetectorSpec> detectors{DetectorSpec{}};
  // Per SNR point and detector: stop at max_bits, or once both min_bits and
  // min_bit_errors have been reached (evaluated at batch boundaries).
  std::uint64_t max_bits = 100'000'000;
  std::uint64_t min_bit_errors = 100;
  std::uint64_t min_bits = 100'000;
  std::uint64_t batch_trials = 4096;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 → NAGMCMC_WORKERS env var, else hardware concurrency
  std::string out_dir = "out";
  std::string format = "both";  // csv | json | both

  // Subcommand-specific knobs.
  int convergence_smax = 60;
  int gd_trace_iters = 30;
  int gd_trace_instances = 1000;
  int llr_trials = 8;
  std::string trace_path;         // per-detection sampler trace (trial 0)
  std::string channel_dump_path;  // H, y, x_true for the first trials
};

struct ReportRow {
  double snr_db = 0.0;
  std::string detector;
  double ber = 0.0, ser = 0.0;
  std::uint64_t bits = 0, errors = 0, symbols = 0, symbol_errors = 0, trials = 0;
  double mean_sa = 0.0;
  double mults_runtime = 0.0;      // measured, mean per detection
  double mults_closed_form = 0.0;  // NaN for detectors outside the model
  double wilson_lo = 0.0, wilson_hi = 0.0;
};

struct SimReport {
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> config_echo;
  std::uint64_t seed = 0;
  std::uint64_t resampled_channels = 0;
  std::string build_id;
};

SimReport run_ber_sweep(const SimConfig& cfg);

struct ConvergenceRow {
  int iteration;
  std::string detector;
  double ber;
  std::uint64_t bits, errors;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::uint64_t trials = 0;
};

// Pooled-decision BER as a function of the iteration budget s = 1..s_max,
// reusing each trial's chains (early stopping disabled for the recording).
ConvergenceReport convergence_trace(const SimConfig& cfg, int s_max);

struct PhaseAuditRow {
  std::string phase;
  double runtime;
  double closed_form;
  double ratio;  // runtime / closed_form
};

struct AuditReport {
  std::vector<PhaseAuditRow> rows;
  double runtime_total = 0.0;
  double closed_form_total = 0.0;
  int iterations_executed = 0;
};

// Instrumented tallies from one detection (first detector, first SNR point)
// against the per-phase closed-form split.
AuditReport runtime_counter_audit(const SimConfig& cfg);

struct GdTraceRow {
  int instance;
  int t;
  std::string method;
  double residual_norm;
};

// Naive-line-search vs Nesterov descent traces on random instances.
std::vector<GdTraceRow> gd_trace_experiment(const SimConfig& cfg);

struct LlrDumpRow {
  std::uint64_t trial;
  std::uint32_t bit;
  double llr;
  std::uint8_t saturated;
};

std::vector<LlrDumpRow> llr_dump(const SimConfig& cfg);

// 95% (default) Wilson score interval for errors/trials.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials,
                                          double z = 1.959963984540054);

// Closed-form count matching a detector spec, NaN when the spec has no
// closed-form row (ZF, exhaustive ML).
double closed_form_for_spec(const DetectorSpec& spec, std::size_t n, int mod_order,
                            double mean_sa);

int resolve_workers(const SimConfig& cfg);

}  // namespace nagmcmc
