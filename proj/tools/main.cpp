#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nagmcmc/config.hpp"
#include "nagmcmc/harness.hpp"
#include "nagmcmc/report_io.hpp"
#include "nagmcmc/version.hpp"

namespace {

using namespace nagmcmc;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config_path, preset;
  std::optional<std::string> snr, detectors, out, format, trace_out, dump_channels;
  std::optional<std::uint64_t> ntx, nrx, seed, max_bits, min_errors, min_bits,
      batch_trials;
  std::optional<int> mod, samplers, iters, ng, workers, smax, gd_iters, instances,
      llr_trials;
  std::optional<double> eta, beta, rho, nmse;
  std::optional<bool> sa, es;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "flat key=value config file");
  cmd->add_option("--preset", f.preset, "named experiment preset");
  cmd->add_option("--snr", f.snr, "SNR grid in dB, comma separated");
  cmd->add_option("--ntx", f.ntx, "transmit antennas");
  cmd->add_option("--nrx", f.nrx, "receive antennas");
  cmd->add_option("--mod", f.mod, "QAM order (4, 16, 64)");
  cmd->add_option("--samplers", f.samplers, "parallel samplers P");
  cmd->add_option("--iters", f.iters, "sampling iterations S");
  cmd->add_option("--ng", f.ng, "Nesterov GD iterations per random walk");
  cmd->add_option("--sa", f.sa, "sample augmentation (0/1)");
  cmd->add_option("--es", f.es, "early stopping (0/1)");
  cmd->add_option("--eta", f.eta, "early-stopping residual threshold factor");
  cmd->add_option("--beta", f.beta, "walk-scale coefficient (<=0: (N_t/8)^(-1/3))");
  cmd->add_option("--rho", f.rho, "Nesterov momentum factor");
  cmd->add_option("--nmse", f.nmse, "channel-estimation NMSE for all detectors");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--max-bits", f.max_bits, "bit budget per SNR point");
  cmd->add_option("--min-errors", f.min_errors, "bit errors before stopping");
  cmd->add_option("--min-bits", f.min_bits, "bits before stopping");
  cmd->add_option("--batch-trials", f.batch_trials, "trials per scheduling batch");
  cmd->add_option("--detectors", f.detectors, "semicolon-separated detector specs");
  cmd->add_option("--workers", f.workers, "worker threads (0: NAGMCMC_WORKERS/hw)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "report format: csv, json, both");
}

SimConfig build_config(const CommonFlags& f, const std::string& subcommand) {
  SimConfig cfg;
  std::vector<std::string> errors;
  if (!f.preset.empty()) {
    cfg = preset_config(f.preset);
    if (preset_subcommand(f.preset) != subcommand)
      throw ConfigError("preset '" + f.preset + "' belongs to subcommand '" +
                        preset_subcommand(f.preset) + "'");
  }
  if (!f.config_path.empty()) apply_kv(cfg, parse_kv_file(f.config_path), errors);

  KvMap kv;
  if (f.snr) kv["snr"] = *f.snr;
  if (f.detectors) kv["detectors"] = *f.detectors;
  if (f.ntx) kv["ntx"] = std::to_string(*f.ntx);
  if (f.nrx) kv["nrx"] = std::to_string(*f.nrx);
  if (f.mod) kv["mod"] = std::to_string(*f.mod);
  if (f.seed) kv["seed"] = std::to_string(*f.seed);
  if (f.max_bits) kv["max_bits"] = std::to_string(*f.max_bits);
  if (f.min_errors) kv["min_errors"] = std::to_string(*f.min_errors);
  if (f.min_bits) kv["min_bits"] = std::to_string(*f.min_bits);
  if (f.batch_trials) kv["batch_trials"] = std::to_string(*f.batch_trials);
  if (f.workers) kv["workers"] = std::to_string(*f.workers);
  if (f.out) kv["out"] = *f.out;
  if (f.format) kv["format"] = *f.format;
  if (f.smax) kv["smax"] = std::to_string(*f.smax);
  if (f.gd_iters) kv["gd_trace_iters"] = std::to_string(*f.gd_iters);
  if (f.instances) kv["gd_trace_instances"] = std::to_string(*f.instances);
  if (f.llr_trials) kv["llr_trials"] = std::to_string(*f.llr_trials);
  if (f.trace_out) kv["trace_out"] = *f.trace_out;
  if (f.dump_channels) kv["channel_dump"] = *f.dump_channels;
  apply_kv(cfg, kv, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));

  for (DetectorSpec& d : cfg.detectors) {
    if (f.nmse) d.nmse = *f.nmse;
    if (d.algo != Algorithm::nag_mcmc) continue;
    if (f.samplers) d.params.num_samplers = *f.samplers;
    if (f.iters) d.params.num_iterations = *f.iters;
    if (f.ng) d.params.gd_per_walk = *f.ng;
    if (f.sa) d.params.sample_augmentation = *f.sa;
    if (f.es) d.params.early_stopping = *f.es;
    if (f.eta) d.params.es_eta = *f.eta;
    if (f.beta) d.params.beta = *f.beta;
    if (f.rho) d.params.momentum = *f.rho;
  }
  validate_config(cfg, subcommand);
  return cfg;
}

int cmd_ber_sweep(const CommonFlags& flags) {
  const SimConfig cfg = build_config(flags, "ber-sweep");
  const SimReport report = run_ber_sweep(cfg);
  for (const auto& r : report.rows)
    std::printf("snr=%g  %-44s ber=%.4g  ser=%.4g  bits=%llu  errors=%llu  mean_sa=%.3f\n",
                r.snr_db, r.detector.c_str(), r.ber, r.ser,
                static_cast<unsigned long long>(r.bits),
                static_cast<unsigned long long>(r.errors), r.mean_sa);
  for (const auto& p : emit_report(report, cfg.format, cfg.out_dir))
    std::printf("wrote %s\n", p.c_str());
  return kExitOk;
}

int cmd_convergence(const CommonFlags& flags) {
  const SimConfig cfg = build_config(flags, "convergence");
  const ConvergenceReport rep = convergence_trace(cfg, cfg.convergence_smax);
  const std::string path =
      (std::filesystem::path(cfg.out_dir) / "convergence.csv").string();
  write_text_file(path, convergence_csv(rep));
  std::printf("trials=%llu\nwrote %s\n",
              static_cast<unsigned long long>(rep.trials), path.c_str());
  return kExitOk;
}

int cmd_complexity(const CommonFlags& flags, const std::string& n_list, bool audit,
                   double sa_iters, int ep_iters) {
  const SimConfig cfg = build_config(flags, "complexity");
  std::vector<std::size_t> grid;
  if (n_list.empty()) {
    grid = {2, 4, 8, 16, 32, 48, 64, 96, 128, 192, 256};
  } else {
    SimConfig tmp;
    std::vector<std::string> errors;
    KvMap kv{{"snr", n_list}};  // reuse the comma-list parser
    apply_kv(tmp, kv, errors);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    for (double v : tmp.snr_grid_db) grid.push_back(static_cast<std::size_t>(v));
  }

  const DetectorSpec* nag = nullptr;
  for (const auto& d : cfg.detectors)
    if (d.algo == Algorithm::nag_mcmc) {
      nag = &d;
      break;
    }
  const int p = nag ? nag->params.num_samplers : 16;
  const int s = nag ? nag->params.num_iterations : 8;
  const int ng = nag ? nag->params.gd_per_walk : 8;

  std::string csv = "n,algorithm,mults,flag\n";
  for (std::size_t n : grid) {
    for (ComplexityModel m :
         {ComplexityModel::mmse, ComplexityModel::ep, ComplexityModel::mhgd,
          ComplexityModel::nag_mcmc, ComplexityModel::nag_mcmc_sa_es}) {
      const double iters = m == ComplexityModel::nag_mcmc_sa_es ? sa_iters : s;
      const std::int64_t mults =
          closed_form_mults(m, n, cfg.mod_order, p, iters, ng, ep_iters);
      const bool analytic_only =
          m == ComplexityModel::ep || m == ComplexityModel::mhgd;
      csv += std::to_string(n) + "," + to_string(m) + "," + std::to_string(mults) +
             "," + (analytic_only ? "analytic-only" : "implemented") + "\n";
    }
  }
  const std::string path =
      (std::filesystem::path(cfg.out_dir) / "complexity.csv").string();
  write_text_file(path, csv);
  std::printf("wrote %s\n", path.c_str());

  if (audit) {
    const AuditReport rep = runtime_counter_audit(cfg);
    const std::string text = audit_text(rep);
    std::printf("%s", text.c_str());
    const std::string apath =
        (std::filesystem::path(cfg.out_dir) / "audit.csv").string();
    write_text_file(apath, text);
    std::printf("wrote %s\n", apath.c_str());
  }
  return kExitOk;
}

int cmd_trace_gd(const CommonFlags& flags) {
  const SimConfig cfg = build_config(flags, "trace-gd");
  const auto rows = gd_trace_experiment(cfg);
  const std::string path =
      (std::filesystem::path(cfg.out_dir) / "gd_trace.csv").string();
  write_text_file(path, gd_trace_csv(rows));
  std::printf("wrote %s\n", path.c_str());
  return kExitOk;
}

int cmd_llr_dump(const CommonFlags& flags, const std::string& labels_out) {
  const SimConfig cfg = build_config(flags, "llr-dump");
  const auto rows = llr_dump(cfg);
  const std::string path = (std::filesystem::path(cfg.out_dir) / "llr.csv").string();
  write_text_file(path, llr_csv(rows));
  std::printf("wrote %s\n", path.c_str());
  if (!labels_out.empty()) {
    const Constellation c = build_constellation(cfg.mod_order);
    write_text_file(labels_out, label_table_csv(c));
    std::printf("wrote %s\n", labels_out.c_str());
  }
  return kExitOk;
}

int cmd_selftest() {
  int failures = 0;
  const auto check = [&failures](const char* name, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };

  // Quantizer equals exhaustive nearest-point search.
  {
    const Constellation c = build_constellation(16);
    Rng rng(7);
    bool ok = true;
    for (int i = 0; i < 20000 && ok; ++i) {
      const cplx z = {3.0 * (rng.uniform() - 0.5), 3.0 * (rng.uniform() - 0.5)};
      const std::uint8_t q = quantize_symbol(z, c);
      double best = 1e300;
      std::uint8_t best_idx = 0;
      for (int k = 0; k < c.order; ++k) {
        const double d = std::norm(z - c.points[k]);
        if (d < best) {
          best = d;
          best_idx = static_cast<std::uint8_t>(k);
        }
      }
      ok = q == best_idx;
    }
    check("qam quantizer vs exhaustive nearest point", ok);
  }

  // MH acceptance rate at alpha = 1/e.
  {
    Rng rng(11);
    int accepted = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i)
      accepted += accept_test(2.0, 1.0, rng).accepted ? 1 : 0;
    const double rate = static_cast<double>(accepted) / trials;
    check("MH acceptance rate at alpha=1/e", std::abs(rate - 0.36788) < 0.01);
  }

  // Cholesky reconstruction on a random HPD matrix.
  {
    Rng rng(13);
    const std::size_t n = 6;
    ComplexMatrix b(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < n; ++col) b(r, col) = rng.normal_complex(1.0);
    ComplexMatrix a = gram(b);
    for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.1;
    const ComplexMatrix l = cholesky_lower(a);
    double err = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < n; ++col) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += l(r, k) * std::conj(l(col, k));
        err += std::norm(acc - a(r, col));
      }
    check("cholesky reconstruction", std::sqrt(err) / frobenius_norm(a) < 1e-10);
  }

  // Sampler finds the ML point on a small system.
  {
    const Constellation c = build_constellation(4);
    SamplerParams params;
    params.num_samplers = 4;
    params.num_iterations = 16;
    params.sample_augmentation = true;
    int match = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
      Rng ch(stream_seed(3, 0, t, stream_role::channel));
      Rng noise(stream_seed(3, 0, t, stream_role::noise));
      const ChannelInstance inst = make_channel_instance(2, 2, c, 12.0, ch, noise);
      const SamplerContext ctx = precompute(inst.h, inst.y, inst.sigma2, c);
      const DetectionResult res = run_detector(ctx, params, stream_seed(3, 0, t, 99));
      const auto ml = detect_ml_exhaustive(inst.h, inst.y, c);
      match += same_symbols(res.symbols_hat, ml) ? 1 : 0;
    }
    check("2x2 sampler matches exhaustive ML on >= 99% of trials",
          match >= trials * 99 / 100);
  }

  // Closed-form spot values.
  check("closed form: MMSE at N=8",
        closed_form_mults(ComplexityModel::mmse, 8, 16, 0, 0, 0) == 1680);
  check("closed form: NAG-MCMC at N=8",
        closed_form_mults(ComplexityModel::nag_mcmc, 8, 16, 16, 8, 8) == 113765);

  std::printf(failures == 0 ? "selftest: all checks passed\n"
                            : "selftest: %d check(s) failed\n",
              failures);
  return failures == 0 ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NAG-MCMC MIMO detection simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion) + " (" + kBuildId + ")");

  CommonFlags flags;
  std::string n_list, labels_out;
  bool audit = false;
  double sa_iters = 5.0;
  int ep_iters = 10;

  CLI::App* ber = app.add_subcommand("ber-sweep", "Monte-Carlo BER/SER sweep");
  add_common_flags(ber, flags);
  ber->add_option("--trace-out", flags.trace_out,
                  "per-detection sampler trace CSV (trial 0)");
  ber->add_option("--dump-channels", flags.dump_channels,
                  "channel dump CSV (first trials)");

  CLI::App* conv =
      app.add_subcommand("convergence", "BER vs sampling-iteration budget");
  add_common_flags(conv, flags);
  conv->add_option("--smax", flags.smax, "maximum recorded iteration");

  CLI::App* comp =
      app.add_subcommand("complexity", "closed-form multiplication counts");
  add_common_flags(comp, flags);
  comp->add_option("--n", n_list, "antenna-count grid, comma separated");
  comp->add_flag("--audit", audit, "run the runtime counter audit");
  comp->add_option("--sa-iters", sa_iters, "average iterations for the SA+ES row");
  comp->add_option("--ep-iters", ep_iters, "EP iteration count T");

  CLI::App* trace = app.add_subcommand("trace-gd", "descent-trace comparison");
  add_common_flags(trace, flags);
  trace->add_option("--gd-iters", flags.gd_iters, "GD iterations per trace");
  trace->add_option("--instances", flags.instances, "number of random instances");

  CLI::App* llr = app.add_subcommand("llr-dump", "max-log LLR dump");
  add_common_flags(llr, flags);
  llr->add_option("--trials", flags.llr_trials, "number of detections to dump");
  llr->add_option("--labels-out", labels_out, "write the constellation label table");

  app.add_subcommand("selftest", "quick built-in checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (ber->parsed()) return cmd_ber_sweep(flags);
    if (conv->parsed()) return cmd_convergence(flags);
    if (comp->parsed()) return cmd_complexity(flags, n_list, audit, sa_iters, ep_iters);
    if (trace->parsed()) return cmd_trace_gd(flags);
    if (llr->parsed()) return cmd_llr_dump(flags, labels_out);
    return cmd_selftest();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
