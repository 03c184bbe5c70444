#include "nagmcmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <thread>

#include "nagmcmc/config.hpp"
#include "nagmcmc/report_io.hpp"
#include "nagmcmc/version.hpp"

namespace nagmcmc {

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "nag-mcmc" || name == "nag") return Algorithm::nag_mcmc;
  if (name == "mmse") return Algorithm::mmse;
  if (name == "zf") return Algorithm::zf;
  if (name == "ml") return Algorithm::ml_exhaustive;
  throw UnknownAlgorithm("unknown detector algorithm: " + name);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::nag_mcmc: return "nag-mcmc";
    case Algorithm::mmse: return "mmse";
    case Algorithm::zf: return "zf";
    case Algorithm::ml_exhaustive: return "ml";
  }
  return "?";
}

std::string DetectorSpec::effective_label() const {
  if (!label.empty()) return label;
  std::string s = to_string(algo);
  if (algo == Algorithm::nag_mcmc) {
    if (params.sample_augmentation) s += "+sa";
    if (params.early_stopping) s += "+es";
    s += "[P=" + std::to_string(params.num_samplers) +
         ",S=" + std::to_string(params.num_iterations) +
         ",Ng=" + std::to_string(params.gd_per_walk);
    if (params.init == InitMode::mmse) s += ",init=mmse";
    if (!params.carry_momentum) s += ",reset-momentum";
    if (params.acceptance_temperature) s += ",temper";
    s += "]";
  }
  if (nmse > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "@nmse=%g", nmse);
    s += buf;
  }
  return s;
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials,
                                          double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double closed_form_for_spec(const DetectorSpec& spec, std::size_t n, int mod_order,
                            double mean_sa) {
  switch (spec.algo) {
    case Algorithm::mmse:
      return static_cast<double>(
          closed_form_mults(ComplexityModel::mmse, n, mod_order, 0, 0, 0));
    case Algorithm::nag_mcmc: {
      const auto model = spec.params.sample_augmentation
                             ? ComplexityModel::nag_mcmc_sa_es
                             : ComplexityModel::nag_mcmc;
      const double iters =
          spec.params.early_stopping ? mean_sa : spec.params.num_iterations;
      return static_cast<double>(closed_form_mults(model, n, mod_order,
                                                   spec.params.num_samplers, iters,
                                                   spec.params.gd_per_walk));
    }
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

int resolve_workers(const SimConfig& cfg) {
  int w = cfg.workers;
  if (w <= 0) {
    if (const char* env = std::getenv("NAGMCMC_WORKERS")) w = std::atoi(env);
  }
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, w);
}

namespace {

struct ArmAccum {
  std::uint64_t trials = 0, bits = 0, bit_errors = 0;
  std::uint64_t symbols = 0, symbol_errors = 0, sa_sum = 0;
  std::array<std::uint64_t, kNumPhases> op_thirds{};

  void merge(const ArmAccum& o) {
    trials += o.trials;
    bits += o.bits;
    bit_errors += o.bit_errors;
    symbols += o.symbols;
    symbol_errors += o.symbol_errors;
    sa_sum += o.sa_sum;
    for (int i = 0; i < kNumPhases; ++i) op_thirds[i] += o.op_thirds[i];
  }
  void add_ops(const OpCounter& ops) {
    for (int i = 0; i < kNumPhases; ++i)
      op_thirds[i] += ops.phase_thirds(static_cast<Phase>(i));
  }
};

std::uint64_t count_mismatches(std::span<const std::uint8_t> a,
                               std::span<const std::uint8_t> b) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

struct DumpSinks {
  // Slot-per-trial storage so concurrent workers never share a row.
  std::vector<std::string> channel_rows;   // first trials per SNR point
  std::vector<std::string> trace_rows;     // trial 0 only
  std::size_t channel_slots = 0;
};

// Channel draw plus per-nmse contexts; resamples degenerate channels from
// the same stream so results stay worker-independent.
struct TrialSetup {
  ChannelInstance inst;
  std::vector<std::uint8_t> truth_symbols;
  // parallel to the unique nmse list
  std::vector<double> nmse_values;
  std::vector<ComplexMatrix> h_est;
  std::vector<SamplerContext> contexts;
  std::uint64_t resamples = 0;

  std::size_t nmse_slot(double nmse) const {
    for (std::size_t i = 0; i < nmse_values.size(); ++i)
      if (nmse_values[i] == nmse) return i;
    return 0;
  }
};

TrialSetup prepare_trial(const SimConfig& cfg, const Constellation& c,
                         std::size_t snr_idx, double snr_db, std::uint64_t trial,
                         const std::vector<DetectorSpec>& arms,
                         const std::vector<char>& arm_active, bool need_ctx) {
  TrialSetup setup;
  std::vector<double> unique_nmse;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (!arm_active[a]) continue;
    if (std::find(unique_nmse.begin(), unique_nmse.end(), arms[a].nmse) ==
        unique_nmse.end())
      unique_nmse.push_back(arms[a].nmse);
  }
  if (unique_nmse.empty()) unique_nmse.push_back(0.0);

  Rng channel_rng(stream_seed(cfg.seed, snr_idx, trial, stream_role::channel));
  Rng noise_rng(stream_seed(cfg.seed, snr_idx, trial, stream_role::noise));

  for (int attempt = 0;; ++attempt) {
    if (attempt > 100)
      throw NumericError("prepare_trial: channel resampling cap exceeded");
    setup.inst =
        make_channel_instance(cfg.n_rx, cfg.n_tx, c, snr_db, channel_rng, noise_rng);
    setup.nmse_values.clear();
    setup.h_est.clear();
    setup.contexts.clear();
    try {
      for (double nmse : unique_nmse) {
        ComplexMatrix h = setup.inst.h;
        if (nmse > 0.0) {
          Rng est_rng(stream_seed(cfg.seed, snr_idx, trial, stream_role::est_error));
          h = perturb_channel(setup.inst.h, nmse, est_rng);
        }
        setup.nmse_values.push_back(nmse);
        if (need_ctx)
          setup.contexts.push_back(precompute(h, setup.inst.y, setup.inst.sigma2, c));
        setup.h_est.push_back(std::move(h));
      }
    } catch (const SingularChannel&) {
      ++setup.resamples;
      continue;
    }
    break;
  }
  setup.truth_symbols = bits_to_symbols(setup.inst.bits_true, c);
  return setup;
}

void run_trial(const SimConfig& cfg, const Constellation& c, std::size_t snr_idx,
               double snr_db, std::uint64_t trial,
               const std::vector<DetectorSpec>& arms,
               const std::vector<char>& arm_active, std::vector<ArmAccum>& acc,
               std::uint64_t& resamples, DumpSinks* sinks) {
  bool any_ctx = false;
  for (std::size_t a = 0; a < arms.size(); ++a)
    if (arm_active[a] && arms[a].algo == Algorithm::nag_mcmc) any_ctx = true;

  TrialSetup setup = prepare_trial(cfg, c, snr_idx, snr_db, trial, arms,
                                   arm_active, any_ctx);
  resamples += setup.resamples;
  const ChannelInstance& inst = setup.inst;
  const std::size_t n_bits = inst.bits_true.size();

  std::vector<Rng> chain_rngs;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    if (!arm_active[a]) continue;
    const DetectorSpec& spec = arms[a];
    const std::size_t slot = setup.nmse_slot(spec.nmse);
    ArmAccum& out = acc[a];

    std::vector<std::uint8_t> symbols_hat;
    if (spec.algo == Algorithm::nag_mcmc) {
      const SamplerContext& ctx = setup.contexts[slot];
      chain_rngs.clear();
      for (int p = 0; p < spec.params.num_samplers; ++p)
        chain_rngs.emplace_back(
            stream_seed(cfg.seed, snr_idx, trial, stream_role::chain_base + p));
      SamplerParams params = spec.params;
      const bool want_trace = sinks && !cfg.trace_path.empty() && trial == 0;
      if (want_trace) params.record_trace = true;
      DetectionResult res = run_detector(ctx, params, chain_rngs);
      symbols_hat = std::move(res.symbols_hat);
      out.sa_sum += static_cast<std::uint64_t>(res.iterations_executed);
      out.add_ops(res.ops);
      if (want_trace) {
        for (const TraceRow& r : res.trace) {
          char buf[160];
          std::snprintf(buf, sizeof(buf), "%g,%s,%d,%d,%.9g,%d,%.9g\n", snr_db,
                        spec.effective_label().c_str(), r.iteration, r.sampler,
                        r.r_sqnorm, r.accepted ? 1 : 0, r.gamma);
          sinks->trace_rows.push_back(buf);
        }
      }
    } else {
      OpCounter ops;
      const ComplexMatrix& h = setup.h_est[slot];
      if (spec.algo == Algorithm::mmse) {
        symbols_hat = detect_mmse(h, inst.y, inst.sigma2, c, &ops);
      } else if (spec.algo == Algorithm::zf) {
        symbols_hat = detect_zf(h, inst.y, c, &ops);
      } else {
        symbols_hat = detect_ml_exhaustive(h, inst.y, c);
      }
      out.add_ops(ops);
    }

    std::vector<std::uint8_t> bits_hat(n_bits);
    symbols_to_bits(symbols_hat, c, bits_hat);
    out.trials += 1;
    out.bits += n_bits;
    out.bit_errors += count_mismatches(bits_hat, inst.bits_true);
    out.symbols += cfg.n_tx;
    out.symbol_errors += count_mismatches(symbols_hat, setup.truth_symbols);
  }

  if (sinks && !cfg.channel_dump_path.empty() && trial < sinks->channel_slots) {
    std::string row;
    char buf[96];
    for (std::size_t r = 0; r < cfg.n_rx; ++r)
      for (std::size_t col = 0; col < cfg.n_tx; ++col) {
        std::snprintf(buf, sizeof(buf), "%g,%llu,H,%zu,%zu,%.17g,%.17g\n", snr_db,
                      static_cast<unsigned long long>(trial), r, col,
                      inst.h(r, col).real(), inst.h(r, col).imag());
        row += buf;
      }
    for (std::size_t r = 0; r < cfg.n_rx; ++r) {
      std::snprintf(buf, sizeof(buf), "%g,%llu,y,%zu,0,%.17g,%.17g\n", snr_db,
                    static_cast<unsigned long long>(trial), r, inst.y[r].real(),
                    inst.y[r].imag());
      row += buf;
    }
    for (std::size_t col = 0; col < cfg.n_tx; ++col) {
      std::snprintf(buf, sizeof(buf), "%g,%llu,x,%zu,0,%.17g,%.17g\n", snr_db,
                    static_cast<unsigned long long>(trial), col,
                    inst.x_true[col].real(), inst.x_true[col].imag());
      row += buf;
    }
    sinks->channel_rows[trial] = std::move(row);
  }
}

// Runs trials [t0, t1) across workers; worker w owns trials t0+w, t0+w+W, ...
// All accumulators are integers, so the merged result is independent of the
// worker count and scheduling.
void run_batch(const SimConfig& cfg, const Constellation& c, std::size_t snr_idx,
               double snr_db, std::uint64_t t0, std::uint64_t t1,
               const std::vector<DetectorSpec>& arms,
               const std::vector<char>& arm_active, int workers,
               std::vector<ArmAccum>& totals, std::uint64_t& resamples,
               DumpSinks* sinks) {
  const int w_count = std::max(
      1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(
                                    t1 - t0, std::uint64_t(1) << 20))));
  std::vector<std::vector<ArmAccum>> partial(
      w_count, std::vector<ArmAccum>(arms.size()));
  std::vector<std::uint64_t> partial_resamples(w_count, 0);
  std::vector<std::thread> threads;
  threads.reserve(w_count);
  for (int w = 0; w < w_count; ++w) {
    threads.emplace_back([&, w] {
      for (std::uint64_t t = t0 + w; t < t1; t += w_count)
        run_trial(cfg, c, snr_idx, snr_db, t, arms, arm_active, partial[w],
                  partial_resamples[w], sinks);
    });
  }
  for (auto& th : threads) th.join();
  for (int w = 0; w < w_count; ++w) {
    resamples += partial_resamples[w];
    for (std::size_t a = 0; a < arms.size(); ++a) totals[a].merge(partial[w][a]);
  }
}

}  // namespace

SimReport run_ber_sweep(const SimConfig& cfg) {
  validate_config(cfg, "ber-sweep");
  const Constellation c = build_constellation(cfg.mod_order);
  const int workers = resolve_workers(cfg);

  SimReport report;
  report.seed = cfg.seed;
  report.build_id = kBuildId;
  report.config_echo = config_to_kv(cfg);

  DumpSinks sinks;
  const bool want_sinks = !cfg.trace_path.empty() || !cfg.channel_dump_path.empty();
  sinks.channel_slots = 8;

  std::string channel_csv = "snr_db,trial,field,row,col,re,im\n";
  std::string trace_csv = "snr_db,detector,iteration,sampler,r_sqnorm,accepted,gamma\n";

  for (std::size_t snr_idx = 0; snr_idx < cfg.snr_grid_db.size(); ++snr_idx) {
    const double snr_db = cfg.snr_grid_db[snr_idx];
    std::vector<ArmAccum> totals(cfg.detectors.size());
    std::vector<char> active(cfg.detectors.size(), 1);
    sinks.channel_rows.assign(sinks.channel_slots, {});
    sinks.trace_rows.clear();

    std::uint64_t next_trial = 0;
    while (std::any_of(active.begin(), active.end(), [](char a) { return a != 0; })) {
      const std::uint64_t t0 = next_trial;
      const std::uint64_t t1 = t0 + cfg.batch_trials;
      run_batch(cfg, c, snr_idx, snr_db, t0, t1, cfg.detectors, active, workers,
                totals, report.resampled_channels,
                want_sinks && t0 == 0 ? &sinks : nullptr);
      next_trial = t1;
      for (std::size_t a = 0; a < cfg.detectors.size(); ++a) {
        if (!active[a]) continue;
        const ArmAccum& t = totals[a];
        if (t.bits >= cfg.max_bits ||
            (t.bits >= cfg.min_bits && t.bit_errors >= cfg.min_bit_errors))
          active[a] = 0;
      }
    }

    for (std::size_t a = 0; a < cfg.detectors.size(); ++a) {
      const ArmAccum& t = totals[a];
      ReportRow row;
      row.snr_db = snr_db;
      row.detector = cfg.detectors[a].effective_label();
      row.bits = t.bits;
      row.errors = t.bit_errors;
      row.symbols = t.symbols;
      row.symbol_errors = t.symbol_errors;
      row.trials = t.trials;
      row.ber = t.bits ? static_cast<double>(t.bit_errors) / t.bits : 0.0;
      row.ser = t.symbols ? static_cast<double>(t.symbol_errors) / t.symbols : 0.0;
      row.mean_sa =
          t.trials ? static_cast<double>(t.sa_sum) / t.trials : 0.0;
      std::uint64_t thirds = 0;
      for (auto v : t.op_thirds) thirds += v;
      row.mults_runtime =
          t.trials ? static_cast<double>(thirds) / 3.0 / t.trials : 0.0;
      row.mults_closed_form =
          closed_form_for_spec(cfg.detectors[a], cfg.n_tx, cfg.mod_order, row.mean_sa);
      auto [lo, hi] = wilson_interval(t.bit_errors, t.bits);
      row.wilson_lo = lo;
      row.wilson_hi = hi;
      report.rows.push_back(std::move(row));
    }

    for (const auto& r : sinks.channel_rows) channel_csv += r;
    for (const auto& r : sinks.trace_rows) trace_csv += r;
  }

  if (!cfg.channel_dump_path.empty()) write_text_file(cfg.channel_dump_path, channel_csv);
  if (!cfg.trace_path.empty()) write_text_file(cfg.trace_path, trace_csv);
  return report;
}

ConvergenceReport convergence_trace(const SimConfig& cfg, int s_max) {
  validate_config(cfg, "convergence");
  if (s_max < 1) throw ConfigError("convergence: smax must be >= 1");
  const Constellation c = build_constellation(cfg.mod_order);
  const int workers = resolve_workers(cfg);
  const std::size_t n_bits_per_trial = cfg.n_tx * c.bits_per_symbol;
  const std::uint64_t trials =
      std::max<std::uint64_t>(1, cfg.max_bits / n_bits_per_trial);
  const double snr_db = cfg.snr_grid_db.front();

  struct ArmErrors {
    std::vector<std::uint64_t> errors_at_s;  // index 1..s_max
  };
  std::vector<ArmErrors> arm_totals(cfg.detectors.size());
  for (auto& a : arm_totals) a.errors_at_s.assign(s_max + 1, 0);

  const int w_count = std::max(1, std::min<int>(workers, static_cast<int>(
                                                    std::min<std::uint64_t>(trials, 64))));
  std::vector<std::vector<ArmErrors>> partial(w_count, arm_totals);
  std::vector<std::thread> threads;

  for (int w = 0; w < w_count; ++w) {
    threads.emplace_back([&, w] {
      for (std::uint64_t t = w; t < trials; t += w_count) {
        std::vector<char> all_active(cfg.detectors.size(), 1);
        TrialSetup setup =
            prepare_trial(cfg, c, 0, snr_db, t, cfg.detectors, all_active, true);
        for (std::size_t a = 0; a < cfg.detectors.size(); ++a) {
          const DetectorSpec& spec = cfg.detectors[a];
          const SamplerContext& ctx = setup.contexts[setup.nmse_slot(spec.nmse)];
          SamplerParams params = spec.params;
          params.num_iterations = s_max;
          params.early_stopping = false;

          // Per-chain prefix minima at each iteration boundary.
          const int per_iter = params.sample_augmentation ? params.gd_per_walk : 1;
          const std::size_t p_count = static_cast<std::size_t>(params.num_samplers);
          std::vector<ChainState> states;
          states.reserve(p_count);
          for (std::size_t p = 0; p < p_count; ++p) {
            Rng rng(stream_seed(cfg.seed, 0, t, stream_role::chain_base + p));
            states.push_back(run_chain(ctx, params, rng));
          }
          // best (sqnorm, chain, sample) for samples up to iteration s
          std::uint64_t last_err = 0;
          std::size_t last_chain = p_count, last_idx = 0;
          for (int s = 1; s <= s_max; ++s) {
            double best_sq = std::numeric_limits<double>::infinity();
            std::size_t best_chain = 0, best_idx = 0;
            const std::size_t upto = 1 + static_cast<std::size_t>(s) * per_iter;
            for (std::size_t p = 0; p < p_count; ++p) {
              const SampleList& list = states[p].samples;
              for (std::size_t i = 0; i < std::min(upto, list.size()); ++i) {
                if (list.sqnorm(i) < best_sq) {
                  best_sq = list.sqnorm(i);
                  best_chain = p;
                  best_idx = i;
                }
              }
            }
            if (best_chain != last_chain || best_idx != last_idx) {
              const auto sym = states[best_chain].samples.symbols(best_idx);
              std::vector<std::uint8_t> bits(n_bits_per_trial);
              symbols_to_bits(sym, c, bits);
              last_err = count_mismatches(bits, setup.inst.bits_true);
              last_chain = best_chain;
              last_idx = best_idx;
            }
            partial[w][a].errors_at_s[s] += last_err;
          }
        }
      }
    });
  }
  for (auto& th : threads) th.join();

  ConvergenceReport rep;
  rep.trials = trials;
  for (std::size_t a = 0; a < cfg.detectors.size(); ++a) {
    for (int s = 1; s <= s_max; ++s) {
      std::uint64_t errs = 0;
      for (int w = 0; w < w_count; ++w) errs += partial[w][a].errors_at_s[s];
      ConvergenceRow row;
      row.iteration = s;
      row.detector = cfg.detectors[a].effective_label();
      row.bits = trials * n_bits_per_trial;
      row.errors = errs;
      row.ber = static_cast<double>(errs) / static_cast<double>(row.bits);
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

AuditReport runtime_counter_audit(const SimConfig& cfg) {
  validate_config(cfg, "complexity");
  const Constellation c = build_constellation(cfg.mod_order);
  const DetectorSpec& spec = cfg.detectors.front();
  if (spec.algo != Algorithm::nag_mcmc && spec.algo != Algorithm::mmse)
    throw UnknownAlgorithm("runtime audit covers nag-mcmc and mmse only");
  const double snr_db = cfg.snr_grid_db.front();
  std::vector<char> active(cfg.detectors.size(), 1);
  TrialSetup setup = prepare_trial(cfg, c, 0, snr_db, 0, cfg.detectors, active,
                                   spec.algo == Algorithm::nag_mcmc);

  const double n = static_cast<double>(cfg.n_tx);
  const double mm = cfg.mod_order;
  OpCounter ops;
  std::array<double, kNumPhases> closed{};
  int executed = 0;

  if (spec.algo == Algorithm::nag_mcmc) {
    const SamplerContext& ctx = setup.contexts[0];
    std::vector<Rng> rngs;
    for (int p = 0; p < spec.params.num_samplers; ++p)
      rngs.emplace_back(stream_seed(cfg.seed, 0, 0, stream_role::chain_base + p));
    DetectionResult res = run_detector(ctx, spec.params, rngs);
    ops = res.ops;
    executed = res.iterations_executed;
    const double p = spec.params.num_samplers;
    const double s_exec = executed;
    const double ng = spec.params.gd_per_walk;
    const double admissions_per_iter = spec.params.sample_augmentation ? ng : 1.0;
    closed[static_cast<int>(Phase::preprocessing)] =
        11.0 / 3.0 * n * n * n + (mm + 2) * n * n + 2 * n;
    closed[static_cast<int>(Phase::gd)] = ng * (n * n + 2 * n) * p * s_exec;
    closed[static_cast<int>(Phase::walk)] = (n * n + n) * p * s_exec;
    closed[static_cast<int>(Phase::residual)] =
        (mm + 1) * n * (p * s_exec * admissions_per_iter + p);
    closed[static_cast<int>(Phase::decision)] = 0.0;
  } else {
    OpCounter mmse_ops;
    detect_mmse(setup.h_est[0], setup.inst.y, setup.inst.sigma2, c, &mmse_ops);
    ops = mmse_ops;
    closed[static_cast<int>(Phase::preprocessing)] = 3 * n * n * n + n * n + 2 * n;
    closed[static_cast<int>(Phase::decision)] = n * n;
  }

  AuditReport rep;
  rep.iterations_executed = executed;
  for (int i = 0; i < kNumPhases; ++i) {
    PhaseAuditRow row;
    row.phase = phase_name(static_cast<Phase>(i));
    row.runtime = ops.phase(static_cast<Phase>(i));
    row.closed_form = closed[i];
    row.ratio = closed[i] > 0.0 ? row.runtime / closed[i]
                                : (row.runtime == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    rep.runtime_total += row.runtime;
    rep.closed_form_total += closed[i];
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<GdTraceRow> gd_trace_experiment(const SimConfig& cfg) {
  validate_config(cfg, "trace-gd");
  const Constellation c = build_constellation(cfg.mod_order);
  const double snr_db = cfg.snr_grid_db.front();
  std::vector<GdTraceRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.gd_trace_instances) *
               (cfg.gd_trace_iters + 1) * 2);
  for (int inst_idx = 0; inst_idx < cfg.gd_trace_instances; ++inst_idx) {
    Rng ch(stream_seed(cfg.seed, 0, inst_idx, stream_role::channel));
    Rng noise(stream_seed(cfg.seed, 0, inst_idx, stream_role::noise));
    Rng start(stream_seed(cfg.seed, 0, inst_idx, stream_role::gd_trace));
    const ChannelInstance inst =
        make_channel_instance(cfg.n_rx, cfg.n_tx, c, snr_db, ch, noise);
    ComplexVector z0(cfg.n_tx);
    for (auto& v : z0)
      v = c.points[start.below(static_cast<std::uint64_t>(c.order))];
    for (auto method : {DescentMethod::naive_linesearch, DescentMethod::nesterov}) {
      const DescentTrace trace =
          descent_trace(inst.h, inst.y, z0, method, cfg.gd_trace_iters);
      const char* name =
          method == DescentMethod::naive_linesearch ? "naive-linesearch" : "nesterov";
      for (std::size_t t = 0; t < trace.residual_norms.size(); ++t)
        rows.push_back({inst_idx, static_cast<int>(t), name, trace.residual_norms[t]});
    }
  }
  return rows;
}

std::vector<LlrDumpRow> llr_dump(const SimConfig& cfg) {
  validate_config(cfg, "llr-dump");
  const Constellation c = build_constellation(cfg.mod_order);
  const DetectorSpec* sampler_spec = nullptr;
  for (const auto& d : cfg.detectors)
    if (d.algo == Algorithm::nag_mcmc) {
      sampler_spec = &d;
      break;
    }
  if (!sampler_spec)
    throw ConfigError("llr-dump: requires a nag-mcmc detector");
  const double snr_db = cfg.snr_grid_db.front();
  std::vector<LlrDumpRow> rows;
  std::vector<char> active(cfg.detectors.size(), 1);
  for (int t = 0; t < cfg.llr_trials; ++t) {
    TrialSetup setup =
        prepare_trial(cfg, c, 0, snr_db, t, cfg.detectors, active, true);
    const SamplerContext& ctx = setup.contexts[setup.nmse_slot(sampler_spec->nmse)];
    std::vector<Rng> rngs;
    for (int p = 0; p < sampler_spec->params.num_samplers; ++p)
      rngs.emplace_back(stream_seed(cfg.seed, 0, t, stream_role::chain_base + p));
    DetectionResult res = run_detector(ctx, sampler_spec->params, rngs);
    const LlrResult llrs = compute_llrs(res.samples, ctx.sigma2, {}, c);
    for (std::size_t k = 0; k < llrs.values.size(); ++k)
      rows.push_back({static_cast<std::uint64_t>(t), static_cast<std::uint32_t>(k),
                      llrs.values[k], llrs.saturated[k]});
  }
  return rows;
}

}  // namespace nagmcmc
