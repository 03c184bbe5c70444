#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nagmcmc/config.hpp"
#include "nagmcmc/harness.hpp"
#include "nagmcmc/report_io.hpp"

using namespace nagmcmc;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.n_rx = 4;
  cfg.n_tx = 4;
  cfg.mod_order = 16;
  cfg.snr_grid_db = {18.0};
  cfg.detectors.clear();
  DetectorSpec nag;
  nag.params.num_samplers = 4;
  nag.params.num_iterations = 4;
  nag.params.sample_augmentation = true;
  nag.params.early_stopping = true;
  cfg.detectors.push_back(nag);
  DetectorSpec mmse;
  mmse.algo = Algorithm::mmse;
  cfg.detectors.push_back(mmse);
  cfg.min_bit_errors = 0;
  cfg.min_bits = 16000;
  cfg.max_bits = 16000;
  cfg.batch_trials = 250;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("wilson interval: closed values and calibration") {
  auto [lo, hi] = wilson_interval(0, 0);
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);

  // 5 errors in 100: textbook Wilson bounds
  auto [l2, h2] = wilson_interval(5, 100);
  CHECK(l2 == doctest::Approx(0.0215).epsilon(0.02));
  CHECK(h2 == doctest::Approx(0.1118).epsilon(0.02));

  // coverage on synthetic Bernoulli streams with known p
  Rng rng(11);
  const double p = 0.01;
  int covered = 0;
  const int reps = 300, n = 20000;
  for (int r = 0; r < reps; ++r) {
    std::uint64_t errors = 0;
    for (int i = 0; i < n; ++i) errors += rng.uniform() < p;
    auto [wl, wh] = wilson_interval(errors, n);
    covered += (wl <= p && p <= wh);
  }
  CHECK(covered >= reps * 90 / 100);  // nominal 95%
}

TEST_CASE("closed forms: spot values and crossover shape") {
  CHECK(closed_form_mults(ComplexityModel::mmse, 8, 16, 0, 0.0, 0) == 1680);
  CHECK(closed_form_mults(ComplexityModel::nag_mcmc, 8, 16, 16, 8.0, 8) == 113765);
  CHECK_THROWS_AS(complexity_model_from_string("sphere"), UnknownAlgorithm);

  // SA+ES/MMSE ratio at N=256 under the scaling-figure configuration
  const double ratio =
      static_cast<double>(
          closed_form_mults(ComplexityModel::nag_mcmc_sa_es, 256, 16, 16, 5.0, 8)) /
      static_cast<double>(closed_form_mults(ComplexityModel::mmse, 256, 16, 0, 0, 0));
  CHECK(ratio == doctest::Approx(2.24).epsilon(0.01));
}

TEST_CASE("closed_form_for_spec picks the matching row") {
  DetectorSpec nag;
  nag.params.num_iterations = 8;
  CHECK(closed_form_for_spec(nag, 8, 16, 8.0) == doctest::Approx(113765));
  nag.params.sample_augmentation = true;
  nag.params.early_stopping = true;
  CHECK(closed_form_for_spec(nag, 8, 16, 5.0) ==
        doctest::Approx(static_cast<double>(
            closed_form_mults(ComplexityModel::nag_mcmc_sa_es, 8, 16, 16, 5.0, 8))));
  DetectorSpec ml;
  ml.algo = Algorithm::ml_exhaustive;
  CHECK(std::isnan(closed_form_for_spec(ml, 8, 16, 0.0)));
}

TEST_CASE("ber sweep: reproducible across worker counts") {
  SimConfig cfg = small_config();
  cfg.workers = 1;
  const SimReport a = run_ber_sweep(cfg);
  cfg.workers = 2;
  const SimReport b = run_ber_sweep(cfg);
  cfg.workers = 3;
  const SimReport c = run_ber_sweep(cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].errors == b.rows[i].errors);
    CHECK(a.rows[i].bits == b.rows[i].bits);
    CHECK(a.rows[i].ber == b.rows[i].ber);
    CHECK(a.rows[i].mean_sa == b.rows[i].mean_sa);
    CHECK(a.rows[i].mults_runtime == b.rows[i].mults_runtime);
    CHECK(a.rows[i].errors == c.rows[i].errors);
  }
  // and byte-identical serialized reports
  CHECK(report_csv(a) == report_csv(b));
}

TEST_CASE("ber sweep: noiseless exact-recovery detectors give zero errors") {
  SimConfig cfg = small_config();
  cfg.snr_grid_db = {290.0};
  cfg.min_bits = 4000;
  cfg.max_bits = 4000;
  cfg.detectors.clear();
  DetectorSpec zf;
  zf.algo = Algorithm::zf;
  DetectorSpec mmse;
  mmse.algo = Algorithm::mmse;
  cfg.detectors = {zf, mmse};
  const SimReport rep = run_ber_sweep(cfg);
  for (const auto& row : rep.rows) CHECK(row.errors == 0);
}

TEST_CASE("ber sweep: S_a equals S when ES is off, below S when on") {
  SimConfig cfg = small_config();
  cfg.snr_grid_db = {25.0};
  cfg.detectors[0].params.early_stopping = false;
  const SimReport rep = run_ber_sweep(cfg);
  CHECK(rep.rows[0].mean_sa == doctest::Approx(4.0));

  cfg.detectors[0].params.early_stopping = true;
  const SimReport rep2 = run_ber_sweep(cfg);
  CHECK(rep2.rows[0].mean_sa <= 4.0);
}

TEST_CASE("runtime counter audit: MMSE exact, NAG-MCMC phases within 5%") {
  SimConfig cfg = small_config();
  cfg.n_rx = cfg.n_tx = 8;
  cfg.detectors.resize(1);
  cfg.detectors[0].algo = Algorithm::mmse;
  const AuditReport mmse = runtime_counter_audit(cfg);
  CHECK(mmse.runtime_total == doctest::Approx(mmse.closed_form_total));
  CHECK(mmse.closed_form_total ==
        doctest::Approx(closed_form_mults(ComplexityModel::mmse, 8, 16, 0, 0, 0)));

  DetectorSpec nag;  // ES off: executed iterations equal the preset
  nag.params.num_iterations = 8;
  for (bool sa : {false, true}) {
    nag.params.sample_augmentation = sa;
    cfg.detectors[0] = nag;
    const AuditReport rep = runtime_counter_audit(cfg);
    for (const auto& row : rep.rows) {
      if (row.closed_form == 0.0) {
        CHECK(row.runtime == 0.0);
      } else {
        CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.05));
      }
    }
    const auto model =
        sa ? ComplexityModel::nag_mcmc_sa_es : ComplexityModel::nag_mcmc;
    CHECK(rep.runtime_total ==
          doctest::Approx(static_cast<double>(
                              closed_form_mults(model, 8, 16, 16, 8.0, 8)))
              .epsilon(0.05));
  }
}

TEST_CASE("convergence trace: pooled decision improves with the budget") {
  SimConfig cfg = small_config();
  cfg.snr_grid_db = {16.0};
  cfg.detectors.resize(1);
  cfg.detectors[0].params.early_stopping = false;
  cfg.max_bits = 40000;
  const ConvergenceReport rep = convergence_trace(cfg, 8);
  REQUIRE(rep.rows.size() == 8);
  // allow small statistical upticks, require overall improvement
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].errors <=
          rep.rows[i - 1].errors + std::max<std::uint64_t>(4, rep.rows[i - 1].errors / 10));
  CHECK(rep.rows.back().errors <= rep.rows.front().errors);
}

TEST_CASE("gd trace experiment emits both methods per instance") {
  SimConfig cfg = small_config();
  cfg.n_rx = cfg.n_tx = 8;
  cfg.gd_trace_instances = 5;
  cfg.gd_trace_iters = 10;
  const auto rows = gd_trace_experiment(cfg);
  CHECK(rows.size() == 5 * 2 * 11);
  CHECK(rows.front().method == std::string("naive-linesearch"));
  CHECK(rows.front().t == 0);
}

TEST_CASE("llr dump produces finite values for every bit") {
  SimConfig cfg = small_config();
  cfg.llr_trials = 3;
  const auto rows = llr_dump(cfg);
  CHECK(rows.size() == 3 * 16);
  for (const auto& r : rows) CHECK(std::isfinite(r.llr));
}

TEST_CASE("trace and channel dump files are written") {
  SimConfig cfg = small_config();
  const auto dir = std::filesystem::temp_directory_path() / "nagmcmc_harness_test";
  std::filesystem::remove_all(dir);
  cfg.trace_path = (dir / "trace.csv").string();
  cfg.channel_dump_path = (dir / "channels.csv").string();
  cfg.min_bits = 2000;
  cfg.max_bits = 2000;
  run_ber_sweep(cfg);

  std::ifstream trace(cfg.trace_path);
  REQUIRE(trace.good());
  std::string header;
  std::getline(trace, header);
  CHECK(header == "snr_db,detector,iteration,sampler,r_sqnorm,accepted,gamma");
  std::string row;
  CHECK(std::getline(trace, row));

  std::ifstream chans(cfg.channel_dump_path);
  REQUIRE(chans.good());
  std::getline(chans, header);
  CHECK(header == "snr_db,trial,field,row,col,re,im");
  std::filesystem::remove_all(dir);
}

TEST_CASE("2x2 4-QAM: sampler BER tracks exhaustive ML within 5%") {
  SimConfig cfg;
  cfg.n_rx = cfg.n_tx = 2;
  cfg.mod_order = 4;
  cfg.snr_grid_db = {10.0};
  cfg.seed = 23;
  cfg.detectors.clear();
  DetectorSpec nag;
  nag.params.num_samplers = 4;
  nag.params.num_iterations = 16;
  nag.params.sample_augmentation = true;
  DetectorSpec ml;
  ml.algo = Algorithm::ml_exhaustive;
  cfg.detectors = {nag, ml};
  cfg.min_bit_errors = 0;
  cfg.min_bits = 1'000'000;
  cfg.max_bits = 1'000'000;
  const SimReport rep = run_ber_sweep(cfg);
  const double nag_ber = rep.rows[0].ber;
  const double ml_ber = rep.rows[1].ber;
  CHECK(nag_ber <= ml_ber * 1.05);
  CHECK(nag_ber >= ml_ber * 0.99);  // can tie but not beat the exact argmin much
}

TEST_CASE("ml detector arm agrees with direct invocation") {
  SimConfig cfg = small_config();
  cfg.n_rx = cfg.n_tx = 2;
  cfg.mod_order = 4;
  cfg.snr_grid_db = {12.0};
  cfg.detectors.resize(1);
  cfg.detectors[0].algo = Algorithm::ml_exhaustive;
  cfg.min_bits = 2000;
  cfg.max_bits = 2000;
  const SimReport rep = run_ber_sweep(cfg);
  CHECK(rep.rows[0].bits == 2000);
  CHECK(rep.rows[0].detector == "ml");
  CHECK(std::isnan(rep.rows[0].mults_closed_form));
}
