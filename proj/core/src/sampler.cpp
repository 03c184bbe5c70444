#include "nagmcmc/sampler.hpp"

#include <cmath>

#include "nagmcmc/detectors.hpp"

namespace nagmcmc {

double SamplerParams::beta_for(std::size_t n_tx) const {
  if (beta > 0.0) return beta;
  return std::pow(static_cast<double>(n_tx) / 8.0, -1.0 / 3.0);
}

void SamplerParams::validate() const {
  std::vector<std::string> bad;
  if (num_samplers < 1) bad.push_back("samplers: P must be >= 1");
  if (num_iterations < 1) bad.push_back("iters: S must be >= 1");
  if (gd_per_walk < 1) bad.push_back("ng: must be >= 1");
  if (!(momentum >= 0.0 && momentum <= 1.0))
    bad.push_back("rho: momentum must be in [0, 1]");
  if (!(es_eta > 0.0)) bad.push_back("eta: must be > 0");
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

namespace {

SamplerContext precompute_impl(const ComplexMatrix& h, const ComplexVector& y,
                               double sigma2, const Constellation& c,
                               bool identity_fallback, bool* degenerate) {
  if (h.empty()) throw DimensionError("precompute: empty channel matrix");
  if (y.size() != h.rows()) throw DimensionError("precompute: y length mismatch");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("precompute: sigma2 must be >= 0");

  SamplerContext ctx;
  ctx.h = h;
  ctx.y = y;
  ctx.n_rx = h.rows();
  ctx.n_tx = h.cols();
  ctx.sigma2 = sigma2;
  ctx.d_qam = c.d_qam;
  ctx.constellation = &c;

  const std::size_t nr = ctx.n_rx, nt = ctx.n_tx;
  OpCounter& ops = ctx.preprocessing_ops;

  ctx.gram_matrix = gram(h);
  ops.add(Phase::preprocessing, nt * nt * nr);

  ctx.tau = 1.0 / frobenius_norm(ctx.gram_matrix);
  ops.add(Phase::preprocessing, nt * nt);

  ctx.hty = matvec_adjoint(h, y);
  ops.add(Phase::preprocessing, nr * nt);

  if (degenerate) *degenerate = false;
  try {
    const ComplexMatrix ginv = invert_hpd(ctx.gram_matrix);
    ops.add(Phase::preprocessing, 2 * (nt * nt * nt + nt));
    ctx.walk_factor = cholesky_lower(ginv);
    ops.add_thirds(Phase::preprocessing, 2 * nt * nt * nt);
  } catch (const NotPositiveDefinite&) {
    if (!identity_fallback)
      throw SingularChannel("precompute: Gram matrix not positive definite");
    ctx.walk_factor = ComplexMatrix::identity(nt);
    if (degenerate) *degenerate = true;
  }
  // Remove the channel gain from the walk factor: unit-norm rows.
  for (std::size_t r = 0; r < nt; ++r) {
    auto row = ctx.walk_factor.row(r);
    const double norm = std::sqrt(sqnorm(row));
    if (norm > 0.0)
      for (auto& v : row) v /= norm;
  }

  ctx.cache = ColumnCache(h, c);
  ops.add(Phase::preprocessing, static_cast<std::uint64_t>(c.order) * nr * nt);
  return ctx;
}

// One Nesterov sweep: z is z_{t-1} in and z_Ng out, p is scratch, dz is the
// momentum Δz in/out. Gradient evaluated via the Gram form Hᴴy − (HᴴH)p.
inline void burst_impl(const SamplerContext& ctx, int ng, double rho,
                       ComplexVector& z, ComplexVector& p, ComplexVector& dz,
                       cplx* trajectory, OpCounter* ops) {
  const std::size_t n = ctx.n_tx;
  const ComplexMatrix& a = ctx.gram_matrix;
  const double tau = ctx.tau;
  for (int t = 0; t < ng; ++t) {
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + rho * dz[i];
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc = ctx.hty[i];
      const cplx* row = a.row(i).data();
      for (std::size_t j = 0; j < n; ++j) acc -= row[j] * p[j];
      const cplx znew = p[i] + tau * acc;
      dz[i] = znew - z[i];
      z[i] = znew;
    }
    if (trajectory)
      for (std::size_t i = 0; i < n; ++i) trajectory[t * n + i] = z[i];
  }
  if (ops) ops->add(Phase::gd, static_cast<std::uint64_t>(ng) * (n * n + 2 * n));
}

}  // namespace

SamplerContext precompute(const ComplexMatrix& h, const ComplexVector& y,
                          double sigma2, const Constellation& c) {
  return precompute_impl(h, y, sigma2, c, false, nullptr);
}

SamplerContext precompute_or_identity(const ComplexMatrix& h, const ComplexVector& y,
                                      double sigma2, const Constellation& c,
                                      bool* degenerate) {
  return precompute_impl(h, y, sigma2, c, true, degenerate);
}

void nesterov_burst(const SamplerContext& ctx, std::span<const cplx> z_start,
                    int ng, std::span<cplx> trajectory, std::span<cplx> momentum,
                    OpCounter* ops, double rho) {
  if (ng < 1) throw std::invalid_argument("nesterov_burst: ng must be >= 1");
  const std::size_t n = ctx.n_tx;
  if (z_start.size() != n || momentum.size() != n ||
      trajectory.size() != static_cast<std::size_t>(ng) * n)
    throw DimensionError("nesterov_burst: buffer size mismatch");
  ComplexVector z(z_start.begin(), z_start.end());
  ComplexVector p(n), dz(momentum.begin(), momentum.end());
  burst_impl(ctx, ng, rho, z, p, dz, trajectory.data(), ops);
  for (std::size_t i = 0; i < n; ++i) momentum[i] = dz[i];
}

std::vector<ComplexVector> nesterov_burst(const SamplerContext& ctx,
                                          const ComplexVector& z_start, int ng) {
  ComplexVector traj(static_cast<std::size_t>(ng) * ctx.n_tx);
  ComplexVector momentum(ctx.n_tx, 0.0);
  nesterov_burst(ctx, z_start, ng, traj, momentum, nullptr);
  std::vector<ComplexVector> rows(ng);
  for (int t = 0; t < ng; ++t)
    rows[t].assign(traj.begin() + static_cast<std::size_t>(t) * ctx.n_tx,
                   traj.begin() + static_cast<std::size_t>(t + 1) * ctx.n_tx);
  return rows;
}

double update_step_size(double r_sqnorm, std::size_t n_rx, double d_qam,
                        double beta) {
  const double normalized = std::sqrt(r_sqnorm / static_cast<double>(n_rx));
  return std::max(d_qam, normalized) * beta;
}

void propose(const SamplerContext& ctx, std::span<const cplx> z_grad, double gamma,
             Rng& rng, std::span<cplx> z_prop, std::span<std::uint8_t> x_prop,
             OpCounter* ops) {
  const std::size_t n = ctx.n_tx;
  const ComplexMatrix& mc = ctx.walk_factor;
  // M_c is lower triangular: row i needs draws w_0..w_i only.
  for (std::size_t i = 0; i < n; ++i) z_prop[i] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx w = rng.normal_complex(1.0);
    for (std::size_t i = j; i < n; ++i) z_prop[i] += mc(i, j) * w;
  }
  for (std::size_t i = 0; i < n; ++i) z_prop[i] = z_grad[i] + gamma * z_prop[i];
  qam_quantize(z_prop, *ctx.constellation, x_prop);
  if (ops) ops->add(Phase::walk, n * n + n);
}

AcceptDecision accept_test(double r_prop_sqnorm, double r_prev_sqnorm, Rng& rng,
                           double exponent_scale) {
  double exponent = exponent_scale * (r_prev_sqnorm - r_prop_sqnorm);
  if (exponent > 0.0) exponent = 0.0;
  if (exponent < -745.0) exponent = -745.0;
  const double alpha = std::exp(exponent);
  const double u = rng.uniform();
  return {alpha >= u, alpha};
}

bool es_check(const SampleList& per_sampler_best, std::size_t n_rx, double sigma2,
              double eta) {
  const std::size_t p = per_sampler_best.size();
  if (p == 0) throw EmptySampleList("es_check: empty best-sample list");
  const std::size_t min_idx = per_sampler_best.argmin_index();
  const auto min_symbols = per_sampler_best.symbols(min_idx);
  std::size_t n_min = 0;
  for (std::size_t i = 0; i < p; ++i)
    if (same_symbols(per_sampler_best.symbols(i), min_symbols)) ++n_min;
  const double l_min = std::sqrt(per_sampler_best.sqnorm(min_idx));
  const double threshold = eta * std::sqrt(static_cast<double>(n_rx) * sigma2);
  return (static_cast<double>(n_min) > static_cast<double>(p) / 2.0) &&
         (l_min < threshold);
}

std::vector<std::uint8_t> init_estimate(const SamplerContext& ctx, InitMode mode,
                                        Rng& rng, OpCounter* ops) {
  std::vector<std::uint8_t> x(ctx.n_tx);
  if (mode == InitMode::random_constellation) {
    const int order = ctx.constellation->order;
    for (auto& s : x)
      s = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(order)));
  } else {
    const ComplexVector z = mmse_filter_output(ctx.h, ctx.y, ctx.sigma2, ops);
    qam_quantize(z, *ctx.constellation, x);
  }
  return x;
}

namespace {

struct Chain {
  ChainState st;

  void init(const SamplerContext& ctx, const SamplerParams& params, Rng& rng,
            OpCounter& ops) {
    const std::size_t n = ctx.n_tx;
    st.x_curr = init_estimate(ctx, params.init, rng, &ops);
    st.z.resize(n);
    st.dz.assign(n, 0.0);
    st.z_prop.resize(n);
    st.x_prop.resize(n);
    st.scratch.resize(ctx.n_rx);
    st.traj.resize(static_cast<std::size_t>(params.gd_per_walk) * n);
    st.samples = SampleList(n);
    const std::size_t per_chain =
        params.sample_augmentation
            ? static_cast<std::size_t>(params.num_iterations) * params.gd_per_walk + 1
            : static_cast<std::size_t>(params.num_iterations) + 1;
    st.samples.reserve(per_chain);
    st.best_sqnorm = std::numeric_limits<double>::infinity();

    st.r_sqnorm = admit(ctx, st.x_curr, ops);
    st.gamma = update_step_size(st.r_sqnorm, ctx.n_rx, ctx.d_qam,
                                params.beta_for(ctx.n_tx));
  }

  // Appends a quantized sample with its cached-residual sqnorm and keeps the
  // running best. Charged (M+1)N: QAM mapping plus residual norm.
  double admit(const SamplerContext& ctx, std::span<const std::uint8_t> symbols,
               OpCounter& ops) {
    const double sq = ctx.cache.residual_sqnorm(ctx.y, symbols, st.scratch);
    ops.add(Phase::residual,
            static_cast<std::uint64_t>(ctx.constellation->order + 1) * ctx.n_tx);
    append_known(symbols, sq);
    return sq;
  }

  void append_known(std::span<const std::uint8_t> symbols, double sq) {
    if (sq < st.best_sqnorm) {
      st.best_sqnorm = sq;
      st.best_index = st.samples.size();
    }
    st.samples.append(symbols, sq);
  }

  // One sampling iteration: Nesterov burst, SA admissions, random-walk
  // proposal, MH acceptance, step-size update.
  void advance(const SamplerContext& ctx, const SamplerParams& params, Rng& rng,
               OpCounter& ops, int iteration, int sampler_idx,
               std::vector<TraceRow>* trace) {
    const std::size_t n = ctx.n_tx;
    const int ng = params.gd_per_walk;
    const double gamma_used = st.gamma;

    symbols_to_points(st.x_curr, *ctx.constellation, st.z);
    if (!params.carry_momentum)
      for (auto& v : st.dz) v = 0.0;
    ComplexVector& p = st.z_prop;  // reuse as burst scratch before Step 2
    burst_impl(ctx, ng, params.momentum, st.z, p, st.dz, st.traj.data(), &ops);

    if (params.sample_augmentation) {
      for (int t = 0; t < ng - 1; ++t) {
        std::span<const cplx> row{st.traj.data() + static_cast<std::size_t>(t) * n, n};
        qam_quantize(row, *ctx.constellation, st.x_prop);
        admit(ctx, st.x_prop, ops);
      }
    }

    std::span<const cplx> z_grad{st.traj.data() + static_cast<std::size_t>(ng - 1) * n, n};
    propose(ctx, z_grad, st.gamma, rng, st.z_prop, st.x_prop, &ops);
    const double prop_sq = ctx.cache.residual_sqnorm(ctx.y, st.x_prop, st.scratch);
    ops.add(Phase::residual,
            static_cast<std::uint64_t>(ctx.constellation->order + 1) * ctx.n_tx);

    const double scale = params.acceptance_temperature ? 1.0 / ctx.sigma2 : 1.0;
    const AcceptDecision dec = accept_test(prop_sq, st.r_sqnorm, rng, scale);
    if (dec.accepted) {
      st.x_curr.assign(st.x_prop.begin(), st.x_prop.end());
      st.r_sqnorm = prop_sq;
    }
    append_known(st.x_curr, st.r_sqnorm);

    st.gamma = update_step_size(st.r_sqnorm, ctx.n_rx, ctx.d_qam,
                                params.beta_for(ctx.n_tx));
    if (trace)
      trace->push_back({iteration, sampler_idx, st.r_sqnorm, dec.accepted, gamma_used});
  }
};

}  // namespace

ChainState run_chain(const SamplerContext& ctx, const SamplerParams& params,
                     Rng& rng) {
  params.validate();
  OpCounter ops;
  Chain chain;
  chain.init(ctx, params, rng, ops);
  for (int i = 1; i <= params.num_iterations; ++i)
    chain.advance(ctx, params, rng, ops, i, 0, nullptr);
  return std::move(chain.st);
}

DetectionResult run_detector(const SamplerContext& ctx, const SamplerParams& params,
                             std::span<Rng> chain_rngs) {
  params.validate();
  const std::size_t p = static_cast<std::size_t>(params.num_samplers);
  if (chain_rngs.size() != p)
    throw DimensionError("run_detector: need one RNG stream per sampler");

  DetectionResult result;
  result.ops = ctx.preprocessing_ops;

  std::vector<Chain> chains(p);
  for (std::size_t i = 0; i < p; ++i)
    chains[i].init(ctx, params, chain_rngs[i], result.ops);

  SampleList bests(ctx.n_tx);
  bests.reserve(p);
  int executed = params.num_iterations;
  std::vector<TraceRow>* trace = params.record_trace ? &result.trace : nullptr;

  for (int i = 1; i <= params.num_iterations; ++i) {
    for (std::size_t k = 0; k < p; ++k)
      chains[k].advance(ctx, params, chain_rngs[k], result.ops, i,
                        static_cast<int>(k), trace);
    if (params.early_stopping) {
      bests.clear();
      for (std::size_t k = 0; k < p; ++k)
        bests.append(chains[k].st.samples.symbols(chains[k].st.best_index),
                     chains[k].st.best_sqnorm);
      if (es_check(bests, ctx.n_rx, ctx.sigma2, params.es_eta)) {
        executed = i;
        break;
      }
    }
  }
  result.iterations_executed = executed;

  result.samples = SampleList(ctx.n_tx);
  std::size_t total = 0;
  for (const auto& c : chains) total += c.st.samples.size();
  result.samples.reserve(total);
  for (const auto& c : chains) result.samples.append_all(c.st.samples);

  const std::size_t best = result.samples.argmin_index();
  const auto sym = result.samples.symbols(best);
  result.symbols_hat.assign(sym.begin(), sym.end());
  result.x_hat = symbols_to_points(result.symbols_hat, *ctx.constellation);
  result.bits_hat.resize(ctx.n_tx * ctx.constellation->bits_per_symbol);
  symbols_to_bits(result.symbols_hat, *ctx.constellation, result.bits_hat);
  return result;
}

DetectionResult run_detector(const SamplerContext& ctx, const SamplerParams& params,
                             std::uint64_t seed) {
  std::vector<Rng> rngs;
  rngs.reserve(params.num_samplers);
  for (int p = 0; p < params.num_samplers; ++p)
    rngs.emplace_back(stream_seed(seed, 0, 0, stream_role::chain_base + p));
  return run_detector(ctx, params, rngs);
}

}  // namespace nagmcmc
