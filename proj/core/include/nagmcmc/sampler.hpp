#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "nagmcmc/column_cache.hpp"
#include "nagmcmc/linalg.hpp"
#include "nagmcmc/modem.hpp"
#include "nagmcmc/op_counter.hpp"
#include "nagmcmc/rng.hpp"
#include "nagmcmc/sample_list.hpp"

namespace nagmcmc {

enum class InitMode { random_constellation, mmse };

struct SamplerParams {
  int num_samplers = 16;   // P
  int num_iterations = 8;  // S
  int gd_per_walk = 8;     // successive Nesterov iterations per random walk
  double momentum = 0.9;   // ρ
  double beta = 0.0;       // walk-scale coefficient; <= 0 selects (N_t/8)^(-1/3)
  double es_eta = 1.5;     // η in the early-stopping residual test
  bool sample_augmentation = false;
  bool early_stopping = false;
  InitMode init = InitMode::random_constellation;
  // Δz persists across sampling iterations (the initialize-once reading of
  // the momentum recursion; reproduces the reference iteration counts).
  // Setting it false re-zeros the momentum at every burst for ablations.
  bool carry_momentum = true;
  bool acceptance_temperature = false;  // scale the MH exponent by 1/σ²
  bool record_trace = false;

  double beta_for(std::size_t n_tx) const;
  // Throws ConfigError listing every violated constraint.
  void validate() const;
};

// Per-channel-realization immutable state shared by all P chains.
struct SamplerContext {
  ComplexMatrix h;
  ComplexVector y;
  ComplexMatrix gram_matrix;  // HᴴH
  ComplexVector hty;          // Hᴴy; gradient evaluated as (HᴴH)z − Hᴴy
  ComplexMatrix walk_factor;  // M_c: row-normalized chol((HᴴH)⁻¹)
  ColumnCache cache;
  double tau = 0.0;  // 1/‖HᴴH‖_F
  double sigma2 = 0.0;
  double d_qam = 0.0;
  const Constellation* constellation = nullptr;
  std::size_t n_rx = 0, n_tx = 0;
  OpCounter preprocessing_ops;
};

// Gram matrix, learning rate, row-normalized walk covariance factor, and the
// scaled-column cache. Throws SingularChannel when HᴴH cannot be factorized;
// simulation callers resample the channel.
SamplerContext precompute(const ComplexMatrix& h, const ComplexVector& y,
                          double sigma2, const Constellation& c);

// Variant that substitutes M_c = I on factorization failure instead of
// throwing (library mode); sets *degenerate when it does.
SamplerContext precompute_or_identity(const ComplexMatrix& h, const ComplexVector& y,
                                      double sigma2, const Constellation& c,
                                      bool* degenerate);

// N_g Nesterov iterations from z_start; trajectory receives rows z_1..z_Ng
// (ng*n_tx entries). momentum is Δz in/out — pass zeros for a fresh burst.
void nesterov_burst(const SamplerContext& ctx, std::span<const cplx> z_start,
                    int ng, std::span<cplx> trajectory, std::span<cplx> momentum,
                    OpCounter* ops = nullptr, double rho = 0.9);
std::vector<ComplexVector> nesterov_burst(const SamplerContext& ctx,
                                          const ComplexVector& z_start, int ng);

// γ = max(d_qam, ‖r‖/√N_r)·β
double update_step_size(double r_sqnorm, std::size_t n_rx, double d_qam,
                        double beta);

// z_prop = z_grad + γ·M_c·w, x_prop = Q(z_prop)
void propose(const SamplerContext& ctx, std::span<const cplx> z_grad, double gamma,
             Rng& rng, std::span<cplx> z_prop, std::span<std::uint8_t> x_prop,
             OpCounter* ops = nullptr);

struct AcceptDecision {
  bool accepted;
  double alpha;
};

// α = min{1, exp(r_prev² − r_prop²)}, exponent clamped to [−745, 0];
// exponent_scale (1/σ² when tempering) multiplies the exponent.
AcceptDecision accept_test(double r_prop_sqnorm, double r_prev_sqnorm, Rng& rng,
                           double exponent_scale = 1.0);

// Stop iff more than half of the per-sampler bests coincide with the global
// best and its residual norm is below η√(N_r σ²).
bool es_check(const SampleList& per_sampler_best, std::size_t n_rx, double sigma2,
              double eta);

// Initial symbol vector: uniform over the constellation, or Q(MMSE output).
std::vector<std::uint8_t> init_estimate(const SamplerContext& ctx, InitMode mode,
                                        Rng& rng, OpCounter* ops = nullptr);

struct ChainState {
  std::vector<std::uint8_t> x_curr;  // current MH sample (symbol indices)
  double r_sqnorm = 0.0;
  double gamma = 0.0;
  SampleList samples;  // own list, SA included when enabled
  std::size_t best_index = 0;
  double best_sqnorm = std::numeric_limits<double>::infinity();

  // reusable workspaces
  ComplexVector z, dz, z_prop, traj, scratch;
  std::vector<std::uint8_t> x_prop;
};

// One full chain, S iterations, no early-stopping synchronization.
ChainState run_chain(const SamplerContext& ctx, const SamplerParams& params,
                     Rng& rng);

struct TraceRow {
  int iteration;
  int sampler;
  double r_sqnorm;
  bool accepted;
  double gamma;
};

struct DetectionResult {
  std::vector<std::uint8_t> symbols_hat;
  ComplexVector x_hat;
  BitVector bits_hat;
  SampleList samples;  // pooled across samplers, duplicates kept
  int iterations_executed = 0;  // S_a for this detection
  OpCounter ops;                // preprocessing + sampling work
  std::vector<TraceRow> trace;  // populated when params.record_trace
};

// P lockstep chains with optional SA/ES; hard decision by pooled argmin
// (ties: lowest sampler index, then earliest sample).
DetectionResult run_detector(const SamplerContext& ctx, const SamplerParams& params,
                             std::span<Rng> chain_rngs);
DetectionResult run_detector(const SamplerContext& ctx, const SamplerParams& params,
                             std::uint64_t seed);

}  // namespace nagmcmc
