#pragma once

#include <cstdint>
#include <vector>

#include "nagmcmc/column_cache.hpp"
#include "nagmcmc/linalg.hpp"
#include "nagmcmc/modem.hpp"
#include "nagmcmc/op_counter.hpp"

namespace nagmcmc {

// Candidate cap for the exhaustive search: M^N_t ≤ 2^24.
inline constexpr std::uint64_t kMlCandidateCap = 1ull << 24;

// Unquantized linear filter outputs (also used as sampler initializers).
ComplexVector zf_filter_output(const ComplexMatrix& h, const ComplexVector& y,
                               OpCounter* ops = nullptr);
ComplexVector mmse_filter_output(const ComplexMatrix& h, const ComplexVector& y,
                                 double sigma2, OpCounter* ops = nullptr);

// Q((HᴴH)⁻¹Hᴴy); throws SingularChannel via the Cholesky path.
std::vector<std::uint8_t> detect_zf(const ComplexMatrix& h, const ComplexVector& y,
                                    const Constellation& c, OpCounter* ops = nullptr);

// Q((HᴴH + σ²I)⁻¹Hᴴy); σ² > 0 regularizes rank deficiency.
std::vector<std::uint8_t> detect_mmse(const ComplexMatrix& h, const ComplexVector& y,
                                      double sigma2, const Constellation& c,
                                      OpCounter* ops = nullptr);

// Exact argmin of ‖y − Hx‖² over the constellation product space,
// ties resolved to the lexicographically smallest symbol-index vector.
std::vector<std::uint8_t> detect_ml_exhaustive(const ComplexMatrix& h,
                                               const ComplexVector& y,
                                               const Constellation& c);

enum class DescentMethod { naive_linesearch, nesterov };

struct DescentTrace {
  DescentMethod method;
  std::vector<double> residual_norms;  // ‖y − Hz_t‖ for t = 0..T
};

// Plain-GD and Nesterov descent traces over the relaxed LS surface.
// naive_linesearch uses the exact quadratic step ‖g‖²/(gᴴAg); nesterov uses
// τ = 1/‖HᴴH‖_F with momentum 0.9.
DescentTrace descent_trace(const ComplexMatrix& h, const ComplexVector& y,
                           const ComplexVector& z0, DescentMethod method, int t_max);

}  // namespace nagmcmc
