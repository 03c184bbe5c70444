#pragma once

#include <span>
#include <vector>

#include "nagmcmc/modem.hpp"
#include "nagmcmc/sample_list.hpp"

namespace nagmcmc {

struct LlrResult {
  std::vector<double> values;          // N_b = N_t·log2(M) entries
  std::vector<std::uint8_t> saturated; // per-bit flag: one subset was empty
};

inline double llr_saturation_level(double sigma2) { return 10.0 / sigma2; }

// Max-log a posteriori LLRs from a pooled sample list. Samples are
// deduplicated by symbol-vector identity first. Bit convention: logical 1
// corresponds to "+1" in the prior term, evaluated as −½bᵀL_a over the
// sample's full bit vector with b ∈ {±1}. An empty subset saturates the bit
// at ±10/σ². prior may be empty (no a-priori information).
LlrResult compute_llrs(const SampleList& samples, double sigma2,
                       std::span<const double> prior, const Constellation& c);

// Extrinsic output for detection-and-decoding consumers: L − L_a.
std::vector<double> extrinsic_llrs(const LlrResult& llrs,
                                   std::span<const double> prior);

}  // namespace nagmcmc
