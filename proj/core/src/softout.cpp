#include "nagmcmc/softout.hpp"

#include <limits>
#include <string_view>
#include <unordered_set>

namespace nagmcmc {

LlrResult compute_llrs(const SampleList& samples, double sigma2,
                       std::span<const double> prior, const Constellation& c) {
  if (samples.empty()) throw EmptySampleList("compute_llrs: empty sample list");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("compute_llrs: sigma2 must be > 0");
  const std::size_t n_tx = samples.n_tx();
  const std::size_t n_bits = n_tx * c.bits_per_symbol;
  if (!prior.empty() && prior.size() != n_bits)
    throw DimensionError("compute_llrs: prior length must be N_t*log2(M)");

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> min_pos(n_bits, inf), min_neg(n_bits, inf);

  std::unordered_set<std::string_view> seen;
  seen.reserve(samples.size() * 2);
  const double inv_sigma2 = 1.0 / sigma2;
  const int bps = c.bits_per_symbol;

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto sym = samples.symbols(s);
    const std::string_view key(reinterpret_cast<const char*>(sym.data()), sym.size());
    if (!seen.insert(key).second) continue;

    double cost = samples.sqnorm(s) * inv_sigma2;
    if (!prior.empty()) {
      double bla = 0.0;
      for (std::size_t t = 0; t < n_tx; ++t)
        for (int k = 0; k < bps; ++k) {
          const std::size_t bit = t * bps + k;
          bla += (c.label_bit(sym[t], k) ? 1.0 : -1.0) * prior[bit];
        }
      cost -= 0.5 * bla;
    }
    for (std::size_t t = 0; t < n_tx; ++t)
      for (int k = 0; k < bps; ++k) {
        const std::size_t bit = t * bps + k;
        double& slot = c.label_bit(sym[t], k) ? min_pos[bit] : min_neg[bit];
        if (cost < slot) slot = cost;
      }
  }

  const double sat = llr_saturation_level(sigma2);
  LlrResult out;
  out.values.resize(n_bits);
  out.saturated.assign(n_bits, 0);
  for (std::size_t k = 0; k < n_bits; ++k) {
    if (min_neg[k] == inf) {
      out.values[k] = sat;  // only b_k = +1 observed
      out.saturated[k] = 1;
    } else if (min_pos[k] == inf) {
      out.values[k] = -sat;
      out.saturated[k] = 1;
    } else {
      out.values[k] = min_neg[k] - min_pos[k];
    }
  }
  return out;
}

std::vector<double> extrinsic_llrs(const LlrResult& llrs,
                                   std::span<const double> prior) {
  std::vector<double> out = llrs.values;
  if (!prior.empty()) {
    if (prior.size() != out.size())
      throw DimensionError("extrinsic_llrs: prior length mismatch");
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= prior[k];
  }
  return out;
}

}  // namespace nagmcmc
