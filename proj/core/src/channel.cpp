#include "nagmcmc/channel.hpp"

#include <cmath>

namespace nagmcmc {

ComplexMatrix sample_rayleigh(std::size_t n_rx, std::size_t n_tx, Rng& rng) {
  if (n_rx < 1 || n_tx < 1)
    throw DimensionError("sample_rayleigh: dimensions must be positive");
  ComplexMatrix h(n_rx, n_tx);
  const double var = 1.0 / static_cast<double>(n_rx);
  for (std::size_t r = 0; r < n_rx; ++r)
    for (std::size_t c = 0; c < n_tx; ++c) h(r, c) = rng.normal_complex(var);
  return h;
}

double noise_variance_for_snr(double snr_db, std::size_t n_rx, std::size_t n_tx) {
  const double snr = std::pow(10.0, snr_db / 10.0);
  return static_cast<double>(n_tx) / (static_cast<double>(n_rx) * snr);
}

ComplexVector transmit(const ComplexMatrix& h, const ComplexVector& x,
                       double sigma2, Rng& rng) {
  if (sigma2 < 0.0) throw std::invalid_argument("transmit: sigma2 must be >= 0");
  ComplexVector y = matvec(h, x);
  if (sigma2 > 0.0)
    for (auto& v : y) v += rng.normal_complex(sigma2);
  return y;
}

ComplexMatrix perturb_channel(const ComplexMatrix& h, double nmse, Rng& rng) {
  if (!(nmse >= 0.0 && nmse < 1.0))
    throw std::invalid_argument("perturb_channel: nmse must be in [0, 1)");
  ComplexMatrix out = h;
  if (nmse == 0.0) return out;
  const double var = nmse / static_cast<double>(h.rows());
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c)
      out(r, c) += rng.normal_complex(var);
  return out;
}

ChannelInstance make_channel_instance(std::size_t n_rx, std::size_t n_tx,
                                      const Constellation& c, double snr_db,
                                      Rng& channel_rng, Rng& noise_rng) {
  ChannelInstance inst;
  inst.snr_db = snr_db;
  inst.sigma2 = noise_variance_for_snr(snr_db, n_rx, n_tx);
  inst.h = sample_rayleigh(n_rx, n_tx, channel_rng);
  inst.bits_true.resize(n_tx * c.bits_per_symbol);
  for (auto& b : inst.bits_true) b = channel_rng.bit() ? 1 : 0;
  inst.x_true = modulate(inst.bits_true, c);
  inst.y = transmit(inst.h, inst.x_true, inst.sigma2, noise_rng);
  return inst;
}

}  // namespace nagmcmc
