#pragma once

#include "nagmcmc/linalg.hpp"
#include "nagmcmc/modem.hpp"
#include "nagmcmc/rng.hpp"

namespace nagmcmc {

struct ChannelInstance {
  ComplexMatrix h;  // N_r × N_t
  double sigma2 = 0.0;
  double snr_db = 0.0;
  BitVector bits_true;
  ComplexVector x_true;
  ComplexVector y;
};

// i.i.d. CN(0, 1/N_r) entries (real/imag parts each variance 1/(2N_r)).
ComplexMatrix sample_rayleigh(std::size_t n_rx, std::size_t n_tx, Rng& rng);

// σ² from the ensemble definition SNR = E[‖Hx‖²]/E[‖n‖²] with unit-energy
// symbols and the variance-1/N_r Rayleigh model: E[‖Hx‖²] = N_t.
double noise_variance_for_snr(double snr_db, std::size_t n_rx, std::size_t n_tx);

// y = Hx + n with i.i.d. CN(0, sigma2) noise entries.
ComplexVector transmit(const ComplexMatrix& h, const ComplexVector& x,
                       double sigma2, Rng& rng);

// Ĥ = H + ΔH with per-entry variance nmse/N_r, calibrated so that
// E[‖ΔH‖²_F]/E[‖H‖²_F] = nmse for the Rayleigh model. Requires 0 ≤ nmse < 1.
ComplexMatrix perturb_channel(const ComplexMatrix& h, double nmse, Rng& rng);

// Draws bits, H, and y for one trial. Channel-stream draws: H then bits.
ChannelInstance make_channel_instance(std::size_t n_rx, std::size_t n_tx,
                                      const Constellation& c, double snr_db,
                                      Rng& channel_rng, Rng& noise_rng);

}  // namespace nagmcmc
