#include "nagmcmc/column_cache.hpp"

namespace nagmcmc {

ColumnCache::ColumnCache(const ComplexMatrix& h, const Constellation& c)
    : n_rx_(h.rows()),
      n_tx_(h.cols()),
      order_(c.order),
      axis_size_(c.axis_size),
      pos_levels_(static_cast<std::size_t>(c.axis_size / 2)) {
  scaled_.resize(pos_levels_ * n_tx_ * n_rx_);
  for (std::size_t lv = 0; lv < pos_levels_; ++lv) {
    const double amp = c.axis_levels[c.axis_size / 2 + lv];
    for (std::size_t col = 0; col < n_tx_; ++col) {
      cplx* dst = scaled_.data() + (lv * n_tx_ + col) * n_rx_;
      for (std::size_t r = 0; r < n_rx_; ++r) dst[r] = amp * h(r, col);
    }
  }
}

void ColumnCache::apply(std::span<const std::uint8_t> symbols,
                        std::span<cplx> hx) const {
  for (auto& v : hx) v = 0.0;
  for (std::size_t col = 0; col < n_tx_; ++col)
    accumulate_column(col, symbols[col], hx);
}

void ColumnCache::accumulate_column(std::size_t col, std::uint8_t symbol,
                                    std::span<cplx> acc) const {
  const int re_idx = symbol / axis_size_;
  const int im_idx = symbol % axis_size_;
  std::size_t lre, lim;
  double sre, sim;
  split(re_idx, lre, sre);
  split(im_idx, lim, sim);
  const cplx* cre = block(lre, col);
  const cplx* cim = block(lim, col);
  for (std::size_t r = 0; r < n_rx_; ++r) {
    // (sre + i*sim applied to the scaled column pair): i*(a+bi) = -b + ai
    acc[r] += cplx{sre * cre[r].real() - sim * cim[r].imag(),
                   sre * cre[r].imag() + sim * cim[r].real()};
  }
}

void ColumnCache::subtract_column(std::size_t col, std::uint8_t symbol,
                                  std::span<cplx> acc) const {
  const int re_idx = symbol / axis_size_;
  const int im_idx = symbol % axis_size_;
  std::size_t lre, lim;
  double sre, sim;
  split(re_idx, lre, sre);
  split(im_idx, lim, sim);
  const cplx* cre = block(lre, col);
  const cplx* cim = block(lim, col);
  for (std::size_t r = 0; r < n_rx_; ++r) {
    acc[r] -= cplx{sre * cre[r].real() - sim * cim[r].imag(),
                   sre * cre[r].imag() + sim * cim[r].real()};
  }
}

double ColumnCache::residual_sqnorm(std::span<const cplx> y,
                                    std::span<const std::uint8_t> symbols,
                                    std::span<cplx> scratch) const {
  for (std::size_t r = 0; r < n_rx_; ++r) scratch[r] = y[r];
  for (std::size_t col = 0; col < n_tx_; ++col)
    subtract_column(col, symbols[col], scratch);
  double acc = 0.0;
  for (std::size_t r = 0; r < n_rx_; ++r) acc += std::norm(scratch[r]);
  return acc;
}

double ColumnCache::residual_sqnorm(const ComplexVector& y,
                                    const std::vector<std::uint8_t>& symbols) const {
  if (y.size() != n_rx_ || symbols.size() != n_tx_)
    throw DimensionError("residual_sqnorm: length mismatch");
  ComplexVector scratch(n_rx_);
  return residual_sqnorm(std::span<const cplx>(y), symbols, scratch);
}

}  // namespace nagmcmc
