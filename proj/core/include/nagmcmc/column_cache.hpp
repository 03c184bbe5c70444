#pragma once

#include <cstdint>
#include <span>

#include "nagmcmc/linalg.hpp"
#include "nagmcmc/modem.hpp"

namespace nagmcmc {

// Channel columns pre-scaled by the distinct positive per-axis QAM amplitudes.
// Signs and the imaginary-axis rotation are applied at lookup, so Hx and
// residual norms for constellation vectors need no runtime multiplications.
class ColumnCache {
 public:
  ColumnCache() = default;
  ColumnCache(const ComplexMatrix& h, const Constellation& c);

  std::size_t n_rx() const { return n_rx_; }
  std::size_t n_tx() const { return n_tx_; }
  int constellation_order() const { return order_; }
  std::size_t stored_columns() const { return pos_levels_ * n_tx_; }

  // hx = H x for x given as symbol indices
  void apply(std::span<const std::uint8_t> symbols, std::span<cplx> hx) const;

  // acc += H(:,col) * point(symbol); used by enumeration-style detectors
  void accumulate_column(std::size_t col, std::uint8_t symbol,
                         std::span<cplx> acc) const;
  void subtract_column(std::size_t col, std::uint8_t symbol,
                       std::span<cplx> acc) const;

  // ‖y − Hx‖² without materializing the residual; scratch holds n_rx entries
  double residual_sqnorm(std::span<const cplx> y,
                         std::span<const std::uint8_t> symbols,
                         std::span<cplx> scratch) const;
  double residual_sqnorm(const ComplexVector& y,
                         const std::vector<std::uint8_t>& symbols) const;

 private:
  const cplx* block(std::size_t level, std::size_t col) const {
    return scaled_.data() + (level * n_tx_ + col) * n_rx_;
  }
  // (positive-level index, sign) for an axis level index
  void split(int axis_idx, std::size_t& level, double& sign) const {
    const int half = axis_size_ / 2;
    if (axis_idx >= half) {
      level = static_cast<std::size_t>(axis_idx - half);
      sign = 1.0;
    } else {
      level = static_cast<std::size_t>(half - 1 - axis_idx);
      sign = -1.0;
    }
  }

  std::size_t n_rx_ = 0, n_tx_ = 0;
  int order_ = 0, axis_size_ = 0;
  std::size_t pos_levels_ = 0;
  std::vector<cplx> scaled_;  // [level][col][row]
};

}  // namespace nagmcmc
