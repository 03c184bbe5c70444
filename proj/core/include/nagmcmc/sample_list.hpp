#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "nagmcmc/errors.hpp"

namespace nagmcmc {

// Flat list of quantized symbol-index vectors with their residual sqnorms.
class SampleList {
 public:
  SampleList() = default;
  explicit SampleList(std::size_t n_tx) : n_tx_(n_tx) {}

  std::size_t n_tx() const { return n_tx_; }
  std::size_t size() const { return sqnorms_.size(); }
  bool empty() const { return sqnorms_.empty(); }

  void reserve(std::size_t n) {
    symbols_.reserve(n * n_tx_);
    sqnorms_.reserve(n);
  }
  void clear() {
    symbols_.clear();
    sqnorms_.clear();
  }

  void append(std::span<const std::uint8_t> symbols, double sqnorm) {
    symbols_.insert(symbols_.end(), symbols.begin(), symbols.end());
    sqnorms_.push_back(sqnorm);
  }
  void append_all(const SampleList& other) {
    symbols_.insert(symbols_.end(), other.symbols_.begin(), other.symbols_.end());
    sqnorms_.insert(sqnorms_.end(), other.sqnorms_.begin(), other.sqnorms_.end());
  }

  std::span<const std::uint8_t> symbols(std::size_t i) const {
    return {symbols_.data() + i * n_tx_, n_tx_};
  }
  double sqnorm(std::size_t i) const { return sqnorms_[i]; }

  // Earliest index attaining the minimum sqnorm. Throws on an empty list.
  std::size_t argmin_index() const {
    if (empty()) throw EmptySampleList("argmin over empty sample list");
    std::size_t best = 0;
    double best_val = sqnorms_[0];
    for (std::size_t i = 1; i < sqnorms_.size(); ++i) {
      if (sqnorms_[i] < best_val) {
        best_val = sqnorms_[i];
        best = i;
      }
    }
    return best;
  }

 private:
  std::size_t n_tx_ = 0;
  std::vector<std::uint8_t> symbols_;
  std::vector<double> sqnorms_;
};

inline bool same_symbols(std::span<const std::uint8_t> a,
                         std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace nagmcmc
