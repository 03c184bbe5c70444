#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace nagmcmc {

enum class Phase : int { preprocessing = 0, gd, walk, residual, decision };
inline constexpr int kNumPhases = 5;

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::preprocessing: return "preprocessing";
    case Phase::gd: return "gd";
    case Phase::walk: return "walk";
    case Phase::residual: return "residual";
    case Phase::decision: return "decision";
  }
  return "?";
}

// Complex-multiplication tally per detection phase. Charges follow the
// closed-form accounting of the complexity comparison (symmetric inversion
// charged 2(N³+N), Cholesky 2/3·N³, scaled-column cache M·N², QAM mapping
// M·N, residual norm N), not a literal count of machine multiplies. Stored
// in units of 1/3 so the cubic fractions stay integral and sums are exact
// regardless of accumulation order.
class OpCounter {
 public:
  void add(Phase p, std::uint64_t mults) { thirds_[idx(p)] += 3 * mults; }
  void add_thirds(Phase p, std::uint64_t thirds) { thirds_[idx(p)] += thirds; }

  double phase(Phase p) const { return static_cast<double>(thirds_[idx(p)]) / 3.0; }
  std::uint64_t phase_thirds(Phase p) const { return thirds_[idx(p)]; }
  double total() const {
    std::uint64_t t = 0;
    for (auto v : thirds_) t += v;
    return static_cast<double>(t) / 3.0;
  }

  OpCounter& operator+=(const OpCounter& o) {
    for (int i = 0; i < kNumPhases; ++i) thirds_[i] += o.thirds_[i];
    return *this;
  }

 private:
  static int idx(Phase p) { return static_cast<int>(p); }
  std::array<std::uint64_t, kNumPhases> thirds_{};
};

}  // namespace nagmcmc
