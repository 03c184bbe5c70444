#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace nagmcmc {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  std::uint64_t s = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ULL;
  s = (s ^ (s >> 27)) * 0x94d049bb133111ebULL;
  return s ^ (s >> 31);
}

// Role tags for the counter-based stream layout: every stochastic draw is a
// pure function of (master seed, snr index, trial index, role).
namespace stream_role {
inline constexpr std::uint64_t channel = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t est_error = 3;
inline constexpr std::uint64_t gd_trace = 4;
inline constexpr std::uint64_t chain_base = 16;  // chain p uses chain_base + p
}  // namespace stream_role

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t snr_index,
                                 std::uint64_t trial, std::uint64_t role) {
  return hash_combine(hash_combine(hash_combine(master, snr_index), trial), role);
}

// xoshiro256++ with a splitmix64-expanded seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // (0, 1]; safe as a log() argument
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // unbiased integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  bool bit() { return (next() >> 63) != 0; }

  // CN(0, variance): real and imaginary parts each N(0, variance/2)
  std::complex<double> normal_complex(double variance) {
    const double mag = std::sqrt(-variance * std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {mag * std::cos(phi), mag * std::sin(phi)};
  }

  double normal(double variance = 1.0) {
    const double mag = std::sqrt(-2.0 * variance * std::log(uniform_pos()));
    return mag * std::cos(2.0 * std::numbers::pi * uniform());
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace nagmcmc
