#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nagmcmc/linalg.hpp"

namespace nagmcmc {

using BitVector = std::vector<std::uint8_t>;

// Square QAM alphabet on the odd-integer lattice, normalized to unit symbol
// energy. Point index = re_level_index * axis_size + im_level_index with
// levels ascending. Gray labels are assigned per axis, real-axis bits first,
// most-significant bit first.
struct Constellation {
  int order = 0;            // M
  int bits_per_symbol = 0;  // log2 M
  int axis_size = 0;        // √M
  int axis_bits = 0;        // log2 √M
  double scale = 0.0;       // lattice scaling sqrt(3/(2(M−1)))
  double d_qam = 0.0;       // half the minimum point distance (= scale)
  std::vector<double> axis_levels;        // ascending, size axis_size
  ComplexVector points;                   // size M
  std::vector<std::uint16_t> labels;      // packed bit label per point
  std::vector<std::uint8_t> label_to_index;

  int label_bit(std::uint8_t point_index, int k) const {
    return (labels[point_index] >> (bits_per_symbol - 1 - k)) & 1;
  }
  std::uint8_t point_index(int re_idx, int im_idx) const {
    return static_cast<std::uint8_t>(re_idx * axis_size + im_idx);
  }
  int re_index(std::uint8_t point_index) const { return point_index / axis_size; }
  int im_index(std::uint8_t point_index) const { return point_index % axis_size; }
};

// M ∈ {4, 16, 64}; otherwise UnsupportedModulation.
Constellation build_constellation(int order);

// bits.size() must equal n_tx * log2(M).
void modulate(std::span<const std::uint8_t> bits, const Constellation& c,
              std::span<cplx> out);
ComplexVector modulate(const BitVector& bits, const Constellation& c);

// Inverse of modulate; every entry must match a constellation point to
// within tol or NotAConstellationPoint is thrown.
BitVector demodulate_hard(const ComplexVector& x, const Constellation& c,
                          double tol = 1e-9);

// Nearest axis level with deterministic tie-breaking: at an exact midpoint
// the smaller-magnitude level wins; between ±level, the negative one.
int nearest_axis_index(double v, const Constellation& c);

std::uint8_t quantize_symbol(cplx z, const Constellation& c);
void qam_quantize(std::span<const cplx> z, const Constellation& c,
                  std::span<std::uint8_t> out);
ComplexVector qam_quantize(const ComplexVector& z, const Constellation& c);

void symbols_to_points(std::span<const std::uint8_t> symbols,
                       const Constellation& c, std::span<cplx> out);
ComplexVector symbols_to_points(const std::vector<std::uint8_t>& symbols,
                                const Constellation& c);
void symbols_to_bits(std::span<const std::uint8_t> symbols, const Constellation& c,
                     std::span<std::uint8_t> bits_out);
std::vector<std::uint8_t> bits_to_symbols(std::span<const std::uint8_t> bits,
                                          const Constellation& c);

// Audit table: "index,re,im,label" rows, one per point.
std::string label_table_csv(const Constellation& c);

}  // namespace nagmcmc
