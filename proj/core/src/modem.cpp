#include "nagmcmc/modem.hpp"

#include <cmath>
#include <cstdio>

namespace nagmcmc {

namespace {

int gray_encode(int v) { return v ^ (v >> 1); }

int int_log2(int v) {
  int b = 0;
  while ((1 << b) < v) ++b;
  return b;
}

}  // namespace

Constellation build_constellation(int order) {
  if (order != 4 && order != 16 && order != 64)
    throw UnsupportedModulation("unsupported QAM order " + std::to_string(order) +
                                " (supported: 4, 16, 64)");
  Constellation c;
  c.order = order;
  c.bits_per_symbol = int_log2(order);
  c.axis_size = 1 << (c.bits_per_symbol / 2);
  c.axis_bits = c.bits_per_symbol / 2;
  c.scale = std::sqrt(3.0 / (2.0 * (order - 1)));
  c.d_qam = c.scale;

  c.axis_levels.resize(c.axis_size);
  for (int j = 0; j < c.axis_size; ++j)
    c.axis_levels[j] = (2 * j - (c.axis_size - 1)) * c.scale;

  c.points.resize(order);
  c.labels.resize(order);
  c.label_to_index.assign(order, 0);
  for (int re = 0; re < c.axis_size; ++re) {
    for (int im = 0; im < c.axis_size; ++im) {
      const int idx = re * c.axis_size + im;
      c.points[idx] = {c.axis_levels[re], c.axis_levels[im]};
      const std::uint16_t label = static_cast<std::uint16_t>(
          (gray_encode(re) << c.axis_bits) | gray_encode(im));
      c.labels[idx] = label;
      c.label_to_index[label] = static_cast<std::uint8_t>(idx);
    }
  }
  return c;
}

void modulate(std::span<const std::uint8_t> bits, const Constellation& c,
              std::span<cplx> out) {
  const std::size_t bps = c.bits_per_symbol;
  if (bits.size() != out.size() * bps)
    throw DimensionError("modulate: bit count must be n_tx*log2(M)");
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::uint16_t label = 0;
    for (std::size_t k = 0; k < bps; ++k)
      label = static_cast<std::uint16_t>((label << 1) | (bits[s * bps + k] & 1));
    out[s] = c.points[c.label_to_index[label]];
  }
}

ComplexVector modulate(const BitVector& bits, const Constellation& c) {
  if (bits.size() % c.bits_per_symbol != 0)
    throw DimensionError("modulate: bit count must be a multiple of log2(M)");
  ComplexVector out(bits.size() / c.bits_per_symbol);
  modulate(bits, c, out);
  return out;
}

BitVector demodulate_hard(const ComplexVector& x, const Constellation& c,
                          double tol) {
  BitVector bits(x.size() * c.bits_per_symbol);
  for (std::size_t s = 0; s < x.size(); ++s) {
    const std::uint8_t idx = quantize_symbol(x[s], c);
    if (std::abs(x[s] - c.points[idx]) > tol)
      throw NotAConstellationPoint("demodulate_hard: entry is not a constellation point");
    for (int k = 0; k < c.bits_per_symbol; ++k)
      bits[s * c.bits_per_symbol + k] = static_cast<std::uint8_t>(c.label_bit(idx, k));
  }
  return bits;
}

int nearest_axis_index(double v, const Constellation& c) {
  const int n = c.axis_size;
  // Fractional level index on the odd-integer lattice; ties are detected in
  // level units where constructions like v = 2*scale stay exact.
  const double jf = 0.5 * (v / c.scale + (n - 1));
  if (jf <= 0.0) return 0;
  if (jf >= n - 1) return n - 1;
  const int lo = static_cast<int>(jf);
  const double frac = jf - lo;
  if (frac > 0.5) return lo + 1;
  if (frac < 0.5) return lo;
  // Exact midpoint: smaller-magnitude level wins; between ±level take the
  // negative one (lower index).
  const double mlo = std::abs(c.axis_levels[lo]);
  const double mhi = std::abs(c.axis_levels[lo + 1]);
  return (mhi < mlo) ? lo + 1 : lo;
}

std::uint8_t quantize_symbol(cplx z, const Constellation& c) {
  const int re = nearest_axis_index(z.real(), c);
  const int im = nearest_axis_index(z.imag(), c);
  return c.point_index(re, im);
}

void qam_quantize(std::span<const cplx> z, const Constellation& c,
                  std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = quantize_symbol(z[i], c);
}

ComplexVector qam_quantize(const ComplexVector& z, const Constellation& c) {
  ComplexVector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] = c.points[quantize_symbol(z[i], c)];
  return out;
}

void symbols_to_points(std::span<const std::uint8_t> symbols,
                       const Constellation& c, std::span<cplx> out) {
  for (std::size_t i = 0; i < symbols.size(); ++i) out[i] = c.points[symbols[i]];
}

ComplexVector symbols_to_points(const std::vector<std::uint8_t>& symbols,
                                const Constellation& c) {
  ComplexVector out(symbols.size());
  symbols_to_points(symbols, c, out);
  return out;
}

void symbols_to_bits(std::span<const std::uint8_t> symbols, const Constellation& c,
                     std::span<std::uint8_t> bits_out) {
  const int bps = c.bits_per_symbol;
  for (std::size_t s = 0; s < symbols.size(); ++s)
    for (int k = 0; k < bps; ++k)
      bits_out[s * bps + k] = static_cast<std::uint8_t>(c.label_bit(symbols[s], k));
}

std::vector<std::uint8_t> bits_to_symbols(std::span<const std::uint8_t> bits,
                                          const Constellation& c) {
  const std::size_t bps = c.bits_per_symbol;
  if (bits.size() % bps != 0)
    throw DimensionError("bits_to_symbols: bit count must be a multiple of log2(M)");
  std::vector<std::uint8_t> symbols(bits.size() / bps);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    std::uint16_t label = 0;
    for (std::size_t k = 0; k < bps; ++k)
      label = static_cast<std::uint16_t>((label << 1) | (bits[s * bps + k] & 1));
    symbols[s] = c.label_to_index[label];
  }
  return symbols;
}

std::string label_table_csv(const Constellation& c) {
  std::string out = "index,re,im,label\n";
  char buf[128];
  for (int i = 0; i < c.order; ++i) {
    std::string label;
    for (int k = 0; k < c.bits_per_symbol; ++k)
      label += static_cast<char>('0' + c.label_bit(static_cast<std::uint8_t>(i), k));
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%s\n", i,
                  c.points[i].real(), c.points[i].imag(), label.c_str());
    out += buf;
  }
  return out;
}

}  // namespace nagmcmc
