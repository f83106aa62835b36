#include "vp/modem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vp {
namespace {

int gray_encode(int index) { return index ^ (index >> 1); }

int gray_decode(int code) {
  int index = 0;
  for (; code != 0; code >>= 1) index ^= code;
  return index;
}

// Level index on one axis, ties rounded toward the smaller coordinate.
int nearest_level(double x, const Constellation& c) {
  const double t = (x + (c.levels_per_axis - 1)) / 2.0;
  const double idx = std::ceil(t - 0.5);
  return static_cast<int>(std::clamp(idx, 0.0, double(c.levels_per_axis - 1)));
}

double level_value(int index, const Constellation& c) {
  return c.delta * index - c.c_max;
}

double wrap_axis(double x, double tau) {
  double r = x - std::floor(x / tau + 0.5) * tau;
  // floor() can land one period off when x/tau + 1/2 rounds across an integer.
  if (r >= tau / 2) r -= tau;
  if (r < -tau / 2) r += tau;
  return r;
}

}  // namespace

Constellation make_constellation(int order) {
  int bits = 0;
  switch (order) {
    case 4: bits = 2; break;
    case 16: bits = 4; break;
    case 64: bits = 6; break;
    default:
      throw std::invalid_argument("unsupported QAM order " +
                                  std::to_string(order) +
                                  " (expected 4, 16 or 64)");
  }

  Constellation c;
  c.order = order;
  c.bits_per_symbol = bits;
  c.levels_per_axis = 1 << (bits / 2);
  c.delta = 2.0;
  c.c_max = static_cast<double>(c.levels_per_axis - 1);
  c.tau = 2.0 * (c.c_max + c.delta / 2.0);

  const int half = bits / 2;
  const int axis_mask = c.levels_per_axis - 1;
  c.points.resize(static_cast<std::size_t>(order));
  for (int label = 0; label < order; ++label) {
    const int i_code = (label >> half) & axis_mask;
    const int q_code = label & axis_mask;
    c.points[static_cast<std::size_t>(label)] =
        Complex(level_value(gray_decode(i_code), c),
                level_value(gray_decode(q_code), c));
  }
  return c;
}

std::vector<Complex> map_bits(std::span<const std::uint8_t> bits,
                              const Constellation& c) {
  const auto k = static_cast<std::size_t>(c.bits_per_symbol);
  if (bits.size() % k != 0) {
    throw std::invalid_argument("bit count " + std::to_string(bits.size()) +
                                " is not a multiple of " + std::to_string(k));
  }
  std::vector<Complex> symbols;
  symbols.reserve(bits.size() / k);
  for (std::size_t pos = 0; pos < bits.size(); pos += k) {
    int label = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (bits[pos + b] > 1) throw std::invalid_argument("bit values must be 0 or 1");
      label = (label << 1) | bits[pos + b];
    }
    symbols.push_back(c.points[static_cast<std::size_t>(label)]);
  }
  return symbols;
}

int nearest_label(Complex symbol, const Constellation& c) {
  if (!std::isfinite(symbol.real()) || !std::isfinite(symbol.imag())) {
    throw std::invalid_argument("cannot demap a non-finite symbol");
  }
  const int half = c.bits_per_symbol / 2;
  const int i_code = gray_encode(nearest_level(symbol.real(), c));
  const int q_code = gray_encode(nearest_level(symbol.imag(), c));
  return (i_code << half) | q_code;
}

Bits demap(std::span<const Complex> symbols, const Constellation& c) {
  const int k = c.bits_per_symbol;
  Bits bits;
  bits.reserve(symbols.size() * static_cast<std::size_t>(k));
  for (const Complex& s : symbols) {
    const int label = nearest_label(s, c);
    for (int b = k - 1; b >= 0; --b) {
      bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
    }
  }
  return bits;
}

Complex modulo(Complex a, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("modulo period must be positive and finite");
  }
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
    throw std::invalid_argument("modulo of a non-finite value");
  }
  return {wrap_axis(a.real(), tau), wrap_axis(a.imag(), tau)};
}

bool in_fundamental_region(Complex a, double tau) {
  const double h = tau / 2;
  return a.real() >= -h && a.real() < h && a.imag() >= -h && a.imag() < h;
}

}  // namespace vp
