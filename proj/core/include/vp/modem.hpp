#pragma once

#include <span>

#include "vp/types.hpp"

namespace vp {

/// Square QAM on the odd-integer grid (spacing 2, no energy normalization).
///
/// `points[label]` is the symbol for the integer bit label `label`, whose
/// first `bits_per_symbol / 2` bits (MSB first) select the in-phase level and
/// the remaining bits the quadrature level. Each axis is Gray-coded.
struct Constellation {
  int order = 0;
  int bits_per_symbol = 0;
  int levels_per_axis = 0;
  double delta = 0.0;
  double c_max = 0.0;
  /// Modulo period, 2 * (c_max + delta / 2).
  double tau = 0.0;
  std::vector<Complex> points;
};

/// Builds 4-, 16- or 64-QAM. Throws std::invalid_argument otherwise.
Constellation make_constellation(int order);

std::vector<Complex> map_bits(std::span<const std::uint8_t> bits,
                              const Constellation& c);

/// Nearest-point hard decision. Exact midpoints resolve toward the smaller
/// coordinate on each axis, which for the separable grid is the same as
/// "smaller real part, then smaller imaginary part".
Bits demap(std::span<const Complex> symbols, const Constellation& c);

/// Integer bit label of the nearest constellation point.
int nearest_label(Complex symbol, const Constellation& c);

/// Wraps both axes of `a` into [-tau/2, tau/2).
Complex modulo(Complex a, double tau);

/// Half-open membership test for [-tau/2, tau/2)^2.
bool in_fundamental_region(Complex a, double tau);

}  // namespace vp
