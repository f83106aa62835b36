#pragma once

// Reference computations used only by tests. Each one takes a different route
// from the library code it checks: enumeration instead of per-axis slicing,
// Gauss-Jordan elimination instead of Cholesky, and so on.

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "vp/link.hpp"
#include "vp/modem.hpp"
#include "vp/types.hpp"

namespace vp::oracle {

/// Gauss-Jordan inverse with partial pivoting.
inline ComplexMatrix gauss_jordan_inverse(ComplexMatrix a) {
  const Eigen::Index n = a.rows();
  ComplexMatrix inv = ComplexMatrix::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) == 0.0) throw std::runtime_error("singular");
    a.row(col).swap(a.row(pivot));
    inv.row(col).swap(inv.row(pivot));
    const Complex p = a(col, col);
    a.row(col) /= p;
    inv.row(col) /= p;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      a.row(r) -= f * a.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

/// H^H (H H^H + alpha I)^{-1} via elimination.
inline ComplexMatrix regularized_inverse(const ComplexMatrix& H, double alpha) {
  ComplexMatrix g = H * H.adjoint();
  g.diagonal().array() += alpha;
  return H.adjoint() * gauss_jordan_inverse(g);
}

/// Nearest constellation label by scanning every point. Ties: smaller real
/// part, then smaller imaginary part.
inline int nearest_label_by_scan(Complex s, const Constellation& c) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int label = 0; label < c.order; ++label) {
    const Complex p = c.points[static_cast<std::size_t>(label)];
    const double d = std::norm(s - p);
    bool take = d < best_d;
    if (!take && d == best_d) {
      const Complex q = c.points[static_cast<std::size_t>(best)];
      take = p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag());
    }
    if (take) {
      best = label;
      best_d = d;
    }
  }
  return best;
}

/// Wraps one axis by trying nearby period counts and keeping the one that
/// lands in [-tau/2, tau/2).
inline double wrap_by_search(double x, double tau) {
  const auto k0 = static_cast<long>(std::floor(x / tau));
  for (long k = k0 - 2; k <= k0 + 2; ++k) {
    const double r = x - static_cast<double>(k) * tau;
    if (r >= -tau / 2 && r < tau / 2) return r;
  }
  throw std::runtime_error("no period found");
}

inline ComplexMatrix random_channel(int nr, int nt, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix h(nr, nt);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) h(i, j) = Complex(g(rng), g(rng));
  return h;
}

inline ComplexVector random_symbols(int n, const Constellation& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, c.order - 1);
  ComplexVector u(n);
  for (int i = 0; i < n; ++i) u(i) = c.points[static_cast<std::size_t>(pick(rng))];
  return u;
}

/// Hermitian positive-definite matrix B B^H + n I from a random B.
inline ComplexMatrix random_hpd(int n, std::mt19937_64& rng) {
  const ComplexMatrix b = random_channel(n, n, rng);
  ComplexMatrix a = b * b.adjoint();
  a.diagonal().array() += static_cast<double>(n);
  return a;
}

}  // namespace vp::oracle
