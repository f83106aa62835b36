#pragma once

#include "vp/types.hpp"

namespace vp {

/// Closest-point problem  min ||L (u + tau * z)||^2  over Gaussian-integer
/// vectors z.
///
/// `generator` must be lower triangular with a strictly positive real
/// diagonal; row k of L then depends only on entries 0..k, so the search
/// fixes coordinates in ascending index order.
struct LatticeProblem {
  ComplexMatrix generator;
  ComplexVector target;
  double tau = 0.0;
};

struct PerturbationSolution {
  /// tau * coefficients, entries in tau * (Z + jZ).
  ComplexVector perturbation;
  /// Integer Gaussian coefficients, real and imaginary parts interleaved:
  /// (Re z_0, Im z_0, Re z_1, Im z_1, ...).
  std::vector<long> coefficients;
  /// ||L (u + perturbation)||^2, recomputed from the returned vector.
  double metric = 0.0;
};

/// Throws std::invalid_argument if the problem violates its invariants.
void validate(const LatticeProblem& p);

/// ||L (u + shift)||^2.
double lattice_metric(const LatticeProblem& p, const ComplexVector& shift);

/// Exact Schnorr-Euchner sphere decoder. Returns a global minimizer; among
/// equal-metric candidates the first one reached by the zig-zag enumeration
/// is kept.
PerturbationSolution sphere_decode(const LatticeProblem& p);

/// Exhaustive search over per-axis coefficients in [-bound, bound]. Test
/// oracle; limited to N <= 3. Ties go to the lexicographically smallest
/// interleaved coefficient tuple.
PerturbationSolution brute_force_perturbation(const LatticeProblem& p,
                                              int coeff_bound = 2);

}  // namespace vp
