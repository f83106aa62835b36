#include "vp/lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace vp {
namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex v = m.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

// Real 2N x 2N generator with interleaved (Re, Im) coordinates. Each complex
// entry l becomes [[Re l, -Im l], [Im l, Re l]]; with a real diagonal the
// result is still lower triangular.
Eigen::MatrixXd real_generator(const ComplexMatrix& L) {
  const Eigen::Index n = L.rows();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k <= i; ++k) {
      const Complex l = L(i, k);
      R(2 * i, 2 * k) = l.real();
      R(2 * i, 2 * k + 1) = -l.imag();
      R(2 * i + 1, 2 * k) = l.imag();
      R(2 * i + 1, 2 * k + 1) = l.real();
    }
  }
  return R;
}

Eigen::VectorXd interleave(const ComplexVector& v) {
  Eigen::VectorXd r(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    r(2 * i) = v(i).real();
    r(2 * i + 1) = v(i).imag();
  }
  return r;
}

PerturbationSolution make_solution(const LatticeProblem& p,
                                   std::vector<long> coefficients) {
  const Eigen::Index n = p.target.size();
  PerturbationSolution sol;
  sol.perturbation.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sol.perturbation(i) =
        Complex(p.tau * static_cast<double>(coefficients[2 * i]),
                p.tau * static_cast<double>(coefficients[2 * i + 1]));
  }
  sol.coefficients = std::move(coefficients);
  sol.metric = lattice_metric(p, sol.perturbation);
  return sol;
}

}  // namespace

void validate(const LatticeProblem& p) {
  const Eigen::Index n = p.generator.rows();
  if (n < 1 || p.generator.cols() != n) {
    throw std::invalid_argument("lattice generator must be square and non-empty");
  }
  if (p.target.size() != n) {
    throw std::invalid_argument("lattice target has " +
                                std::to_string(p.target.size()) +
                                " entries, generator is " + std::to_string(n) +
                                "x" + std::to_string(n));
  }
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) {
    throw std::invalid_argument("lattice scale tau must be positive and finite");
  }
  if (!all_finite(p.generator) || !all_finite(p.target)) {
    throw std::invalid_argument("lattice problem contains non-finite values");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = p.generator(i, i);
    if (d.imag() != 0.0 || !(d.real() > 0.0)) {
      throw std::invalid_argument("generator diagonal must be real and positive");
    }
    for (Eigen::Index k = i + 1; k < n; ++k) {
      if (p.generator(i, k) != Complex(0.0, 0.0)) {
        throw std::invalid_argument("generator must be lower triangular");
      }
    }
  }
}

double lattice_metric(const LatticeProblem& p, const ComplexVector& shift) {
  return (p.generator * (p.target + shift)).squaredNorm();
}

PerturbationSolution sphere_decode(const LatticeProblem& p) {
  validate(p);
  const Eigen::MatrixXd R = real_generator(p.generator);
  const Eigen::VectorXd t = interleave(p.target);
  const auto dim = static_cast<std::size_t>(R.rows());
  const double tau = p.tau;

  std::vector<long> z(dim, 0);
  std::vector<long> best(dim, 0);
  std::vector<double> center(dim, 0.0);
  std::vector<double> partial(dim + 1, 0.0);  // partial[k]: metric of rows < k
  std::vector<long> step(dim, 0);
  double best_metric = std::numeric_limits<double>::infinity();

  // Row k residual is R_kk * tau * z_k + offset_k, where offset_k collects the
  // target and every already-fixed coordinate.
  auto offset = [&](std::size_t k) {
    double s = R(k, k) * t(k);
    for (std::size_t j = 0; j < k; ++j) {
      s += R(k, j) * (t(j) + tau * static_cast<double>(z[j]));
    }
    return s;
  };
  auto term = [&](std::size_t k) {
    const double r = R(k, k) * tau * static_cast<double>(z[k]) + offset(k);
    return r * r;
  };
  auto enter = [&](std::size_t k) {
    center[k] = -offset(k) / (R(k, k) * tau);
    z[k] = std::lround(center[k]);
    step[k] = (center[k] >= static_cast<double>(z[k])) ? 1 : -1;
  };
  // Schnorr-Euchner zig-zag: z, z+s, z-s, z+2s, ... around the center.
  auto advance = [&](std::size_t k) {
    z[k] += step[k];
    step[k] = -step[k] + (step[k] > 0 ? -1 : 1);
  };

  std::size_t k = 0;
  enter(0);
  for (;;) {
    const double m = partial[k] + term(k);
    if (m < best_metric) {
      if (k + 1 == dim) {
        best_metric = m;
        best = z;
        advance(k);
      } else {
        partial[k + 1] = m;
        ++k;
        enter(k);
      }
    } else {
      // Children at this level are visited in non-decreasing order, so the
      // remaining siblings cannot improve either.
      if (k == 0) break;
      --k;
      advance(k);
    }
  }
  return make_solution(p, std::move(best));
}

PerturbationSolution brute_force_perturbation(const LatticeProblem& p,
                                              int coeff_bound) {
  validate(p);
  const Eigen::Index n = p.target.size();
  if (n > 3) {
    throw std::invalid_argument("brute-force search limited to N <= 3, got N=" +
                                std::to_string(n));
  }
  if (coeff_bound < 1) {
    throw std::invalid_argument("coefficient bound must be at least 1");
  }
  const auto dim = static_cast<std::size_t>(2 * n);
  std::vector<long> z(dim, -coeff_bound);
  std::vector<long> best;
  double best_metric = std::numeric_limits<double>::infinity();
  ComplexVector shift(n);

  // Odometer with the last coordinate fastest gives lexicographic order.
  for (;;) {
    for (Eigen::Index i = 0; i < n; ++i) {
      shift(i) = Complex(p.tau * static_cast<double>(z[2 * i]),
                         p.tau * static_cast<double>(z[2 * i + 1]));
    }
    const double m = lattice_metric(p, shift);
    if (m < best_metric) {
      best_metric = m;
      best = z;
    }
    std::size_t pos = dim;
    while (pos > 0 && z[pos - 1] == coeff_bound) {
      z[pos - 1] = -coeff_bound;
      --pos;
    }
    if (pos == 0) break;
    ++z[pos - 1];
  }
  return make_solution(p, std::move(best));
}

}  // namespace vp
