#include "vp/precoding.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

namespace vp {
namespace {

void check_channel(const ComplexMatrix& H) {
  if (H.rows() < 1 || H.cols() < H.rows()) {
    throw std::invalid_argument("channel must be N_r x N_t with 1 <= N_r <= N_t, got " +
                                std::to_string(H.rows()) + "x" +
                                std::to_string(H.cols()));
  }
}

// Inverse of the Cholesky factor, with the strict upper part forced to zero
// and the diagonal forced real.
ComplexMatrix lower_inverse(const Eigen::LLT<ComplexMatrix>& llt) {
  const Eigen::Index n = llt.matrixLLT().rows();
  ComplexMatrix inv = llt.matrixL().solve(ComplexMatrix::Identity(n, n));
  ComplexMatrix L = inv.triangularView<Eigen::Lower>();
  for (Eigen::Index i = 0; i < n; ++i) L(i, i) = Complex(L(i, i).real(), 0.0);
  return L;
}

PrecoderSet regularized(const ComplexMatrix& H, double alpha, Scheme scheme) {
  check_channel(H);
  const Eigen::Index nr = H.rows();
  ComplexMatrix gram = H * H.adjoint();
  gram.diagonal().array() += alpha;

  const Eigen::LLT<ComplexMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularChannelError("Cholesky factorization of channel Gram matrix failed");
  }
  // rcond() is Eigen's 1-norm reciprocal condition estimate.
  if (!(llt.rcond() * kMaxGramCondition >= 1.0)) {
    throw SingularChannelError("channel Gram matrix is ill-conditioned");
  }

  PrecoderSet ps;
  ps.alpha = alpha;
  ps.scheme = scheme;
  ps.matrix = H.adjoint() * llt.solve(ComplexMatrix::Identity(nr, nr));
  ps.factor = lower_inverse(llt);
  return ps;
}

void check_variance(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kCvp: return "cvp";
    case Scheme::kMmseVp: return "mmse-vp";
    case Scheme::kRobustVp: return "robust-vp";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "cvp") return Scheme::kCvp;
  if (name == "mmse-vp") return Scheme::kMmseVp;
  if (name == "robust-vp") return Scheme::kRobustVp;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

double effective_variance(double sigma_n2, double sigma_q2) {
  return sigma_q2 + sigma_n2 * (1.0 + sigma_q2);
}

PrecoderSet zf_precoder(const ComplexMatrix& H) {
  return regularized(H, 0.0, Scheme::kCvp);
}

PrecoderSet mmse_precoder(const ComplexMatrix& H, double sigma_n2) {
  check_variance(sigma_n2, "noise variance");
  if (sigma_n2 == 0.0) return zf_precoder(H);
  return regularized(H, static_cast<double>(H.rows()) * sigma_n2, Scheme::kMmseVp);
}

PrecoderSet robust_precoder(const ComplexMatrix& H, double sigma_n2,
                            double sigma_q2) {
  check_variance(sigma_n2, "noise variance");
  check_variance(sigma_q2, "power-scaling error variance");
  if (sigma_q2 == 0.0) return mmse_precoder(H, sigma_n2);
  return regularized(H,
                     static_cast<double>(H.rows()) *
                         effective_variance(sigma_n2, sigma_q2),
                     Scheme::kRobustVp);
}

PrecoderSet make_precoder(Scheme scheme, const ComplexMatrix& H,
                          double sigma_n2, double sigma_q2) {
  switch (scheme) {
    case Scheme::kCvp: return zf_precoder(H);
    case Scheme::kMmseVp: return mmse_precoder(H, sigma_n2);
    case Scheme::kRobustVp: return robust_precoder(H, sigma_n2, sigma_q2);
  }
  throw std::invalid_argument("unknown scheme");
}

ComplexMatrix triangular_factor(const ComplexMatrix& A) {
  const Eigen::Index n = A.rows();
  if (n < 1 || A.cols() != n) {
    throw std::invalid_argument("triangular_factor expects a non-empty square matrix");
  }
  const double scale = A.cwiseAbs().maxCoeff();
  if (!std::isfinite(scale) ||
      (A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("triangular_factor expects a Hermitian matrix");
  }
  const Eigen::LLT<ComplexMatrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("matrix is not positive definite");
  }
  return lower_inverse(llt);
}

PerturbationSolution solve_perturbation(const PrecoderSet& ps,
                                        const ComplexVector& u, double tau) {
  return sphere_decode(LatticeProblem{ps.factor, u, tau});
}

ScaledTransmit form_transmit(const PrecoderSet& ps, const ComplexVector& s) {
  if (s.size() != ps.matrix.cols()) {
    throw std::invalid_argument("perturbed vector length does not match precoder");
  }
  ComplexVector ps_s = ps.matrix * s;
  const double beta = ps_s.norm();
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("precoded vector has zero or non-finite power");
  }
  return {beta, ps_s / beta};
}

PerturbedFrame precode(const PrecoderSet& ps, const ComplexVector& u,
                       double tau) {
  PerturbationSolution sol = solve_perturbation(ps, u, tau);
  PerturbedFrame f;
  f.data = u;
  f.perturbation = std::move(sol.perturbation);
  f.perturbed = f.data + f.perturbation;
  f.metric = sol.metric;
  ScaledTransmit tx = form_transmit(ps, f.perturbed);
  f.beta = tx.beta;
  f.transmit = std::move(tx.x);
  return f;
}

double analytic_mse(const PrecoderSet& ps, const ComplexMatrix& H,
                    const ComplexVector& s, double beta, double sigma_n2,
                    double sigma_q2) {
  const auto nr = static_cast<double>(H.rows());
  const double interference = ((H * ps.matrix) * s - s).squaredNorm();
  const double variance =
      sigma_q2 == 0.0 ? sigma_n2 : effective_variance(sigma_n2, sigma_q2);
  return interference + nr * beta * beta * variance;
}

double expanded_mse(const PrecoderSet& ps, const ComplexMatrix& H,
                    const ComplexVector& s, double beta, double sigma_n2,
                    double sigma_q2) {
  const auto nr = static_cast<double>(H.rows());
  const ComplexVector hps = (H * ps.matrix) * s;
  return (hps - s).squaredNorm() + sigma_q2 * hps.squaredNorm() +
         nr * beta * beta * sigma_n2 * (1.0 + sigma_q2);
}

}  // namespace vp
