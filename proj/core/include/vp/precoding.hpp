#pragma once

#include <string_view>

#include "vp/lattice.hpp"
#include "vp/types.hpp"

namespace vp {

enum class Scheme { kCvp, kMmseVp, kRobustVp };

std::string_view scheme_name(Scheme s);
/// Accepts "cvp", "mmse-vp", "robust-vp". Throws std::invalid_argument.
Scheme parse_scheme(std::string_view name);

/// Precoder built from H^H (H H^H + alpha I)^{-1}, together with the lower
/// triangular factor L satisfying L^H L = (H H^H + alpha I)^{-1} that drives
/// the perturbation search.
struct PrecoderSet {
  ComplexMatrix matrix;  // N_t x N_r
  double alpha = 0.0;
  ComplexMatrix factor;  // N_r x N_r, lower triangular
  Scheme scheme = Scheme::kCvp;
};

/// Condition-number ceiling on H H^H + alpha I.
inline constexpr double kMaxGramCondition = 1e12;

/// Effective regularization variance of the robust design,
/// sigma_q2 + sigma_n2 * (1 + sigma_q2).
double effective_variance(double sigma_n2, double sigma_q2);

/// Channel inversion P = H^H (H H^H)^{-1}. Throws SingularChannelError.
PrecoderSet zf_precoder(const ComplexMatrix& H);
/// alpha = N_r * sigma_n2; sigma_n2 == 0 falls back to zf_precoder.
PrecoderSet mmse_precoder(const ComplexMatrix& H, double sigma_n2);
/// alpha = N_r * effective_variance(sigma_n2, sigma_q2); both zero falls back
/// to zf_precoder, sigma_q2 == 0 matches mmse_precoder exactly.
PrecoderSet robust_precoder(const ComplexMatrix& H, double sigma_n2,
                            double sigma_q2);
/// Dispatches on `scheme`.
PrecoderSet make_precoder(Scheme scheme, const ComplexMatrix& H,
                          double sigma_n2, double sigma_q2);

/// For Hermitian positive-definite A, returns lower triangular L with a
/// positive real diagonal and L^H L = A^{-1}. Computed as the inverse of the
/// Cholesky factor C of A = C C^H. Throws std::invalid_argument if A is not
/// Hermitian positive definite.
ComplexMatrix triangular_factor(const ComplexMatrix& A);

/// Perturbation minimizing ||L (u + u')||^2 for the set's factor. For CVP this
/// equals ||P (u + u')||^2 because P^H P = (H H^H)^{-1} for the right inverse.
PerturbationSolution solve_perturbation(const PrecoderSet& ps,
                                        const ComplexVector& u, double tau);

struct ScaledTransmit {
  double beta = 0.0;
  ComplexVector x;  // unit norm
};

/// beta = ||P s||, x = P s / beta. Throws std::invalid_argument when P s
/// vanishes.
ScaledTransmit form_transmit(const PrecoderSet& ps, const ComplexVector& s);

struct PerturbedFrame {
  ComplexVector data;
  ComplexVector perturbation;
  ComplexVector perturbed;
  double beta = 0.0;
  ComplexVector transmit;
  double metric = 0.0;
};

/// Perturbation search followed by normalization.
PerturbedFrame precode(const PrecoderSet& ps, const ComplexVector& u,
                       double tau);

/// Closed-form MSE used for the design: ||(HP - I)s||^2 + N_r beta^2 sigma_n2
/// when sigma_q2 == 0, otherwise the power-error form with N_r beta^2 times
/// effective_variance(sigma_n2, sigma_q2).
double analytic_mse(const PrecoderSet& ps, const ComplexMatrix& H,
                    const ComplexVector& s, double beta, double sigma_n2,
                    double sigma_q2);

/// Exact expectation of ||beta_hat y - s||^2 for beta_hat = beta (1 - g),
/// g ~ N(0, sigma_q2):
///   ||(HP - I)s||^2 + sigma_q2 ||HP s||^2 + N_r beta^2 sigma_n2 (1 + sigma_q2).
double expanded_mse(const PrecoderSet& ps, const ComplexMatrix& H,
                    const ComplexVector& s, double beta, double sigma_n2,
                    double sigma_q2);

}  // namespace vp
