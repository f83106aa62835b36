#include "vp/link.hpp"

#include <cmath>
#include <string>

namespace vp {

NoiseConfig NoiseConfig::from_snr_db(double snr_db) {
  return {snr_db, std::pow(10.0, -snr_db / 10.0)};
}

BetaErrorModel BetaErrorModel::exact() { return {}; }

BetaErrorModel BetaErrorModel::fixed_sqr(double sqr_db) {
  if (!std::isfinite(sqr_db)) throw std::invalid_argument("SQR must be finite");
  BetaErrorModel m;
  m.mode = Mode::kFixedSqr;
  m.sqr_db = sqr_db;
  return m;
}

BetaErrorModel BetaErrorModel::noise_adaptive(double exponent) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("noise-adaptive exponent must be positive");
  }
  BetaErrorModel m;
  m.mode = Mode::kNoiseAdaptive;
  m.exponent = exponent;
  return m;
}

double BetaErrorModel::sigma_q2(double sigma_n2) const {
  switch (mode) {
    case Mode::kExact: return 0.0;
    case Mode::kFixedSqr: return std::pow(10.0, -sqr_db / 10.0);
    case Mode::kNoiseAdaptive: return std::pow(sigma_n2, exponent);
  }
  return 0.0;
}

Complex complex_gaussian(double variance, Rng& rng) {
  if (variance == 0.0) return {0.0, 0.0};
  std::normal_distribution<double> axis(0.0, std::sqrt(variance / 2.0));
  const double re = axis(rng);
  const double im = axis(rng);
  return {re, im};
}

ChannelRealization draw_channel(int nt, int nr, Rng& rng) {
  if (nr < 1 || nt < nr) {
    throw std::invalid_argument("need 1 <= N_r <= N_t, got N_t=" +
                                std::to_string(nt) + " N_r=" + std::to_string(nr));
  }
  ChannelRealization ch;
  ch.H.resize(nr, nt);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) ch.H(i, j) = complex_gaussian(1.0, rng);
  }
  return ch;
}

ComplexVector apply_channel(const ComplexMatrix& H, const ComplexVector& x,
                            double sigma_n2, Rng& rng) {
  if (x.size() != H.cols()) {
    throw std::invalid_argument("transmit vector has " + std::to_string(x.size()) +
                                " entries, channel has " +
                                std::to_string(H.cols()) + " inputs");
  }
  if (std::abs(x.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("transmit vector must have unit norm");
  }
  if (!(sigma_n2 >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
  ComplexVector y = H * x;
  if (sigma_n2 > 0.0) {
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += complex_gaussian(sigma_n2, rng);
  }
  return y;
}

double draw_relative_error(double sigma_q2, Rng& rng) {
  if (sigma_q2 == 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, std::sqrt(sigma_q2));
  double g = dist(rng);
  while (g >= 1.0) g = dist(rng);
  return g;
}

double perturb_beta(double beta, double sigma_q2, Rng& rng) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return beta * (1.0 - draw_relative_error(sigma_q2, rng));
}

ReceivedFrame receive(const ComplexVector& y, double beta_hat,
                      const Constellation& c) {
  if (!(beta_hat > 0.0)) throw std::invalid_argument("beta_hat must be positive");
  ReceivedFrame out;
  out.symbols.reserve(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out.symbols.push_back(modulo(beta_hat * y(i), c.tau));
  }
  out.bits = demap(out.symbols, c);
  return out;
}

}  // namespace vp
