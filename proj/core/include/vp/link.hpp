#pragma once

#include <random>

#include "vp/modem.hpp"
#include "vp/rng.hpp"
#include "vp/types.hpp"

namespace vp {

struct ChannelRealization {
  ComplexMatrix H;  // N_r x N_t
  int nt() const { return static_cast<int>(H.cols()); }
  int nr() const { return static_cast<int>(H.rows()); }
};

/// Noise level in both forms; SNR = 1 / sigma_n2 under unit transmit power.
struct NoiseConfig {
  double snr_db = 0.0;
  double sigma_n2 = 1.0;

  static NoiseConfig from_snr_db(double snr_db);
};

/// Distribution of the relative power-scaling error (beta - beta_hat) / beta.
struct BetaErrorModel {
  enum class Mode { kExact, kFixedSqr, kNoiseAdaptive };

  Mode mode = Mode::kExact;
  double sqr_db = 0.0;    // kFixedSqr
  double exponent = 1.0;  // kNoiseAdaptive: sigma_q2 = sigma_n2^exponent

  static BetaErrorModel exact();
  static BetaErrorModel fixed_sqr(double sqr_db);
  static BetaErrorModel noise_adaptive(double exponent);

  /// Relative error variance at the given noise variance.
  double sigma_q2(double sigma_n2) const;
};

/// i.i.d. CN(0, 1) entries. Throws std::invalid_argument unless
/// 1 <= nr <= nt.
ChannelRealization draw_channel(int nt, int nr, Rng& rng);

/// Circularly symmetric complex Gaussian with E|n|^2 = variance.
Complex complex_gaussian(double variance, Rng& rng);

/// y = H x + n. `x` must have unit norm (to 1e-9).
ComplexVector apply_channel(const ComplexMatrix& H, const ComplexVector& x,
                            double sigma_n2, Rng& rng);

/// Draws the relative error g ~ N(0, sigma_q2), redrawing while g >= 1.
double draw_relative_error(double sigma_q2, Rng& rng);

/// beta_hat = beta * (1 - g).
double perturb_beta(double beta, double sigma_q2, Rng& rng);

struct ReceivedFrame {
  std::vector<Complex> symbols;  // after scaling and modulo
  Bits bits;
};

/// Per-user scale by beta_hat, fold with the constellation's modulo period,
/// then hard-demap.
ReceivedFrame receive(const ComplexVector& y, double beta_hat,
                      const Constellation& c);

}  // namespace vp
