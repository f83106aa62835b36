#pragma once

#include <cstdint>
#include <vector>

#include "vp/link.hpp"
#include "vp/modem.hpp"
#include "vp/precoding.hpp"

namespace vp {

struct SimConfig {
  int nt = 4;
  int nr = 2;
  int order = 16;
  Scheme scheme = Scheme::kRobustVp;
  std::vector<double> snr_grid_db;
  BetaErrorModel beta_error;
  std::int64_t trials = 10000;
  /// Early-stop floor; 0 disables early stopping.
  std::int64_t min_bit_errors = 0;
  std::uint64_t master_seed = 1;
};

/// Throws std::invalid_argument on an inconsistent configuration.
void validate(const SimConfig& cfg);

/// Noise and power-error variances at one grid point. `sigma_n2` may be set
/// to zero directly to simulate a noiseless link.
struct OperatingPoint {
  double snr_db = 0.0;
  double sigma_n2 = 1.0;
  double sigma_q2 = 0.0;
};

OperatingPoint operating_point(const SimConfig& cfg, std::size_t snr_index);

enum class StreamPurpose : std::uint64_t {
  kChannel = 1,
  kData = 2,
  kNoise = 3,
  kBetaError = 4,
};

/// Independent generator for one (point, trial, purpose) triple, derived from
/// the master seed by a splitmix64 hash chain.
Rng trial_stream(std::uint64_t master_seed, std::uint64_t snr_index,
                 std::uint64_t trial_index, StreamPurpose purpose);

struct TrialResult {
  std::int64_t bit_errors = 0;
  std::int64_t bits = 0;
  bool aborted = false;
};

/// Redraws allowed for a singular channel before a trial is aborted.
inline constexpr int kMaxChannelRedraws = 16;

/// One frame through the full chain: channel, precoder, data, perturbation,
/// normalization, noise, beta error, receiver, bit comparison.
TrialResult run_trial(const SimConfig& cfg, const OperatingPoint& point,
                      std::size_t snr_index, std::uint64_t trial_index);
TrialResult run_trial(const SimConfig& cfg, std::size_t snr_index,
                      std::uint64_t trial_index);

struct BerPoint {
  Scheme scheme = Scheme::kCvp;
  double snr_db = 0.0;
  double sigma_q2 = 0.0;
  std::int64_t trials = 0;  // executed, including aborted ones
  std::int64_t aborted_trials = 0;
  std::int64_t bits = 0;
  std::int64_t bit_errors = 0;
  double ber = 0.0;
  /// 95% normal-approximation half-width.
  double ci_half_width = 0.0;
  /// False when fewer than 20 errors back the normal approximation.
  bool ci_reliable = false;
  std::uint64_t seed = 0;
};

/// Largest tolerated fraction of aborted trials per point.
inline constexpr double kMaxAbortFraction = 1e-3;

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fills in ber, ci_half_width and ci_reliable from the counters.
void finalize(BerPoint& p);

/// Runs every grid point. Trials are processed in fixed batches of
/// max(1, trials / 100); within a batch they are spread over `workers`
/// threads and reduced in index order, so results do not depend on the worker
/// count. Throws SweepError if a point aborts more than kMaxAbortFraction of
/// its trials.
std::vector<BerPoint> sweep(const SimConfig& cfg, unsigned workers = 1);

/// Mean of ||beta_hat y - (u + u')||^2 over `samples` fresh noise and
/// power-error draws with (H, u, P, u', beta) held fixed. `samples` must be
/// at least 10^4.
double empirical_mse(const ComplexMatrix& H, const ComplexVector& u,
                     const PrecoderSet& ps, double tau, double sigma_n2,
                     double sigma_q2, std::int64_t samples, std::uint64_t seed);

}  // namespace vp
