#include "vp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace vp {
namespace {

TrialResult run_trial_impl(const SimConfig& cfg, const Constellation& c,
                           const OperatingPoint& point, std::size_t snr_index,
                           std::uint64_t trial_index) {
  const std::uint64_t seed = cfg.master_seed;
  Rng channel_rng = trial_stream(seed, snr_index, trial_index, StreamPurpose::kChannel);

  ChannelRealization ch;
  PrecoderSet ps;
  bool ok = false;
  for (int attempt = 0; attempt <= kMaxChannelRedraws && !ok; ++attempt) {
    ch = draw_channel(cfg.nt, cfg.nr, channel_rng);
    try {
      ps = make_precoder(cfg.scheme, ch.H, point.sigma_n2, point.sigma_q2);
      ok = true;
    } catch (const SingularChannelError&) {
    }
  }
  TrialResult result;
  if (!ok) {
    result.aborted = true;
    return result;
  }

  Rng data_rng = trial_stream(seed, snr_index, trial_index, StreamPurpose::kData);
  const auto nbits = static_cast<std::size_t>(cfg.nr * c.bits_per_symbol);
  Bits sent(nbits);
  std::bernoulli_distribution coin(0.5);
  for (auto& b : sent) b = coin(data_rng) ? 1 : 0;

  const std::vector<Complex> symbols = map_bits(sent, c);
  const ComplexVector u =
      Eigen::Map<const ComplexVector>(symbols.data(), static_cast<Eigen::Index>(symbols.size()));

  PerturbedFrame frame;
  try {
    frame = precode(ps, u, c.tau);
  } catch (const std::invalid_argument&) {
    result.aborted = true;
    return result;
  }

  Rng noise_rng = trial_stream(seed, snr_index, trial_index, StreamPurpose::kNoise);
  const ComplexVector y = apply_channel(ch.H, frame.transmit, point.sigma_n2, noise_rng);

  Rng beta_rng = trial_stream(seed, snr_index, trial_index, StreamPurpose::kBetaError);
  const double beta_hat = perturb_beta(frame.beta, point.sigma_q2, beta_rng);

  const ReceivedFrame rx = receive(y, beta_hat, c);
  for (std::size_t i = 0; i < nbits; ++i) {
    result.bit_errors += (rx.bits[i] != sent[i]) ? 1 : 0;
  }
  result.bits = static_cast<std::int64_t>(nbits);
  return result;
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.nr < 1 || cfg.nt < cfg.nr) {
    throw std::invalid_argument("need 1 <= N_r <= N_t, got N_t=" +
                                std::to_string(cfg.nt) + " N_r=" +
                                std::to_string(cfg.nr));
  }
  make_constellation(cfg.order);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.min_bit_errors < 0) throw std::invalid_argument("min_bit_errors must be >= 0");
  if (cfg.snr_grid_db.empty()) throw std::invalid_argument("SNR grid is empty");
  for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
    if (!std::isfinite(cfg.snr_grid_db[i])) {
      throw std::invalid_argument("SNR grid entries must be finite");
    }
    if (i > 0 && !(cfg.snr_grid_db[i] > cfg.snr_grid_db[i - 1])) {
      throw std::invalid_argument("SNR grid must be strictly increasing");
    }
  }
}

OperatingPoint operating_point(const SimConfig& cfg, std::size_t snr_index) {
  const NoiseConfig noise = NoiseConfig::from_snr_db(cfg.snr_grid_db.at(snr_index));
  return {noise.snr_db, noise.sigma_n2, cfg.beta_error.sigma_q2(noise.sigma_n2)};
}

Rng trial_stream(std::uint64_t master_seed, std::uint64_t snr_index,
                 std::uint64_t trial_index, StreamPurpose purpose) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ snr_index);
  h = splitmix64(h ^ trial_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return Rng(h);
}

TrialResult run_trial(const SimConfig& cfg, const OperatingPoint& point,
                      std::size_t snr_index, std::uint64_t trial_index) {
  return run_trial_impl(cfg, make_constellation(cfg.order), point, snr_index,
                        trial_index);
}

TrialResult run_trial(const SimConfig& cfg, std::size_t snr_index,
                      std::uint64_t trial_index) {
  return run_trial(cfg, operating_point(cfg, snr_index), snr_index, trial_index);
}

void finalize(BerPoint& p) {
  p.ber = p.bits > 0 ? static_cast<double>(p.bit_errors) / static_cast<double>(p.bits) : 0.0;
  p.ci_half_width =
      p.bits > 0 ? 1.96 * std::sqrt(p.ber * (1.0 - p.ber) / static_cast<double>(p.bits))
                 : 0.0;
  p.ci_reliable = p.bit_errors >= 20;
}

std::vector<BerPoint> sweep(const SimConfig& cfg, unsigned workers) {
  validate(cfg);
  workers = std::max(1u, workers);
  const Constellation c = make_constellation(cfg.order);
  const std::int64_t batch = std::max<std::int64_t>(1, cfg.trials / 100);
  const std::int64_t min_trials = (cfg.trials + 99) / 100;

  std::vector<BerPoint> points;
  points.reserve(cfg.snr_grid_db.size());
  std::vector<TrialResult> results;

  for (std::size_t si = 0; si < cfg.snr_grid_db.size(); ++si) {
    const OperatingPoint op = operating_point(cfg, si);
    BerPoint pt;
    pt.scheme = cfg.scheme;
    pt.snr_db = op.snr_db;
    pt.sigma_q2 = op.sigma_q2;
    pt.seed = cfg.master_seed;

    for (std::int64_t start = 0; start < cfg.trials; start += batch) {
      const std::int64_t count = std::min(batch, cfg.trials - start);
      results.assign(static_cast<std::size_t>(count), TrialResult{});

      auto work = [&](std::int64_t lane, std::int64_t lanes) {
        for (std::int64_t i = lane; i < count; i += lanes) {
          results[static_cast<std::size_t>(i)] =
              run_trial_impl(cfg, c, op, si, static_cast<std::uint64_t>(start + i));
        }
      };
      const auto lanes = std::min<std::int64_t>(workers, count);
      if (lanes <= 1) {
        work(0, 1);
      } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(lanes));
        for (std::int64_t w = 0; w < lanes; ++w) pool.emplace_back(work, w, lanes);
      }

      for (const TrialResult& r : results) {
        ++pt.trials;
        if (r.aborted) {
          ++pt.aborted_trials;
          continue;
        }
        pt.bits += r.bits;
        pt.bit_errors += r.bit_errors;
      }
      if (cfg.min_bit_errors > 0 && pt.bit_errors >= cfg.min_bit_errors &&
          pt.trials >= min_trials) {
        break;
      }
    }

    if (static_cast<double>(pt.aborted_trials) >
        kMaxAbortFraction * static_cast<double>(pt.trials)) {
      throw SweepError("SNR " + std::to_string(pt.snr_db) + " dB: " +
                       std::to_string(pt.aborted_trials) + " of " +
                       std::to_string(pt.trials) + " trials aborted");
    }
    finalize(pt);
    points.push_back(pt);
  }
  return points;
}

double empirical_mse(const ComplexMatrix& H, const ComplexVector& u,
                     const PrecoderSet& ps, double tau, double sigma_n2,
                     double sigma_q2, std::int64_t samples, std::uint64_t seed) {
  if (samples < 10000) {
    throw std::invalid_argument("empirical_mse needs at least 10^4 samples");
  }
  const PerturbedFrame frame = precode(ps, u, tau);
  const ComplexVector clean = H * frame.transmit;
  Rng rng(splitmix64(seed));

  double sum = 0.0;
  ComplexVector d(clean.size());
  for (std::int64_t k = 0; k < samples; ++k) {
    const double beta_hat = frame.beta * (1.0 - draw_relative_error(sigma_q2, rng));
    for (Eigen::Index i = 0; i < clean.size(); ++i) {
      const Complex y = clean(i) + complex_gaussian(sigma_n2, rng);
      d(i) = beta_hat * y - frame.perturbed(i);
    }
    sum += d.squaredNorm();
  }
  return sum / static_cast<double>(samples);
}

}  // namespace vp
