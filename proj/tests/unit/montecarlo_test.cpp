#include "doctest.h"
#include "support/oracles.hpp"
#include "vp/montecarlo.hpp"

using vp::ComplexMatrix;

namespace {

vp::SimConfig base_config(vp::Scheme scheme) {
  vp::SimConfig cfg;
  cfg.scheme = scheme;
  cfg.snr_grid_db = {0.0, 10.0, 20.0};
  cfg.trials = 300;
  cfg.master_seed = 123;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  auto cfg = base_config(vp::Scheme::kCvp);
  CHECK_NOTHROW(vp::validate(cfg));
  auto bad = cfg;
  bad.nr = 5;
  CHECK_THROWS_AS(vp::validate(bad), std::invalid_argument);
  bad = cfg;
  bad.snr_grid_db = {10.0, 5.0};
  CHECK_THROWS_AS(vp::validate(bad), std::invalid_argument);
  bad = cfg;
  bad.snr_grid_db = {};
  CHECK_THROWS_AS(vp::validate(bad), std::invalid_argument);
  bad = cfg;
  bad.trials = 0;
  CHECK_THROWS_AS(vp::validate(bad), std::invalid_argument);
  bad = cfg;
  bad.order = 32;
  CHECK_THROWS_AS(vp::validate(bad), std::invalid_argument);
}

TEST_CASE("trial streams are independent of each other and reproducible") {
  auto a = vp::trial_stream(1, 0, 0, vp::StreamPurpose::kChannel);
  auto b = vp::trial_stream(1, 0, 0, vp::StreamPurpose::kChannel);
  CHECK(a() == b());
  const auto first = vp::trial_stream(1, 0, 0, vp::StreamPurpose::kChannel)();
  CHECK(vp::trial_stream(1, 0, 0, vp::StreamPurpose::kNoise)() != first);
  CHECK(vp::trial_stream(1, 0, 1, vp::StreamPurpose::kChannel)() != first);
  CHECK(vp::trial_stream(1, 1, 0, vp::StreamPurpose::kChannel)() != first);
  CHECK(vp::trial_stream(2, 0, 0, vp::StreamPurpose::kChannel)() != first);
}

TEST_CASE("noiseless trials are error free for every scheme") {
  for (auto scheme : {vp::Scheme::kCvp, vp::Scheme::kMmseVp, vp::Scheme::kRobustVp}) {
    const auto cfg = base_config(scheme);
    const vp::OperatingPoint noiseless{INFINITY, 0.0, 0.0};
    for (std::uint64_t t = 0; t < 300; ++t) {
      const auto r = vp::run_trial(cfg, noiseless, 0, t);
      CHECK_FALSE(r.aborted);
      CHECK(r.bits == 8);
      CHECK(r.bit_errors == 0);
    }
  }
}

TEST_CASE("run_trial is deterministic") {
  const auto cfg = base_config(vp::Scheme::kRobustVp);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto a = vp::run_trial(cfg, 0, t);
    const auto b = vp::run_trial(cfg, 0, t);
    CHECK(a.bit_errors == b.bit_errors);
  }
}

TEST_CASE("CVP at 0 dB has a moderate error rate") {
  auto cfg = base_config(vp::Scheme::kCvp);
  cfg.snr_grid_db = {0.0};
  cfg.trials = 5000;
  const auto pts = vp::sweep(cfg);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].ber > 0.0);
  CHECK(pts[0].ber < 0.5);
  CHECK(pts[0].bits == 5000 * 8);
}

TEST_CASE("sweep results do not depend on the worker count") {
  auto cfg = base_config(vp::Scheme::kRobustVp);
  cfg.beta_error = vp::BetaErrorModel::fixed_sqr(14.0);
  const auto one = vp::sweep(cfg, 1);
  const auto four = vp::sweep(cfg, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].bit_errors == four[i].bit_errors);
    CHECK(one[i].bits == four[i].bits);
    CHECK(one[i].trials == four[i].trials);
  }
}

TEST_CASE("BER is non-increasing in SNR with exact beta") {
  auto cfg = base_config(vp::Scheme::kMmseVp);
  cfg.snr_grid_db = {0.0, 5.0, 10.0, 15.0, 20.0};
  cfg.trials = 4000;
  const auto pts = vp::sweep(cfg);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].ber <= pts[i - 1].ber + pts[i].ci_half_width + pts[i - 1].ci_half_width);
  }
}

TEST_CASE("early stop honours the error floor and the 1% minimum") {
  auto cfg = base_config(vp::Scheme::kCvp);
  cfg.snr_grid_db = {0.0};
  cfg.trials = 20000;
  cfg.min_bit_errors = 100;
  const auto pts = vp::sweep(cfg);
  CHECK(pts[0].bit_errors >= 100);
  CHECK(pts[0].trials >= 200);
  CHECK(pts[0].trials < 20000);
  const auto again = vp::sweep(cfg, 3);
  CHECK(again[0].trials == pts[0].trials);
  CHECK(again[0].bit_errors == pts[0].bit_errors);
}

TEST_CASE("confidence interval") {
  vp::BerPoint p;
  p.bits = 10000;
  p.bit_errors = 100;
  vp::finalize(p);
  CHECK(p.ber == doctest::Approx(0.01));
  CHECK(p.ci_half_width == doctest::Approx(1.96 * std::sqrt(0.01 * 0.99 / 10000)));
  CHECK(p.ci_reliable);
  p.bit_errors = 0;
  vp::finalize(p);
  CHECK(p.ber == 0.0);
  CHECK(p.ci_half_width == 0.0);
  CHECK_FALSE(p.ci_reliable);
}

TEST_CASE("empirical MSE") {
  const vp::Constellation c = vp::make_constellation(16);
  std::mt19937_64 rng(3);
  const ComplexMatrix H = vp::oracle::random_channel(2, 4, rng);
  const auto u = vp::oracle::random_symbols(2, c, rng);

  const auto zf = vp::zf_precoder(H);
  const auto f = vp::precode(zf, u, c.tau);
  const double sigma_q2 = 0.0398;
  const double emp = vp::empirical_mse(H, u, zf, c.tau, 0.01, sigma_q2, 100000, 5);
  const double exact = vp::expanded_mse(zf, H, f.perturbed, f.beta, 0.01, sigma_q2);
  CHECK(std::abs(emp - exact) < 0.02 * exact);

  CHECK_THROWS_AS(vp::empirical_mse(H, u, zf, c.tau, 0.01, 0.0, 9999, 5),
                  std::invalid_argument);
  CHECK(vp::empirical_mse(H, u, zf, c.tau, 0.01, 0.0, 20000, 9) ==
        vp::empirical_mse(H, u, zf, c.tau, 0.01, 0.0, 20000, 9));
}
