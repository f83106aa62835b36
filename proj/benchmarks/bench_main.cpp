#include <benchmark/benchmark.h>

#include "vp/link.hpp"
#include "vp/montecarlo.hpp"
#include "vp/precoding.hpp"

namespace {

struct Instance {
  vp::ComplexMatrix H;
  vp::ComplexVector u;
};

Instance random_instance(int nt, int nr, const vp::Constellation& c, std::uint64_t seed) {
  vp::Rng rng(seed);
  Instance in{vp::draw_channel(nt, nr, rng).H, vp::ComplexVector(nr)};
  std::uniform_int_distribution<int> pick(0, c.order - 1);
  for (int i = 0; i < nr; ++i) in.u(i) = c.points[static_cast<std::size_t>(pick(rng))];
  return in;
}

void BM_SphereDecode(benchmark::State& state) {
  const int nr = static_cast<int>(state.range(0));
  const vp::Constellation c = vp::make_constellation(16);
  const Instance in = random_instance(nr, nr, c, 42);
  const vp::PrecoderSet ps = vp::mmse_precoder(in.H, 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vp::solve_perturbation(ps, in.u, c.tau));
  }
}
BENCHMARK(BM_SphereDecode)->Arg(2)->Arg(4)->Arg(6);

void BM_BruteForce2(benchmark::State& state) {
  const vp::Constellation c = vp::make_constellation(16);
  const Instance in = random_instance(4, 2, c, 7);
  const vp::PrecoderSet ps = vp::zf_precoder(in.H);
  const vp::LatticeProblem p{ps.factor, in.u, c.tau};
  for (auto _ : state) {
    benchmark::DoNotOptimize(vp::brute_force_perturbation(p, 2));
  }
}
BENCHMARK(BM_BruteForce2);

void BM_RobustPrecoder(benchmark::State& state) {
  const int nt = static_cast<int>(state.range(0));
  const vp::Constellation c = vp::make_constellation(16);
  const Instance in = random_instance(nt, 2, c, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vp::robust_precoder(in.H, 0.01, 0.0398));
  }
}
BENCHMARK(BM_RobustPrecoder)->Arg(2)->Arg(4)->Arg(8);

void BM_Trial(benchmark::State& state) {
  vp::SimConfig cfg;
  cfg.scheme = vp::Scheme::kRobustVp;
  cfg.snr_grid_db = {20.0};
  cfg.beta_error = vp::BetaErrorModel::fixed_sqr(14.0);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vp::run_trial(cfg, 0, trial++));
  }
}
BENCHMARK(BM_Trial);

}  // namespace
BENCHMARK_MAIN();
