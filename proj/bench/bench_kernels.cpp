// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include "lpe/kernels.hpp"
#include "lpe/params.hpp"
#include "lpe/trapdoor.hpp"

namespace {

using namespace lpe;

const Modulus& bench_mod() {
  static const Modulus mod(next_prime(u64(1) << 40));
  return mod;
}

ZqMatrix random_zq(std::size_t r, std::size_t c, RngStream& rng) {
  ZqMatrix x(r, c);
  for (auto& v : x.data()) v = rng.uniform_below(bench_mod().q());
  return x;
}

IntMatrix random_small(std::size_t r, std::size_t c, RngStream& rng) {
  IntMatrix x(r, c);
  for (auto& v : x.data()) v = rng.uniform_range(-8, 8);
  return x;
}

struct TrapFixture {
  ZqMatrix a;
  LatticeBasis t;
  ZqMatrix u;
  double sigma;
};

const TrapFixture& trap_fixture() {
  static const TrapFixture fx = [] {
    RngStream rng = RngStream::from_u64(11);
    const Modulus& mod = bench_mod();
    const std::size_t n = 2, m = 2 * n * mod.k();
    TrapGenResult tg = trap_gen(mod, n, m, rng);
    ZqMatrix u = random_zq(n, 16, rng);
    const double sigma = 6.0 * std::sqrt(double(n * mod.k())) * 4.0;
    return TrapFixture{tg.a, tg.t, u, sigma};
  }();
  return fx;
}

template <bool Par>
void BM_MulZqInt(benchmark::State& state) {
  RngStream rng = RngStream::from_u64(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const ZqMatrix a = random_zq(8, n, rng);
  const IntMatrix x = random_small(n, n, rng);
  for (auto _ : state) {
    auto r = Par ? par::mul(bench_mod(), a, x) : serial::mul(bench_mod(), a, x);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Par>
void BM_Orthogonalize(benchmark::State& state) {
  const LatticeBasis& t = trap_fixture().t;
  for (auto _ : state) {
    auto ob = Par ? par::orthogonalize(t.matrix()) : serial::orthogonalize(t.matrix());
    benchmark::DoNotOptimize(ob);
  }
}

template <bool Par>
void BM_SamplePre(benchmark::State& state) {
  const TrapFixture& fx = trap_fixture();
  (void)fx.t.ortho();
  (void)fx.t.unit_reductions();
  RngStream rng = RngStream::from_u64(3);
  for (auto _ : state) {
    auto r = Par ? par::sample_pre(fx.a, fx.t, fx.u, fx.sigma, rng) : serial::sample_pre(fx.a, fx.t, fx.u, fx.sigma, rng);
    benchmark::DoNotOptimize(r);
  }
}

BENCHMARK(BM_MulZqInt<false>)->Arg(128)->Arg(256);
BENCHMARK(BM_MulZqInt<true>)->Arg(128)->Arg(256);
BENCHMARK(BM_Orthogonalize<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Orthogonalize<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePre<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplePre<true>)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
