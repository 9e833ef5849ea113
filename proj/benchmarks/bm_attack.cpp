#include "wiener/attack.hpp"
#include "wiener/mitm_table.hpp"
#include "wiener/rsa.hpp"

#include <benchmark/benchmark.h>

#include <array>

using namespace wiener;

namespace {

constexpr std::array<unsigned, 3> kPrimes{2, 3, 5};

// A key far outside every bound used below, so searches run to exhaustion.
const KeyPair& far_key() {
  static const KeyPair key = keygen_weak(128, 1 << 20, 1);
  return key;
}

void BM_TableBuild(benchmark::State& state) {
  const auto R = static_cast<std::uint32_t>(state.range(0));
  const auto& n = far_key().pub.n;
  const unsigned w = fingerprint_width(R, R);
  for (auto _ : state) {
    auto table = FingerprintTable::build(3, n, R, kPrimes, w);
    benchmark::DoNotOptimize(table.bytes());
  }
  state.SetItemsProcessed(state.iterations() * R);
}
BENCHMARK(BM_TableBuild)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_Probe(benchmark::State& state) {
  const std::uint32_t R = 1 << 16;
  const auto& n = far_key().pub.n;
  const auto table = FingerprintTable::build(3, n, R, kPrimes, fingerprint_width(R, R));
  const bool gcd_rows = state.range(0) != 0;
  Nat target = 12345;
  std::vector<std::uint32_t> hits;
  std::uint64_t s = 1;
  for (auto _ : state) {
    hits.clear();
    table.probe(target, s++, gcd_rows, hits);
    benchmark::DoNotOptimize(hits.data());
  }
}
BENCHMARK(BM_Probe)->Arg(0)->Arg(1);

void BM_Search(benchmark::State& state, Variant variant) {
  const auto bound = static_cast<std::uint64_t>(state.range(0));
  AttackConfig cfg;
  cfg.variant = variant;
  cfg.r_max = bound;
  cfg.s_max = bound;
  cfg.m_candidates = std::vector<int>{1};
  for (auto _ : state) {
    auto result = run_attack(far_key().pub, cfg);
    benchmark::DoNotOptimize(result.outcome);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_Search, mitm, Variant::mitm)
    ->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNLogN);
BENCHMARK_CAPTURE(BM_Search, vvt, Variant::vvt)
    ->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

}  // namespace

BENCHMARK_MAIN();
