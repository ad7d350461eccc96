#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fdp/analysis.hpp"
#include "fdp/kernels.hpp"

namespace {

std::vector<fdp::BigInt> random_vector(std::size_t n, const fdp::FormatSpec& fmt,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(1, (std::uint64_t{1} << 30) - 1);
  std::vector<fdp::BigInt> v(n);
  for (auto& e : v)
    e = fdp::encode(
        fdp::UnpackedReal::finite((rng() & 1) != 0, fdp::BigInt(dist(rng)), -15), fmt);
  return v;
}

void BM_fdp_dot(benchmark::State& state) {
  const auto fmt = fdp::FormatSpec::binary64();
  const fdp::AccumConfig cfg{30, 30, -30};
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vector(n, fmt, 1), y = random_vector(n, fmt, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fdp::fdp(x, y, fmt, cfg, fmt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_fdp_dot)->Arg(64)->Arg(512)->Arg(4096);

void BM_fma_chain_dot(benchmark::State& state) {
  const auto fmt = fdp::FormatSpec::binary64();
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vector(n, fmt, 1), y = random_vector(n, fmt, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fdp::fma_chain_dot(x, y, fmt, fmt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_fma_chain_dot)->Arg(64)->Arg(512)->Arg(4096);

void BM_decode_encode(benchmark::State& state) {
  const auto fmt = state.range(0) == 0 ? fdp::FormatSpec::binary64()
                                       : fdp::FormatSpec::posit(32, 2);
  std::mt19937_64 rng(7);
  std::vector<fdp::BigInt> bits(1024);
  for (auto& b : bits) b = fdp::BigInt(rng() & ((std::uint64_t{1} << fmt.width()) - 1));
  for (auto _ : state)
    for (const auto& b : bits)
      benchmark::DoNotOptimize(fdp::encode(fdp::decode(b, fmt), fmt));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_decode_encode)->Arg(0)->Arg(1);

void BM_gemm_fdp(benchmark::State& state) {
  const auto fmt = fdp::FormatSpec::binary64();
  const auto kernel = fdp::KernelSpec::fdp(fdp::AccumConfig{30, 30, -30}, fmt);
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> dist(1, (std::uint64_t{1} << 20) - 1);
  auto mat = [&] {
    auto m = fdp::PackedMatrix::zeros(n, n, fmt);
    for (auto& e : m.data)
      e = fdp::encode(
          fdp::UnpackedReal::finite((rng() & 1) != 0, fdp::BigInt(dist(rng)), -10), fmt);
    return m;
  };
  const auto A = mat(), B = mat(), C = fdp::PackedMatrix::zeros(n, n, fmt);
  const fdp::BigInt one = fdp::encode_decimal("1", fmt);
  const fdp::BigInt zero = fdp::encode_decimal("0", fmt);
  for (auto _ : state) benchmark::DoNotOptimize(fdp::gemm(one, A, B, zero, C, kernel, 4));
}
BENCHMARK(BM_gemm_fdp)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
