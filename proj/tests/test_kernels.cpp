#include <doctest.h>

#include <bit>
#include <random>
#include <sstream>

#include "fdp/analysis.hpp"
#include "fdp/kernels.hpp"

using namespace fdp;

namespace {

const FormatSpec f64 = FormatSpec::binary64();

BigInt dbl(double d) { return BigInt(std::bit_cast<std::uint64_t>(d)); }

std::vector<BigInt> dbls(std::initializer_list<double> vs) {
  std::vector<BigInt> out;
  for (const double v : vs) out.push_back(dbl(v));
  return out;
}

}  // namespace

TEST_CASE("fdp basics") {
  const AccumConfig cfg{30, 30, -30};
  CHECK(fdp::fdp(dbls({1.0}), dbls({1.0}), f64, cfg, f64) == dbl(1.0));
  CHECK(fdp::fdp({}, {}, f64, cfg, f64) == dbl(0.0));
  CHECK_THROWS_AS(fdp::fdp(dbls({1.0}), dbls({1.0, 2.0}), f64, cfg, f64),
                  std::invalid_argument);
}

TEST_CASE("fdp keeps the low bits an fma chain loses") {
  const double eps53 = std::ldexp(1.0, -53);
  const auto x = dbls({1.0, eps53, eps53});
  const auto y = dbls({1.0, 1.0, 1.0});
  CHECK(fdp::fdp(x, y, f64, AccumConfig{30, 30, -60}, f64) ==
        parse_hex("0x3FF0000000000001"));
  // both ties round to even in the chain
  CHECK(fma_chain_dot(x, y, f64, f64) == dbl(1.0));
}

TEST_CASE("fma_chain equals fdp on single elements") {
  std::mt19937_64 rng(17);
  const AccumConfig cfg{30, 30, -60};
  for (int i = 0; i < 200; ++i) {
    const double a = std::ldexp(static_cast<double>(rng() % (1u << 20)) + 1.0,
                                static_cast<int>(rng() % 21) - 10);
    const double b = std::ldexp(static_cast<double>(rng() % (1u << 20)) + 1.0,
                                static_cast<int>(rng() % 21) - 10);
    CHECK(fma_chain_dot(dbls({a}), dbls({b}), f64, f64) ==
          fdp::fdp(dbls({a}), dbls({b}), f64, cfg, f64));
  }
}

TEST_CASE("cancellation: fdp exact zero, chain leaves residue") {
  // big +/- pair whose products cancel exactly, plus noise below the chain's
  // precision at the moment the big terms dominate
  const double big = std::ldexp(1.0, 40);
  const double small = std::ldexp(1.0, -20);
  const auto x = dbls({big, small, -big});
  const auto y = dbls({big, small, big});
  const auto exact = exact_dot_bits(x, y, f64);
  // exact = small^2 = 2^-40
  CHECK(exact.same_value(UnpackedReal::finite(false, 1, -40)));
  CHECK(fdp::fdp(x, y, f64, AccumConfig{30, 90, -90}, f64) == dbl(std::ldexp(1.0, -40)));
  // the chain absorbs small^2 into big^2 and cancels to zero
  CHECK(fma_chain_dot(x, y, f64, f64) == dbl(0.0));
}

TEST_CASE("fdp matches the oracle on random in-window vectors") {
  std::mt19937_64 rng(23);
  const AccumConfig cfg{30, 30, -30};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BigInt> x, y;
    for (int i = 0; i < 100; ++i) {
      // multiples of 2^-15 below 2^10: every product lands on the 2^-30 grid
      const auto r = [&] {
        return std::ldexp(static_cast<double>(rng() % (1u << 25) + 1), -15);
      };
      x.push_back(dbl((rng() & 1) ? -r() : r()));
      y.push_back(dbl((rng() & 1) ? -r() : r()));
    }
    const auto exact = exact_dot_bits(x, y, f64);
    REQUIRE(fdp::fdp(x, y, f64, cfg, f64) == encode(exact, f64));
  }
}

TEST_CASE("matrix csv round-trip") {
  PackedMatrix m = PackedMatrix::zeros(2, 3, f64);
  m.at(0, 0) = dbl(1.0);
  m.at(1, 2) = dbl(-2.5);
  std::stringstream ss;
  write_matrix_csv(ss, m);
  const PackedMatrix back = read_matrix_csv(ss);
  CHECK(back.rows == 2);
  CHECK(back.cols == 3);
  CHECK(back.fmt == f64);
  CHECK(back.data == m.data);
}

TEST_CASE("matrix csv accepts decimal literals") {
  std::stringstream ss("2,2,binary64\n1,0\n0,1\n");
  const PackedMatrix m = read_matrix_csv(ss);
  CHECK(m.at(0, 0) == dbl(1.0));
  CHECK(m.at(0, 1) == dbl(0.0));
}

namespace {

PackedMatrix identity(int n) {
  PackedMatrix m = PackedMatrix::zeros(n, n, f64);
  for (int i = 0; i < n; ++i) m.at(i, i) = dbl(1.0);
  return m;
}

// Entries are multiples of 2^-15 below 2^10, so products of two matrices sit
// on the 2^-30 grid and the <30,30,-30> accumulator holds them exactly.
PackedMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  PackedMatrix m = PackedMatrix::zeros(rows, cols, f64);
  for (auto& v : m.data) {
    const double d = std::ldexp(static_cast<double>(rng() % (1u << 25) + 1), -15);
    v = dbl((rng() & 1) ? -d : d);
  }
  return m;
}

}  // namespace

TEST_CASE("gemm identity passes operands through") {
  std::mt19937_64 rng(5);
  const auto B = random_matrix(2, 2, rng);
  const auto kernel = KernelSpec::fdp(AccumConfig{30, 30, -30}, f64);
  const auto C = PackedMatrix::zeros(2, 2, f64);
  const auto R = gemm(dbl(1.0), identity(2), B, dbl(0.0), C, kernel);
  CHECK(R.data == B.data);
}

TEST_CASE("gemm beta*C passes through a zero A") {
  std::mt19937_64 rng(6);
  const auto C = random_matrix(2, 2, rng);
  const auto A = PackedMatrix::zeros(2, 2, f64);
  const auto B = PackedMatrix::zeros(2, 2, f64);
  const auto kernel = KernelSpec::fdp(AccumConfig{30, 30, -30}, f64);
  const auto R = gemm(dbl(1.0), A, B, dbl(1.0), C, kernel);
  CHECK(R.data == C.data);
}

TEST_CASE("gemm fdp equals the per-element oracle") {
  std::mt19937_64 rng(8);
  const auto A = random_matrix(8, 8, rng);
  const auto B = random_matrix(8, 8, rng);
  const auto C = random_matrix(8, 8, rng);
  const double alpha = 1.5, beta = -0.25;
  const auto kernel = KernelSpec::fdp(AccumConfig{30, 40, -80}, f64);
  const auto R = gemm(dbl(alpha), A, B, dbl(beta), C, kernel);
  const auto alpha_u = decode(dbl(alpha), f64);
  const auto beta_u = decode(dbl(beta), f64);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      std::vector<UnpackedReal> xs, ys;
      for (int k = 0; k < 8; ++k) {
        xs.push_back(dyadic_mul(alpha_u, decode(A.at(i, k), f64)));
        ys.push_back(decode(B.at(k, j), f64));
      }
      xs.push_back(beta_u);
      ys.push_back(decode(C.at(i, j), f64));
      REQUIRE(R.at(i, j) == encode(exact_dot(xs, ys), f64));
    }
  }
}

TEST_CASE("gemm result is worker-count independent") {
  std::mt19937_64 rng(9);
  const auto A = random_matrix(8, 8, rng);
  const auto B = random_matrix(8, 8, rng);
  const auto C = random_matrix(8, 8, rng);
  const auto kernel = KernelSpec::fdp(AccumConfig{9, 6, -20}, f64);
  const auto r1 = gemm(dbl(1.0), A, B, dbl(1.0), C, kernel, 1);
  const auto r2 = gemm(dbl(1.0), A, B, dbl(1.0), C, kernel, 2);
  const auto r8 = gemm(dbl(1.0), A, B, dbl(1.0), C, kernel, 8);
  CHECK(r1.data == r2.data);
  CHECK(r1.data == r8.data);
}

TEST_CASE("gemm rejects dimension mismatches") {
  const auto kernel = KernelSpec::fdp(AccumConfig{30, 30, -30}, f64);
  const auto A = PackedMatrix::zeros(2, 3, f64);
  const auto B = PackedMatrix::zeros(2, 2, f64);
  const auto C = PackedMatrix::zeros(2, 2, f64);
  CHECK_THROWS_AS(gemm(dbl(1.0), A, B, dbl(0.0), C, kernel), std::invalid_argument);
}

TEST_CASE("mixed precision: bfloat16 in, binary32 out") {
  const auto bf16 = FormatSpec::bfloat16();
  const auto f32 = FormatSpec::binary32();
  const std::vector<BigInt> x = {encode_decimal("1.5", bf16), encode_decimal("2", bf16)};
  const std::vector<BigInt> y = {encode_decimal("2", bf16), encode_decimal("0.25", bf16)};
  const BigInt r = fdp::fdp(x, y, bf16, AccumConfig{4, 10, -20}, f32);
  CHECK(r == encode_decimal("3.5", f32));
}
