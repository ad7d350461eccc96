#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "fdp/formats.hpp"

using namespace fdp;

namespace {

BigInt hexval(const char* s) { return parse_hex(s); }

UnpackedReal from_double(double d) {
  return decode(BigInt(std::bit_cast<std::uint64_t>(d)), FormatSpec::binary64());
}

}  // namespace

TEST_CASE("decode binary32 basics") {
  const auto f = FormatSpec::binary32();
  const auto one = decode(hexval("0x3F800000"), f);
  CHECK(one.is_finite());
  CHECK(!one.negative);
  CHECK(one.significand == 1);
  CHECK(one.exponent == 0);

  // smallest subnormal
  const auto tiny = decode(hexval("0x00000001"), f);
  CHECK(tiny.significand == 1);
  CHECK(tiny.exponent == -149);

  CHECK(decode(hexval("0x7F800000"), f).is_inf());
  CHECK(decode(hexval("0xFF800000"), f).is_inf());
  CHECK(decode(hexval("0x7FC00000"), f).cls == RealClass::nan);
  CHECK(decode(hexval("0x80000000"), f).is_zero());
  CHECK(decode(hexval("0x80000000"), f).negative);
}

TEST_CASE("decode rejects patterns wider than the format") {
  CHECK_THROWS_AS(decode(hexval("0x1FFFFFFFF"), FormatSpec::binary32()),
                  std::invalid_argument);
}

TEST_CASE("decode posit<16,1>") {
  const auto f = FormatSpec::posit(16, 1);
  const auto one = decode(hexval("0x4000"), f);
  CHECK(one.is_finite());
  CHECK(one.significand == 1);
  CHECK(one.exponent == 0);
  CHECK(decode(hexval("0x8000"), f).cls == RealClass::nar);
  CHECK(decode(hexval("0x0000"), f).is_zero());
  // maxpos = useed^(n-2) = 2^(2*14) for es=1
  const auto maxpos = decode((BigInt(1) << 15) - 1, f);
  CHECK(maxpos.significand == 1);
  CHECK(maxpos.exponent == 28);
  // -1 is the two's complement of 1.0
  const auto minus_one = decode(hexval("0xC000"), f);
  CHECK(minus_one.negative);
  CHECK(minus_one.significand == 1);
  CHECK(minus_one.exponent == 0);
}

TEST_CASE("encode RNE tie cases") {
  const auto f32 = FormatSpec::binary32();
  // 1 + 2^-24 sits halfway between 1.0 and 1+2^-23: ties-to-even rounds down.
  const auto halfway = UnpackedReal::finite(false, (BigInt(1) << 24) + 1, -24);
  CHECK(encode(halfway, f32) == hexval("0x3F800000"));
  // 1 + 3*2^-24 is halfway up: rounds to even (up).
  const auto halfway_up = UnpackedReal::finite(false, (BigInt(1) << 24) + 3, -24);
  CHECK(encode(halfway_up, f32) == hexval("0x3F800002"));
}

TEST_CASE("encode overflow and underflow") {
  const auto f32 = FormatSpec::binary32();
  CHECK(encode(UnpackedReal::finite(false, 1, 1000), f32) == hexval("0x7F800000"));
  CHECK(encode(UnpackedReal::finite(true, 1, 1000), f32) == hexval("0xFF800000"));
  // below half of the smallest subnormal: flushes to zero
  CHECK(encode(UnpackedReal::finite(false, 1, -151), f32) == hexval("0x00000000"));
  // exactly half of the smallest subnormal: tie to even (zero)
  CHECK(encode(UnpackedReal::finite(false, 1, -150), f32) == hexval("0x00000000"));
  // just above half: rounds to the smallest subnormal
  CHECK(encode(UnpackedReal::finite(false, 3, -151), f32) == hexval("0x00000001"));
}

TEST_CASE("posit encode saturates, never wraps") {
  const auto f = FormatSpec::posit(16, 1);
  CHECK(encode(UnpackedReal::finite(false, 1, 1000), f) == hexval("0x7FFF"));
  CHECK(encode(UnpackedReal::finite(false, 1, -1000), f) == hexval("0x0001"));
  CHECK(encode(UnpackedReal::finite(true, 1, 1000), f) == hexval("0x8001"));
  CHECK(encode(UnpackedReal::nan(), f) == hexval("0x8000"));
  CHECK(encode(UnpackedReal::inf(false), f) == hexval("0x8000"));
  CHECK(encode(UnpackedReal::zero(true), f) == hexval("0x0000"));
}

TEST_CASE("exhaustive posit<16,1> round-trip and monotonicity") {
  const auto f = FormatSpec::posit(16, 1);
  const BigInt nar = BigInt(1) << 15;
  UnpackedReal prev;
  bool have_prev = false;
  for (std::uint32_t b = 0; b < (1u << 16); ++b) {
    const BigInt bits(b);
    const auto v = decode(bits, f);
    if (bits == nar) continue;
    CHECK(encode(v, f) == bits);
    // positive magnitudes are ordered in the packing
    if (b >= 1 && b < (1u << 15)) {
      if (have_prev) CHECK(compare(prev, v) < 0);
      prev = v;
      have_prev = true;
    }
  }
}

TEST_CASE("exhaustive bfloat16 round-trip with NaN collapse") {
  const auto f = FormatSpec::bfloat16();
  const auto nan_pattern = encode(UnpackedReal::nan(), f);
  for (std::uint32_t b = 0; b < (1u << 16); ++b) {
    const BigInt bits(b);
    const auto v = decode(bits, f);
    if (v.cls == RealClass::nan) {
      CHECK(encode(v, f) == nan_pattern);
    } else {
      CHECK(encode(v, f) == bits);
    }
  }
}

TEST_CASE("binary64 round-trip against the native double codec") {
  std::mt19937_64 rng(7);
  const auto f64 = FormatSpec::binary64();
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t raw = rng();
    const BigInt bits(raw);
    const auto v = decode(bits, f64);
    const double native = std::bit_cast<double>(raw);
    if (std::isnan(native)) {
      CHECK(v.cls == RealClass::nan);
      continue;
    }
    CHECK(encode(v, f64) == bits);
    if (std::isfinite(native) && native != 0.0) {
      // cross-check the decoded value against the hardware
      CHECK(to_double(v) == native);
    }
  }
}

TEST_CASE("signed zero round-trips but compares equal in arithmetic") {
  const auto f64 = FormatSpec::binary64();
  const BigInt neg_zero = BigInt(1) << 63;
  const auto v = decode(neg_zero, f64);
  CHECK(v.is_zero());
  CHECK(encode(v, f64) == neg_zero);
  CHECK(v.same_value(UnpackedReal::zero(false)));
}

TEST_CASE("binary128 encode/decode basics") {
  const auto f = FormatSpec::binary128();
  CHECK(f.width() == 128);
  const BigInt one_bits = BigInt(16383) << 112;
  const auto one = decode(one_bits, f);
  CHECK(one.significand == 1);
  CHECK(one.exponent == 0);
  CHECK(encode(one, f) == one_bits);
}

TEST_CASE("posit encode monotone on random values") {
  const auto f = FormatSpec::posit(32, 2);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const double a = std::ldexp(static_cast<double>(rng()) / 1e19 + 0.1,
                                static_cast<int>(rng() % 41) - 20);
    const double b = a * (1.0 + static_cast<double>(rng() % 1000) / 1e6);
    const auto ea = decode(encode(from_double(a), f), f);
    const auto eb = decode(encode(from_double(b), f), f);
    CHECK(compare(ea, eb) <= 0);
  }
}

TEST_CASE("decimal literals encode correctly rounded") {
  const auto f64 = FormatSpec::binary64();
  CHECK(encode_decimal("1", f64) == hexval("0x3FF0000000000000"));
  CHECK(encode_decimal("-2", f64) == hexval("0xC000000000000000"));
  CHECK(encode_decimal("0.5", f64) == hexval("0x3FE0000000000000"));
  // 0.1 is not dyadic; compare against the native correctly-rounded parse
  CHECK(encode_decimal("0.1", f64) == BigInt(std::bit_cast<std::uint64_t>(0.1)));
  CHECK(encode_decimal("3.14159e-10", f64) ==
        BigInt(std::bit_cast<std::uint64_t>(3.14159e-10)));
  CHECK(encode_decimal("1e400", f64) == hexval("0x7FF0000000000000"));
  CHECK(encode_decimal("1e-400", f64) == BigInt(std::bit_cast<std::uint64_t>(1e-400)));
  CHECK_THROWS_AS(encode_decimal("abc", f64), std::invalid_argument);
  CHECK_THROWS_AS(encode_decimal("1..2", f64), std::invalid_argument);
}

TEST_CASE("decimal literals for posits") {
  const auto f = FormatSpec::posit(16, 1);
  CHECK(encode_decimal("1", f) == hexval("0x4000"));
  CHECK(encode_decimal("-1", f) == hexval("0xC000"));
  CHECK(encode_decimal("1e30", f) == hexval("0x7FFF"));
  // 0.1 rounds to the nearest posit; verify by neighborhood comparison
  const BigInt b = encode_decimal("0.1", f);
  const double v = to_double(decode(b, f));
  const double lo = to_double(decode(b - 1, f));
  const double hi = to_double(decode(b + 1, f));
  CHECK(std::abs(v - 0.1) <= std::abs(lo - 0.1));
  CHECK(std::abs(v - 0.1) <= std::abs(hi - 0.1));
}

TEST_CASE("format parsing") {
  CHECK(FormatSpec::parse("binary64") == FormatSpec::binary64());
  CHECK(FormatSpec::parse("bfloat16") == FormatSpec::bfloat16());
  CHECK(FormatSpec::parse("posit16_1") == FormatSpec::posit(16, 1));
  CHECK(FormatSpec::parse("posit32_2") == FormatSpec::posit(32, 2));
  CHECK_THROWS_AS(FormatSpec::parse("binary99"), std::invalid_argument);
  CHECK_THROWS_AS(FormatSpec::parse("posit16"), std::invalid_argument);
  CHECK_THROWS_AS(FormatSpec::posit(2, 0), std::invalid_argument);
}

TEST_CASE("parse_operand handles hex and decimal") {
  const auto f64 = FormatSpec::binary64();
  CHECK(parse_operand("0x3FF0000000000000", f64) == hexval("0x3FF0000000000000"));
  CHECK(parse_operand("1", f64) == hexval("0x3FF0000000000000"));
  CHECK_THROWS_AS(parse_operand("0x1FFFFFFFFFFFFFFFF", f64), std::invalid_argument);
}
