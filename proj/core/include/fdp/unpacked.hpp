#pragma once

#include <cstdint>
#include <string>

#include "fdp/bigint.hpp"

namespace fdp {

enum class RealClass { finite, zero, inf, nan, nar };

// Format-agnostic dyadic value: (-1)^sign * significand * 2^exponent.
// Canonical form keeps the significand odd (trailing zeros absorbed into
// the exponent) so that equal values have equal representations.
struct UnpackedReal {
  RealClass cls = RealClass::zero;
  bool negative = false;
  std::int64_t exponent = 0;
  BigInt significand;

  static UnpackedReal finite(bool negative, BigInt significand, std::int64_t exponent);
  static UnpackedReal zero(bool negative = false);
  static UnpackedReal inf(bool negative);
  static UnpackedReal nan();
  static UnpackedReal nar();

  bool is_finite() const { return cls == RealClass::finite; }
  bool is_zero() const { return cls == RealClass::zero; }
  bool is_inf() const { return cls == RealClass::inf; }
  bool is_special() const { return cls == RealClass::nan || cls == RealClass::nar; }

  // Value equality (zero compares equal regardless of sign; specials by class).
  bool same_value(const UnpackedReal& other) const;

  std::string str() const;
};

// Exact product / sum on dyadic values. Specials propagate: nan/nar poison,
// inf*0 and inf-inf give nan, inf otherwise dominates.
UnpackedReal dyadic_mul(const UnpackedReal& a, const UnpackedReal& b);
UnpackedReal dyadic_add(const UnpackedReal& a, const UnpackedReal& b);
UnpackedReal dyadic_neg(const UnpackedReal& a);
UnpackedReal dyadic_abs(const UnpackedReal& a);

// Three-way comparisons for finite/zero operands.
int compare_abs(const UnpackedReal& a, const UnpackedReal& b);
int compare(const UnpackedReal& a, const UnpackedReal& b);

// Nearest-double approximation (overflow clamps to +-inf). Finite/zero only
// give meaningful values; specials map to NaN/inf.
double to_double(const UnpackedReal& x);

// log2(|x|) for finite nonzero x, accurate to double precision.
double log2_abs(const UnpackedReal& x);

}  // namespace fdp
