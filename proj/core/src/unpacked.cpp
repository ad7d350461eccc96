#include "fdp/unpacked.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fdp {

UnpackedReal UnpackedReal::finite(bool negative, BigInt significand, std::int64_t exponent) {
  if (significand < 0) throw std::invalid_argument("UnpackedReal: negative significand");
  if (significand == 0) return zero(negative);
  const int tz = trailing_zeros(significand);
  UnpackedReal r;
  r.cls = RealClass::finite;
  r.negative = negative;
  r.significand = significand >> tz;
  r.exponent = exponent + tz;
  return r;
}

UnpackedReal UnpackedReal::zero(bool negative) {
  UnpackedReal r;
  r.cls = RealClass::zero;
  r.negative = negative;
  return r;
}

UnpackedReal UnpackedReal::inf(bool negative) {
  UnpackedReal r;
  r.cls = RealClass::inf;
  r.negative = negative;
  return r;
}

UnpackedReal UnpackedReal::nan() {
  UnpackedReal r;
  r.cls = RealClass::nan;
  return r;
}

UnpackedReal UnpackedReal::nar() {
  UnpackedReal r;
  r.cls = RealClass::nar;
  return r;
}

bool UnpackedReal::same_value(const UnpackedReal& other) const {
  if (cls != other.cls) return false;
  if (cls == RealClass::finite)
    return negative == other.negative && exponent == other.exponent &&
           significand == other.significand;
  if (cls == RealClass::inf) return negative == other.negative;
  return true;  // zero (sign ignored in arithmetic), nan, nar
}

std::string UnpackedReal::str() const {
  std::ostringstream os;
  switch (cls) {
    case RealClass::zero: return negative ? "-0" : "0";
    case RealClass::inf: return negative ? "-inf" : "+inf";
    case RealClass::nan: return "nan";
    case RealClass::nar: return "nar";
    case RealClass::finite: break;
  }
  os << (negative ? "-" : "+") << significand << "*2^" << exponent;
  return os.str();
}

UnpackedReal dyadic_mul(const UnpackedReal& a, const UnpackedReal& b) {
  if (a.is_special() || b.is_special()) return UnpackedReal::nan();
  if (a.is_inf() || b.is_inf()) {
    if (a.is_zero() || b.is_zero()) return UnpackedReal::nan();
    return UnpackedReal::inf(a.negative != b.negative);
  }
  if (a.is_zero() || b.is_zero()) return UnpackedReal::zero(a.negative != b.negative);
  return UnpackedReal::finite(a.negative != b.negative, a.significand * b.significand,
                              a.exponent + b.exponent);
}

UnpackedReal dyadic_add(const UnpackedReal& a, const UnpackedReal& b) {
  if (a.is_special() || b.is_special()) return UnpackedReal::nan();
  if (a.is_inf() || b.is_inf()) {
    if (a.is_inf() && b.is_inf() && a.negative != b.negative) return UnpackedReal::nan();
    return UnpackedReal::inf(a.is_inf() ? a.negative : b.negative);
  }
  if (a.is_zero() && b.is_zero()) return UnpackedReal::zero(a.negative && b.negative);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t e = std::min(a.exponent, b.exponent);
  BigInt va = a.significand << static_cast<unsigned>(a.exponent - e);
  BigInt vb = b.significand << static_cast<unsigned>(b.exponent - e);
  if (a.negative) va = -va;
  if (b.negative) vb = -vb;
  const BigInt s = va + vb;
  if (s == 0) return UnpackedReal::zero();
  return UnpackedReal::finite(s < 0, s < 0 ? BigInt(-s) : s, e);
}

UnpackedReal dyadic_neg(const UnpackedReal& a) {
  UnpackedReal r = a;
  if (r.cls == RealClass::finite || r.cls == RealClass::zero || r.cls == RealClass::inf)
    r.negative = !r.negative;
  return r;
}

UnpackedReal dyadic_abs(const UnpackedReal& a) {
  UnpackedReal r = a;
  r.negative = false;
  return r;
}

int compare_abs(const UnpackedReal& a, const UnpackedReal& b) {
  if (a.is_zero() && b.is_zero()) return 0;
  if (a.is_zero()) return -1;
  if (b.is_zero()) return 1;
  // Compare top-bit weights first, then align.
  const std::int64_t ta = a.exponent + bit_length(a.significand);
  const std::int64_t tb = b.exponent + bit_length(b.significand);
  if (ta != tb) return ta < tb ? -1 : 1;
  const std::int64_t e = std::min(a.exponent, b.exponent);
  const BigInt va = a.significand << static_cast<unsigned>(a.exponent - e);
  const BigInt vb = b.significand << static_cast<unsigned>(b.exponent - e);
  return va < vb ? -1 : (va == vb ? 0 : 1);
}

int compare(const UnpackedReal& a, const UnpackedReal& b) {
  const bool an = a.negative && !a.is_zero();
  const bool bn = b.negative && !b.is_zero();
  if (an != bn) return an ? -1 : 1;
  const int m = compare_abs(a, b);
  return an ? -m : m;
}

double to_double(const UnpackedReal& x) {
  switch (x.cls) {
    case RealClass::nan:
    case RealClass::nar: return std::numeric_limits<double>::quiet_NaN();
    case RealClass::inf:
      return x.negative ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    case RealClass::zero: return x.negative ? -0.0 : 0.0;
    case RealClass::finite: break;
  }
  const int bl = bit_length(x.significand);
  const int shift = bl > 64 ? bl - 64 : 0;
  const auto top = static_cast<std::uint64_t>(x.significand >> shift);
  const double mag = std::ldexp(static_cast<double>(top),
                                static_cast<int>(x.exponent + shift));
  return x.negative ? -mag : mag;
}

double log2_abs(const UnpackedReal& x) {
  if (!x.is_finite()) throw std::invalid_argument("log2_abs: finite nonzero required");
  const int bl = bit_length(x.significand);
  const int shift = bl > 64 ? bl - 64 : 0;
  const auto top = static_cast<std::uint64_t>(x.significand >> shift);
  return std::log2(static_cast<double>(top)) +
         static_cast<double>(x.exponent + shift);
}

}  // namespace fdp
