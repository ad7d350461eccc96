#include "fdp/formats.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

namespace fdp {
namespace {

using boost::multiprecision::bit_test;

BigInt pow5(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 5;
  return r;
}

// ---- IEEE ----

BigInt ieee_pack(const FormatSpec& fmt, bool neg, const BigInt& biased_exp, const BigInt& frac) {
  BigInt bits = frac;
  bits |= biased_exp << fmt.frac_bits;
  if (neg) bits |= BigInt(1) << (fmt.width() - 1);
  return bits;
}

BigInt ieee_inf(const FormatSpec& fmt, bool neg) {
  return ieee_pack(fmt, neg, (BigInt(1) << fmt.exp_bits) - 1, 0);
}

// Canonical quiet NaN: positive, all-ones exponent, MSB of the fraction set.
BigInt ieee_nan(const FormatSpec& fmt) {
  return ieee_pack(fmt, false, (BigInt(1) << fmt.exp_bits) - 1,
                   BigInt(1) << (fmt.frac_bits - 1));
}

// Rounds sig * 2^exp (plus an infinitesimal when sticky) to the format grid
// with round-to-nearest-even. sig > 0.
BigInt ieee_encode_finite(const FormatSpec& fmt, bool neg, const BigInt& sig,
                          std::int64_t exp, bool sticky) {
  const int p = fmt.precision();
  const std::int64_t emin = fmt.e_min();
  const std::int64_t emax = fmt.e_max();
  const std::int64_t min_lsb = emin - fmt.frac_bits;

  const std::int64_t top = exp + bit_length(sig) - 1;
  const std::int64_t lsb = std::max(top - (p - 1), min_lsb);
  const std::int64_t shift = lsb - exp;

  BigInt q;
  if (shift <= 0) {
    if (sticky) throw std::logic_error("ieee_encode_finite: sticky below grid");
    q = sig << static_cast<unsigned>(-shift);
  } else {
    q = sig >> static_cast<unsigned>(shift);
    const BigInt rem = sig - (q << static_cast<unsigned>(shift));
    const BigInt half = BigInt(1) << static_cast<unsigned>(shift - 1);
    if (rem > half || (rem == half && (sticky || bit_test(q, 0)))) ++q;
  }
  if (q == 0) return ieee_pack(fmt, neg, 0, 0);

  const int blq = bit_length(q);
  const std::int64_t top_q = lsb + blq - 1;
  if (top_q > emax) return ieee_inf(fmt, neg);
  if (top_q >= emin) {
    // Normal: align the significand to exactly p bits.
    BigInt sigp = blq < p ? BigInt(q << static_cast<unsigned>(p - blq))
                          : BigInt(q >> static_cast<unsigned>(blq - p));
    const BigInt frac = sigp - (BigInt(1) << (p - 1));
    return ieee_pack(fmt, neg, top_q + fmt.bias(), frac);
  }
  return ieee_pack(fmt, neg, 0, q);  // subnormal: lsb == min_lsb, blq <= frac_bits
}

UnpackedReal ieee_decode(const BigInt& bits, const FormatSpec& fmt) {
  const int w = fmt.width();
  const bool neg = bit_test(bits, w - 1);
  const BigInt exp_field = (bits >> fmt.frac_bits) & ((BigInt(1) << fmt.exp_bits) - 1);
  const BigInt frac = bits & ((BigInt(1) << fmt.frac_bits) - 1);
  const BigInt exp_max = (BigInt(1) << fmt.exp_bits) - 1;
  if (exp_field == exp_max)
    return frac == 0 ? UnpackedReal::inf(neg) : UnpackedReal::nan();
  if (exp_field == 0) {
    if (frac == 0) return UnpackedReal::zero(neg);
    return UnpackedReal::finite(neg, frac, fmt.e_min() - fmt.frac_bits);
  }
  const BigInt sig = frac | (BigInt(1) << fmt.frac_bits);
  const std::int64_t exp =
      static_cast<std::int64_t>(exp_field) - fmt.bias() - fmt.frac_bits;
  return UnpackedReal::finite(neg, sig, exp);
}

// ---- posit ----

BigInt posit_nar(const FormatSpec& fmt) { return BigInt(1) << (fmt.posit_n - 1); }

UnpackedReal posit_decode(const BigInt& bits, const FormatSpec& fmt) {
  const int n = fmt.posit_n;
  const int es = fmt.posit_es;
  if (bits == 0) return UnpackedReal::zero(false);
  if (bits == posit_nar(fmt)) return UnpackedReal::nar();
  const bool neg = bit_test(bits, n - 1);
  const BigInt mag = neg ? (BigInt(1) << n) - bits : bits;

  int i = n - 2;
  const bool regime_bit = bit_test(mag, i);
  int run = 0;
  while (i >= 0 && bit_test(mag, i) == regime_bit) {
    ++run;
    --i;
  }
  if (i >= 0) --i;  // regime terminator
  const int k = regime_bit ? run - 1 : -run;

  // Exponent bits; missing low bits (truncated by the regime) read as zero.
  std::int64_t e = 0;
  for (int j = 0; j < es; ++j) {
    e <<= 1;
    if (i - j >= 0 && bit_test(mag, i - j)) e |= 1;
  }
  i -= es;

  const int f = i >= 0 ? i + 1 : 0;
  const BigInt frac = f > 0 ? BigInt(mag & ((BigInt(1) << f) - 1)) : BigInt(0);
  const std::int64_t scale = (static_cast<std::int64_t>(k) << es) + e;
  return UnpackedReal::finite(neg, (BigInt(1) << f) + frac, scale - f);
}

// Rounds a positive magnitude onto the posit grid: nearest, ties to the even
// packed integer, saturating to maxpos/minpos. cmp(d) compares the magnitude
// being encoded against the dyadic d.
BigInt posit_round_magnitude(const FormatSpec& fmt,
                             const std::function<int(const UnpackedReal&)>& cmp) {
  const BigInt maxint = (BigInt(1) << (fmt.posit_n - 1)) - 1;
  if (cmp(posit_decode(maxint, fmt)) >= 0) return maxint;
  if (cmp(posit_decode(1, fmt)) <= 0) return BigInt(1);  // never rounds to zero

  BigInt lo = 1, hi = maxint;  // invariant: v(lo) <= x < v(hi)
  while (hi - lo > 1) {
    const BigInt mid = (lo + hi) >> 1;
    if (cmp(posit_decode(mid, fmt)) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  const UnpackedReal vlo = posit_decode(lo, fmt);
  if (cmp(vlo) == 0) return lo;
  const UnpackedReal vhi = posit_decode(hi, fmt);
  UnpackedReal midpoint = dyadic_add(vlo, vhi);
  midpoint.exponent -= 1;
  const int c = cmp(midpoint);
  if (c < 0) return lo;
  if (c > 0) return hi;
  return bit_test(lo, 0) ? hi : lo;  // tie: even packed integer
}

BigInt posit_wrap_sign(const FormatSpec& fmt, bool neg, const BigInt& mag) {
  return neg ? (BigInt(1) << fmt.posit_n) - mag : mag;
}

BigInt posit_encode(const UnpackedReal& x, const FormatSpec& fmt) {
  if (x.is_special() || x.is_inf()) return posit_nar(fmt);
  if (x.is_zero()) return BigInt(0);
  const UnpackedReal ax = dyadic_abs(x);
  const BigInt mag = posit_round_magnitude(
      fmt, [&ax](const UnpackedReal& d) { return compare(ax, d); });
  return posit_wrap_sign(fmt, x.negative, mag);
}

// ---- decimal literals ----

struct DecimalLiteral {
  bool neg = false;
  BigInt digits;        // concatenated significant digits
  std::int64_t exp10 = 0;  // value = +-digits * 10^exp10
};

DecimalLiteral parse_decimal(const std::string& s) {
  DecimalLiteral d;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) d.neg = s[i++] == '-';
  bool any = false;
  std::int64_t frac_digits = 0;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c >= '0' && c <= '9') {
      d.digits = d.digits * 10 + (c - '0');
      if (seen_dot) ++frac_digits;
      any = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("bad decimal literal '" + s + "'");
  std::int64_t e10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    if (i >= s.size()) throw std::invalid_argument("bad decimal literal '" + s + "'");
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') break;
      e10 = e10 * 10 + (s[i] - '0');
      if (e10 > 100000) throw std::invalid_argument("decimal exponent out of range");
    }
    if (eneg) e10 = -e10;
  }
  if (i != s.size()) throw std::invalid_argument("bad decimal literal '" + s + "'");
  d.exp10 = e10 - frac_digits;
  return d;
}

}  // namespace

FormatSpec FormatSpec::ieee(int exp_bits, int frac_bits) {
  if (exp_bits < 2 || frac_bits < 1)
    throw std::invalid_argument("FormatSpec: bad ieee dimensions");
  FormatSpec f;
  f.kind = Kind::ieee;
  f.exp_bits = exp_bits;
  f.frac_bits = frac_bits;
  return f;
}

FormatSpec FormatSpec::posit(int n, int es) {
  if (n < 3 || es < 0) throw std::invalid_argument("FormatSpec: posit needs n >= 3, es >= 0");
  FormatSpec f;
  f.kind = Kind::posit;
  f.exp_bits = 0;
  f.frac_bits = 0;
  f.posit_n = n;
  f.posit_es = es;
  return f;
}

FormatSpec FormatSpec::parse(const std::string& name) {
  if (name == "binary32") return binary32();
  if (name == "binary64") return binary64();
  if (name == "binary128") return binary128();
  if (name == "bfloat16") return bfloat16();
  if (name.rfind("posit", 0) == 0) {
    const std::string body = name.substr(5);
    const auto sep = body.find('_');
    if (sep != std::string::npos) {
      try {
        const int n = std::stoi(body.substr(0, sep));
        const int es = std::stoi(body.substr(sep + 1));
        return posit(n, es);
      } catch (const std::invalid_argument&) {
      } catch (const std::out_of_range&) {
      }
    }
  }
  throw std::invalid_argument("unknown format '" + name +
                              "' (expected binary32|binary64|binary128|bfloat16|positN_ES)");
}

int FormatSpec::width() const {
  return is_ieee() ? 1 + exp_bits + frac_bits : posit_n;
}

int FormatSpec::precision() const {
  if (is_ieee()) return frac_bits + 1;
  return std::max(1, posit_n - 2 - posit_es);
}

int FormatSpec::bias() const { return (1 << (exp_bits - 1)) - 1; }
int FormatSpec::e_min() const { return 1 - bias(); }
int FormatSpec::e_max() const { return bias(); }

int FormatSpec::fraction_precision() const {
  return is_ieee() ? frac_bits : std::max(0, posit_n - 3 - posit_es);
}

std::string FormatSpec::name() const {
  if (is_ieee()) {
    if (exp_bits == 8 && frac_bits == 7) return "bfloat16";
    if (exp_bits == 8 && frac_bits == 23) return "binary32";
    if (exp_bits == 11 && frac_bits == 52) return "binary64";
    if (exp_bits == 15 && frac_bits == 112) return "binary128";
    return "ieee" + std::to_string(exp_bits) + "_" + std::to_string(frac_bits);
  }
  return "posit" + std::to_string(posit_n) + "_" + std::to_string(posit_es);
}

UnpackedReal decode(const BigInt& bits, const FormatSpec& fmt) {
  if (bits < 0 || bit_length(bits) > fmt.width())
    throw std::invalid_argument("decode: pattern does not fit " + fmt.name());
  return fmt.is_ieee() ? ieee_decode(bits, fmt) : posit_decode(bits, fmt);
}

BigInt encode(const UnpackedReal& x, const FormatSpec& fmt) {
  if (!fmt.is_ieee()) return posit_encode(x, fmt);
  switch (x.cls) {
    case RealClass::nan:
    case RealClass::nar: return ieee_nan(fmt);
    case RealClass::inf: return ieee_inf(fmt, x.negative);
    case RealClass::zero: return ieee_pack(fmt, x.negative, 0, 0);
    case RealClass::finite: break;
  }
  return ieee_encode_finite(fmt, x.negative, x.significand, x.exponent, false);
}

BigInt encode_decimal(const std::string& literal, const FormatSpec& fmt) {
  const DecimalLiteral d = parse_decimal(literal);
  if (d.digits == 0) return encode(UnpackedReal::zero(d.neg), fmt);
  if (d.exp10 >= 0) {
    // Exact: digits * 10^e = digits * 5^e * 2^e.
    const BigInt sig = d.digits * pow5(static_cast<int>(d.exp10));
    return encode(UnpackedReal::finite(d.neg, sig, d.exp10), fmt);
  }
  const int m = static_cast<int>(-d.exp10);
  const BigInt den = pow5(m);
  if (fmt.is_ieee()) {
    // Fixed-point division with enough guard bits that the sticky flag alone
    // settles every rounding decision.
    const std::int64_t min_lsb = fmt.e_min() - fmt.frac_bits;
    std::int64_t t = std::max<std::int64_t>(
        {d.exp10 - min_lsb + 2,
         fmt.precision() + 2 + bit_length(den) - bit_length(d.digits), 1});
    t += 64;
    const BigInt scaled = d.digits << static_cast<unsigned>(t);
    const BigInt q = scaled / den;
    const bool sticky = q * den != scaled;
    return ieee_encode_finite(fmt, d.neg, q, d.exp10 - t, sticky);
  }
  // posit: compare the exact rational digits * 2^exp10 / 5^m against grid
  // points by cross-multiplication.
  const auto cmp = [&](const UnpackedReal& dy) {
    BigInt lhs = d.digits;
    BigInt rhs = dy.significand * den;
    const std::int64_t shift = d.exp10 - dy.exponent;
    if (shift >= 0)
      lhs <<= static_cast<unsigned>(shift);
    else
      rhs <<= static_cast<unsigned>(-shift);
    return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
  };
  const BigInt mag = posit_round_magnitude(fmt, cmp);
  return posit_wrap_sign(fmt, d.neg, mag);
}

BigInt parse_operand(const std::string& token, const FormatSpec& fmt) {
  if (token.size() >= 2 && token[0] == '0' && (token[1] == 'x' || token[1] == 'X')) {
    const BigInt bits = parse_hex(token);
    if (bit_length(bits) > fmt.width())
      throw std::invalid_argument("operand '" + token + "' wider than " + fmt.name());
    return bits;
  }
  return encode_decimal(token, fmt);
}

}  // namespace fdp
