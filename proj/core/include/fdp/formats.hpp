#pragma once

#include <string>

#include "fdp/bigint.hpp"
#include "fdp/unpacked.hpp"

namespace fdp {

// Descriptor of a packed computer format. bfloat16 is ieee(8, 7); the
// standard IEEE widths are ieee(8,23), ieee(11,52), ieee(15,112).
struct FormatSpec {
  enum class Kind { ieee, posit };

  Kind kind = Kind::ieee;
  int exp_bits = 11;
  int frac_bits = 52;
  int posit_n = 0;
  int posit_es = 0;

  static FormatSpec ieee(int exp_bits, int frac_bits);
  static FormatSpec bfloat16() { return ieee(8, 7); }
  static FormatSpec binary32() { return ieee(8, 23); }
  static FormatSpec binary64() { return ieee(11, 52); }
  static FormatSpec binary128() { return ieee(15, 112); }
  static FormatSpec posit(int n, int es);

  // Accepts binary32/binary64/binary128/bfloat16 and positN_ES (e.g. posit16_1).
  static FormatSpec parse(const std::string& name);

  bool is_ieee() const { return kind == Kind::ieee; }
  int width() const;
  // Significand bits including the hidden bit (ieee); max for posit.
  int precision() const;
  int bias() const;   // ieee only
  int e_min() const;  // ieee: smallest normal unbiased exponent
  int e_max() const;  // ieee: largest normal unbiased exponent
  // Cap for the correct-bits metric: stored fraction bits (ieee), max
  // fraction bits (posit).
  int fraction_precision() const;

  std::string name() const;

  friend bool operator==(const FormatSpec&, const FormatSpec&) = default;
};

// Bit-exact decode of a packed pattern. Total on [0, 2^width); throws
// std::invalid_argument when the pattern does not fit the storage width.
UnpackedReal decode(const BigInt& bits, const FormatSpec& fmt);

// Round-to-nearest-even encode of an exact dyadic value (IEEE: gradual
// underflow, overflow to inf; posit: saturation to maxpos/minpos, specials
// to NaR).
BigInt encode(const UnpackedReal& x, const FormatSpec& fmt);

// Correctly rounded conversion of a decimal literal ("1.5", "-2e-7", "3").
BigInt encode_decimal(const std::string& literal, const FormatSpec& fmt);

// CLI operand: hex pattern (0x-prefixed) taken verbatim, anything else
// treated as a decimal literal and encoded.
BigInt parse_operand(const std::string& token, const FormatSpec& fmt);

}  // namespace fdp
