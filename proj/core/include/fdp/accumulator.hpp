#pragma once

#include <string>

#include "fdp/bigint.hpp"
#include "fdp/formats.hpp"
#include "fdp/unpacked.hpp"

namespace fdp {

// Geometry of the fixed-point scratchpad. ovf carry-guard bits sit above the
// highest data bit (weight 2^msb); the lowest kept bit has weight 2^lsb.
struct AccumConfig {
  int ovf = 0;
  int msb = 0;
  int lsb = 0;

  bool valid() const { return ovf >= 0 && lsb <= msb && raw_width() >= 2; }
  int raw_width() const { return ovf + msb - lsb + 1; }
  // W = ovf + msb - lsb + 1; throws std::invalid_argument when invalid.
  int width() const;

  // "ovf:msb:lsb" with signed lsb, e.g. "30:30:-30".
  static AccumConfig parse(const std::string& text);
  std::string str() const;

  friend bool operator==(const AccumConfig&, const AccumConfig&) = default;
};

// W-bit two's-complement register holding register * 2^lsb. Accumulation is
// modulo 2^W, so the final register value does not depend on the order in
// which products were inserted; only the advisory flags may.
class Accumulator {
 public:
  explicit Accumulator(const AccumConfig& cfg);

  // Inserts the exact product a*b, floor-aligned to the 2^lsb grid.
  void mac(const UnpackedReal& a, const UnpackedReal& b);

  // register * 2^lsb as an exact dyadic; nan/inf marker when poisoned.
  UnpackedReal to_exact() const;

  // Final (only) rounding into a packed format.
  BigInt round_into(const FormatSpec& fmt) const;

  const AccumConfig& config() const { return cfg_; }
  const BigInt& register_value() const { return reg_; }

  bool poisoned() const;
  bool poisoned_nan() const { return poisoned_nan_; }
  bool poisoned_inf_pos() const { return poisoned_inf_pos_; }
  bool poisoned_inf_neg() const { return poisoned_inf_neg_; }
  bool overflow_advisory() const { return overflow_advisory_; }
  bool inexact_low() const { return inexact_low_; }

 private:
  void add_wrapped(const BigInt& addend);

  AccumConfig cfg_;
  BigInt reg_;
  bool poisoned_nan_ = false;
  bool poisoned_inf_pos_ = false;
  bool poisoned_inf_neg_ = false;
  bool overflow_advisory_ = false;
  bool inexact_low_ = false;
};

}  // namespace fdp
