#include "fdp/accumulator.hpp"

#include <cstdlib>

namespace fdp {

int AccumConfig::width() const {
  if (!valid())
    throw std::invalid_argument("invalid accumulator config " + str() +
                                " (need ovf >= 0, lsb <= msb, width >= 2)");
  return raw_width();
}

AccumConfig AccumConfig::parse(const std::string& text) {
  AccumConfig cfg;
  const char* p = text.c_str();
  char* end = nullptr;
  const auto field = [&](bool last) {
    const long v = std::strtol(p, &end, 10);
    if (end == p || (last ? *end != '\0' : *end != ':'))
      throw std::invalid_argument("bad accumulator config '" + text +
                                  "' (expected ovf:msb:lsb)");
    p = end + 1;
    return static_cast<int>(v);
  };
  cfg.ovf = field(false);
  cfg.msb = field(false);
  cfg.lsb = field(true);
  cfg.width();  // validate
  return cfg;
}

std::string AccumConfig::str() const {
  return std::to_string(ovf) + ":" + std::to_string(msb) + ":" + std::to_string(lsb);
}

Accumulator::Accumulator(const AccumConfig& cfg) : cfg_(cfg) { cfg_.width(); }

void Accumulator::add_wrapped(const BigInt& addend) {
  const int w = cfg_.raw_width();
  const BigInt modulus = BigInt(1) << w;
  BigInt t = reg_ + addend;
  BigInt wrapped = t % modulus;
  if (wrapped < 0) wrapped += modulus;
  if (wrapped >= (modulus >> 1)) wrapped -= modulus;
  if (wrapped != t) overflow_advisory_ = true;
  reg_ = wrapped;
}

void Accumulator::mac(const UnpackedReal& a, const UnpackedReal& b) {
  if (a.is_special() || b.is_special()) {
    poisoned_nan_ = true;
    return;
  }
  if (a.is_inf() || b.is_inf()) {
    if (a.is_zero() || b.is_zero()) {
      poisoned_nan_ = true;
    } else if (a.negative != b.negative) {
      poisoned_inf_neg_ = true;
    } else {
      poisoned_inf_pos_ = true;
    }
    return;
  }
  if (a.is_zero() || b.is_zero()) return;

  const BigInt sig_p = a.significand * b.significand;
  const std::int64_t exp_p = a.exponent + b.exponent;
  const bool neg = a.negative != b.negative;
  const std::int64_t shift = exp_p - cfg_.lsb;

  BigInt addend;
  if (shift >= 0) {
    addend = sig_p << static_cast<unsigned>(shift);
  } else {
    // floor(P * 2^shift) for signed P: arithmetic right shift.
    const unsigned k = static_cast<unsigned>(-shift);
    const BigInt q = sig_p >> k;
    const bool lost = (q << k) != sig_p;
    if (lost) inexact_low_ = true;
    addend = neg ? -(q + (lost ? 1 : 0)) : q;
    add_wrapped(addend);
    return;
  }
  add_wrapped(neg ? BigInt(-addend) : addend);
}

bool Accumulator::poisoned() const {
  return poisoned_nan_ || poisoned_inf_pos_ || poisoned_inf_neg_;
}

UnpackedReal Accumulator::to_exact() const {
  if (poisoned_nan_ || (poisoned_inf_pos_ && poisoned_inf_neg_))
    return UnpackedReal::nan();
  if (poisoned_inf_pos_) return UnpackedReal::inf(false);
  if (poisoned_inf_neg_) return UnpackedReal::inf(true);
  if (reg_ == 0) return UnpackedReal::zero();
  return UnpackedReal::finite(reg_ < 0, reg_ < 0 ? BigInt(-reg_) : reg_, cfg_.lsb);
}

BigInt Accumulator::round_into(const FormatSpec& fmt) const {
  return encode(to_exact(), fmt);
}

}  // namespace fdp
