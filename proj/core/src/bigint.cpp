#include "fdp/bigint.hpp"

#include <cctype>

namespace fdp {

int bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return static_cast<int>(boost::multiprecision::msb(v < 0 ? BigInt(-v) : v)) + 1;
}

int trailing_zeros(const BigInt& v) {
  return static_cast<int>(boost::multiprecision::lsb(v < 0 ? BigInt(-v) : v));
}

std::string to_hex(const BigInt& bits, int width_bits) {
  if (bits < 0) throw std::invalid_argument("to_hex: negative bit pattern");
  const int digits = (width_bits + 3) / 4;
  std::string out(static_cast<std::size_t>(digits), '0');
  static const char* kHex = "0123456789ABCDEF";
  BigInt v = bits;
  for (int i = digits - 1; i >= 0 && v != 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[static_cast<unsigned>(v & 0xF)];
    v >>= 4;
  }
  if (v != 0) throw std::invalid_argument("to_hex: pattern wider than declared width");
  return "0x" + out;
}

BigInt parse_hex(const std::string& text) {
  std::size_t pos = 0;
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) pos = 2;
  if (pos >= text.size()) throw std::invalid_argument("parse_hex: empty pattern '" + text + "'");
  BigInt v = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw std::invalid_argument("parse_hex: bad digit in '" + text + "'");
    v = (v << 4) | d;
  }
  return v;
}

}  // namespace fdp
