#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fdp {

using BigInt = boost::multiprecision::cpp_int;

// Number of bits needed to represent |v|; 0 for v == 0.
int bit_length(const BigInt& v);

// Index of the lowest set bit of |v|. Precondition: v != 0.
int trailing_zeros(const BigInt& v);

// Renders an unsigned bit pattern as "0x" + uppercase hex, zero-padded to
// ceil(width_bits/4) digits. Precondition: 0 <= bits < 2^width_bits.
std::string to_hex(const BigInt& bits, int width_bits);

// Parses an unsigned hex pattern, with or without the "0x" prefix.
// Throws std::invalid_argument on malformed input.
BigInt parse_hex(const std::string& text);

}  // namespace fdp
