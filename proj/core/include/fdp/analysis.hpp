#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fdp/kernels.hpp"

namespace fdp {

// Exact dot product by brute-force dyadic arithmetic; the ground truth the
// accumulator is checked against (no accumulator code involved).
UnpackedReal exact_dot(const std::vector<UnpackedReal>& x,
                       const std::vector<UnpackedReal>& y);
UnpackedReal exact_dot_bits(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                            const FormatSpec& fmt);

// Condition number sum(|x_i*y_i|) / |sum(x_i*y_i)|; +inf when the exact dot
// is zero but the numerator is not.
double dot_condition(const std::vector<UnpackedReal>& x,
                     const std::vector<UnpackedReal>& y);

// -log2 of the relative error of the stored result against the exact value,
// capped at the output format's fraction precision; the cap is attained iff
// the result is the correctly rounded exact value.
double correct_bits(const BigInt& result, const FormatSpec& fmt, const UnpackedReal& exact);

struct ReproReport {
  std::string kernel_id;
  std::size_t n = 0;
  std::size_t permutations = 0;
  std::size_t distinct_results = 0;
  double max_abs_deviation = 0.0;
  bool bit_identical = false;
  std::uint64_t seed = 0;
};

// Runs the kernel on K seeded simultaneous permutations of the (x, y) pairs.
ReproReport repro_probe(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                        const FormatSpec& in_fmt, const KernelSpec& kernel,
                        std::size_t permutations, std::uint64_t seed);

struct GeneratedDot {
  std::vector<BigInt> x;
  std::vector<BigInt> y;
  UnpackedReal exact;
  double achieved_cond = 1.0;
};

// Ill-conditioned dot product generator (Ogita-Rump-Oishi style): half the
// entries span exponents up to log2(cond)/2, the other half cancel the
// running sum so the exact value stays tiny.
GeneratedDot gen_dot(std::size_t n, double target_cond, const FormatSpec& fmt,
                     std::uint64_t seed);

// Unit power draw in watts; fixed reporting constants taken from published
// FPGA measurements, never measured here.
struct PowerConstants {
  std::map<std::string, double> watts = {
      {"fma_binary64", 0.266},
      {"fma_binary128", 0.549},
      {"fdp_91bit", 0.491},
  };
};

// (bits1/W1) / (bits2/W2).
double bits_per_watt_ratio(double bits1, double watts1, double bits2, double watts2);

struct BitsPerWattRow {
  std::string kernel_a;
  std::string kernel_b;
  double ratio = 0.0;
};

// All ordered pairs over the kernels present in `bits`. Throws on a kernel id
// missing from the constants table.
std::vector<BitsPerWattRow> bits_per_watt(const std::map<std::string, double>& bits,
                                          const PowerConstants& constants);

struct DotReport {
  std::size_t n = 0;
  double condition = 1.0;
  UnpackedReal exact;
  struct Entry {
    std::string kernel_id;
    BigInt result;
    FormatSpec fmt;
    double correct_bits = 0.0;
  };
  std::vector<Entry> per_kernel;
};

void write_dot_report_csv(std::ostream& out, const std::vector<DotReport>& reports,
                          bool header = true);
void write_repro_report_json(std::ostream& out, const ReproReport& r);

}  // namespace fdp
