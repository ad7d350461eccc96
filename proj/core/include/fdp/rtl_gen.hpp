#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdp/accumulator.hpp"
#include "fdp/formats.hpp"

namespace fdp {

// Raised for (format, config) pairs the emitter does not support (posit RTL).
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Derived datapath widths for one (in format, accumulator, out format) triple.
struct PipelineParams {
  int in_width = 0;
  int sig_prod_width = 0;       // 2p, p = significand precision incl. hidden bit
  std::int64_t exp_prod_min = 0;  // unit-weight exponent range of exact products
  std::int64_t exp_prod_max = 0;
  std::int64_t max_shift = 0;   // largest left-shift into the accumulator
  int shift_count_width = 0;    // ceil(log2(max_shift + 1))
  int acc_width = 0;            // W = ovf + msb - lsb + 1
  int out_width = 0;
};

PipelineParams derive_params(const FormatSpec& fmt_in, const AccumConfig& cfg,
                             const FormatSpec& fmt_out);

// Behavioral Verilog-2001 for the FDP datapath: decode, exact multiply,
// floor-shift onto the 2^lsb grid, wrap-around accumulate; on `last`, round
// once and present. Byte-identical output for identical inputs. IEEE-like
// formats only; posit raises unsupported_error.
std::string emit_fdp(const PipelineParams& params, const AccumConfig& cfg,
                     const FormatSpec& fmt_in, const FormatSpec& fmt_out,
                     const std::string& module_name);

struct GoldenRow {
  BigInt a;
  BigInt b;
  bool last = false;
  std::optional<BigInt> expected;  // present on rows with last set
};

struct GoldenVectors {
  FormatSpec fmt_in;
  FormatSpec fmt_out;
  AccumConfig cfg;
  std::uint64_t seed = 0;
  std::vector<GoldenRow> rows;
};

// Seeded operand pairs grouped into dot products; expected results computed
// by the software fdp kernel, never hand-written.
GoldenVectors emit_golden(const FormatSpec& fmt_in, const AccumConfig& cfg,
                          const FormatSpec& fmt_out, std::size_t n_vectors,
                          std::uint64_t seed);

// CSV rows "a_hex,b_hex,last,expected_hex" under a '#' header echoing
// format,ovf:msb:lsb,out_format,seed.
std::string golden_csv(const GoldenVectors& g);
GoldenVectors parse_golden_csv(const std::string& text);

// Structural checks on emitted text: balanced module/endmodule, the port
// list, and declared widths against the pipeline parameters. Empty = pass.
std::vector<std::string> lint_fdp(const std::string& text, const PipelineParams& params);

}  // namespace fdp
