#include "fdp/rtl_gen.hpp"

#include <random>
#include <regex>
#include <sstream>

#include "fdp/kernels.hpp"

namespace fdp {
namespace {

int ceil_log2(std::int64_t v) {
  int w = 0;
  while ((std::int64_t(1) << w) < v) ++w;
  return w;
}

// Unit-weight exponent range of decoded operands of a format.
void unit_exp_range(const FormatSpec& fmt, std::int64_t& lo, std::int64_t& hi) {
  if (fmt.is_ieee()) {
    lo = static_cast<std::int64_t>(fmt.e_min()) - fmt.frac_bits;
    hi = static_cast<std::int64_t>(fmt.e_max()) - fmt.frac_bits;
  } else {
    const std::int64_t reach = static_cast<std::int64_t>(fmt.posit_n - 2)
                               << fmt.posit_es;
    lo = -reach - fmt.fraction_precision();
    hi = reach;
  }
}

std::string bin_ones(int count) { return std::to_string(count) + "'b" + std::string(count, '1'); }

}  // namespace

PipelineParams derive_params(const FormatSpec& fmt_in, const AccumConfig& cfg,
                             const FormatSpec& fmt_out) {
  PipelineParams p;
  p.in_width = fmt_in.width();
  p.out_width = fmt_out.width();
  p.acc_width = cfg.width();
  p.sig_prod_width = 2 * fmt_in.precision();

  std::int64_t lo, hi;
  unit_exp_range(fmt_in, lo, hi);
  p.exp_prod_min = 2 * lo;
  p.exp_prod_max = 2 * hi;

  const std::int64_t prod_top_max = p.exp_prod_max + p.sig_prod_width - 1;
  const std::int64_t top_kept = std::min<std::int64_t>(prod_top_max, cfg.msb + cfg.ovf);
  p.max_shift = std::max<std::int64_t>(0, top_kept - cfg.lsb);
  p.shift_count_width = std::max(1, ceil_log2(p.max_shift + 1));
  return p;
}

std::string emit_fdp(const PipelineParams& params, const AccumConfig& cfg,
                     const FormatSpec& fmt_in, const FormatSpec& fmt_out,
                     const std::string& module_name) {
  if (!fmt_in.is_ieee() || !fmt_out.is_ieee())
    throw unsupported_error("posit RTL emission is not supported; use an IEEE-like format");
  if (module_name.empty()) throw std::invalid_argument("emit_fdp: empty module name");

  const int iw = params.in_width;
  const int ow = params.out_width;
  const int accw = params.acc_width;
  const int eb = fmt_in.exp_bits;
  const int fb = fmt_in.frac_bits;
  const int p = fmt_in.precision();
  const int spw = params.sig_prod_width;
  const int op = fmt_out.precision();
  const int ofb = fmt_out.frac_bits;
  const int oeb = fmt_out.exp_bits;

  std::ostringstream v;
  v << "// " << module_name << ": fused dot-product datapath\n"
    << "// in: " << fmt_in.name() << ", accumulator <" << cfg.str() << "> ("
    << accw << " bits), out: " << fmt_out.name() << "\n"
    << "// Behavioral, one accumulation per valid_in cycle; exact products are\n"
    << "// floor-aligned to the 2^lsb grid and added modulo 2^" << accw << ".\n"
    << "// On `last`, the register is rounded once (RNE) and cleared.\n"
    << "`timescale 1ns/1ps\n"
    << "module " << module_name << " (\n"
    << "    input  wire                  clk,\n"
    << "    input  wire                  rst,\n"
    << "    input  wire                  valid_in,\n"
    << "    input  wire                  last,\n"
    << "    input  wire [" << iw - 1 << ":0] a,\n"
    << "    input  wire [" << iw - 1 << ":0] b,\n"
    << "    output reg                   valid_out,\n"
    << "    output reg  [" << ow - 1 << ":0] result\n"
    << ");\n\n";

  v << "  localparam integer IN_WIDTH          = " << iw << ";\n"
    << "  localparam integer OUT_WIDTH         = " << ow << ";\n"
    << "  localparam integer ACC_WIDTH         = " << accw << ";\n"
    << "  localparam integer SIG_PROD_WIDTH    = " << spw << ";\n"
    << "  localparam integer SHIFT_COUNT_WIDTH = " << params.shift_count_width << ";\n"
    << "  localparam integer MAX_SHIFT         = " << params.max_shift << ";\n"
    << "  localparam integer LSB_WEIGHT        = " << cfg.lsb << ";\n"
    << "  localparam integer IN_BIAS           = " << fmt_in.bias() << ";\n"
    << "  localparam integer IN_FRAC_BITS      = " << fb << ";\n"
    << "  localparam integer IN_EMIN_UNIT      = " << fmt_in.e_min() - fb << ";\n"
    << "  localparam integer OUT_PREC          = " << op << ";\n"
    << "  localparam integer OUT_BIAS          = " << fmt_out.bias() << ";\n"
    << "  localparam integer OUT_FRAC_BITS     = " << ofb << ";\n"
    << "  localparam integer OUT_EMIN          = " << fmt_out.e_min() << ";\n"
    << "  localparam integer OUT_EMAX          = " << fmt_out.e_max() << ";\n"
    << "  localparam integer OUT_MIN_LSB       = " << fmt_out.e_min() - ofb << ";\n\n";

  v << "  // operand fields\n"
    << "  wire                 sign_a = a[" << iw - 1 << "];\n"
    << "  wire                 sign_b = b[" << iw - 1 << "];\n"
    << "  wire [" << eb - 1 << ":0] exp_a  = a[" << iw - 2 << ":" << fb << "];\n"
    << "  wire [" << eb - 1 << ":0] exp_b  = b[" << iw - 2 << ":" << fb << "];\n"
    << "  wire [" << fb - 1 << ":0] frac_a = a[" << fb - 1 << ":0];\n"
    << "  wire [" << fb - 1 << ":0] frac_b = b[" << fb - 1 << ":0];\n"
    << "  wire a_exp_ones = (exp_a == " << bin_ones(eb) << ");\n"
    << "  wire b_exp_ones = (exp_b == " << bin_ones(eb) << ");\n"
    << "  wire a_nan  = a_exp_ones && (frac_a != 0);\n"
    << "  wire b_nan  = b_exp_ones && (frac_b != 0);\n"
    << "  wire a_inf  = a_exp_ones && (frac_a == 0);\n"
    << "  wire b_inf  = b_exp_ones && (frac_b == 0);\n"
    << "  wire a_zero = (exp_a == 0) && (frac_a == 0);\n"
    << "  wire b_zero = (exp_b == 0) && (frac_b == 0);\n"
    << "  wire [" << p - 1 << ":0] sig_a = (exp_a == 0) ? {1'b0, frac_a} : {1'b1, frac_a};\n"
    << "  wire [" << p - 1 << ":0] sig_b = (exp_b == 0) ? {1'b0, frac_b} : {1'b1, frac_b};\n"
    << "  wire sign_p = sign_a ^ sign_b;\n"
    << "  wire [" << spw - 1 << ":0] sig_prod = sig_a * sig_b;\n\n";

  v << "  reg signed [" << accw - 1 << ":0] acc;\n"
    << "  reg sticky_nan, sticky_inf_pos, sticky_inf_neg;\n\n";

  v << "  // exact product, floor-aligned to the accumulator grid\n"
    << "  integer exp_a_i, exp_b_i, exp_p, shamt;\n"
    << "  reg signed [" << spw << ":0] prod_signed;\n"
    << "  reg signed [" << accw - 1 << ":0] prod_mod;  // product mod 2^ACC_WIDTH\n"
    << "  reg signed [" << accw - 1 << ":0] addend;\n"
    << "  reg poison_step;\n"
    << "  always @* begin\n"
    << "    exp_a_i = (exp_a == 0) ? IN_EMIN_UNIT : (exp_a - IN_BIAS - IN_FRAC_BITS);\n"
    << "    exp_b_i = (exp_b == 0) ? IN_EMIN_UNIT : (exp_b - IN_BIAS - IN_FRAC_BITS);\n"
    << "    exp_p   = exp_a_i + exp_b_i;\n"
    << "    shamt   = exp_p - LSB_WEIGHT;\n"
    << "    prod_signed = sign_p ? -$signed({1'b0, sig_prod}) : $signed({1'b0, sig_prod});\n"
    << "    prod_mod = prod_signed;  // truncates or sign-extends to ACC_WIDTH\n"
    << "    poison_step = a_nan || b_nan || a_inf || b_inf;\n"
    << "    if (poison_step || a_zero || b_zero)\n"
    << "      addend = {ACC_WIDTH{1'b0}};\n"
    << "    else if (shamt >= 0)\n"
    << "      addend = (shamt >= ACC_WIDTH) ? {ACC_WIDTH{1'b0}} : (prod_mod <<< shamt);\n"
    << "    else if (-shamt > " << spw + 1 << ")\n"
    << "      addend = prod_signed[" << spw << "] ? {ACC_WIDTH{1'b1}} : {ACC_WIDTH{1'b0}};\n"
    << "    else\n"
    << "      addend = prod_signed >>> (-shamt);\n"
    << "  end\n\n";

  v << "  // final rounding: round-to-nearest-even into the output format\n"
    << "  function [" << ow - 1 << ":0] round_out;\n"
    << "    input signed [" << accw - 1 << ":0] v;\n"
    << "    reg sign;\n"
    << "    reg [" << accw - 1 << ":0] mag;\n"
    << "    reg [" << op << ":0] q;\n"
    << "    reg [" << op << ":0] qn;\n"
    << "    reg [" << oeb - 1 << ":0] biased;\n"
    << "    reg guard, sticky;\n"
    << "    integer i, msb_i, e_top, lsb_w, shift, q_top, e_q;\n"
    << "    begin\n"
    << "      sign = v[" << accw - 1 << "];\n"
    << "      mag = sign ? (~v + 1'b1) : v;\n"
    << "      if (mag == 0) begin\n"
    << "        round_out = {OUT_WIDTH{1'b0}};\n"
    << "      end else begin\n"
    << "        msb_i = 0;\n"
    << "        for (i = 0; i < ACC_WIDTH; i = i + 1)\n"
    << "          if (mag[i]) msb_i = i;\n"
    << "        e_top = msb_i + LSB_WEIGHT;\n"
    << "        lsb_w = (e_top - (OUT_PREC - 1) > OUT_MIN_LSB) ? e_top - (OUT_PREC - 1)\n"
    << "                                                       : OUT_MIN_LSB;\n"
    << "        shift = lsb_w - LSB_WEIGHT;\n"
    << "        if (shift <= 0) begin\n"
    << "          q = mag << (-shift);\n"
    << "        end else begin\n"
    << "          q = mag >> shift;\n"
    << "          guard = mag[shift-1];\n"
    << "          sticky = 1'b0;\n"
    << "          for (i = 0; i < shift - 1; i = i + 1)\n"
    << "            sticky = sticky | mag[i];\n"
    << "          if (guard && (sticky || q[0])) q = q + 1'b1;\n"
    << "        end\n"
    << "        if (q == 0) begin\n"
    << "          round_out = {sign, {(OUT_WIDTH-1){1'b0}}};\n"
    << "        end else begin\n"
    << "          q_top = 0;\n"
    << "          for (i = 0; i <= OUT_PREC; i = i + 1)\n"
    << "            if (q[i]) q_top = i;\n"
    << "          e_q = lsb_w + q_top;\n"
    << "          if (e_q > OUT_EMAX) begin\n"
    << "            round_out = {sign, " << bin_ones(oeb) << ", {OUT_FRAC_BITS{1'b0}}};\n"
    << "          end else if (e_q >= OUT_EMIN) begin\n"
    << "            qn = (q_top == OUT_PREC) ? (q >> 1) : (q << (OUT_PREC - 1 - q_top));\n"
    << "            biased = e_q + OUT_BIAS;\n"
    << "            round_out = {sign, biased, qn[" << ofb - 1 << ":0]};\n"
    << "          end else begin\n"
    << "            round_out = {sign, {" << oeb << "{1'b0}}, q[" << ofb - 1 << ":0]};\n"
    << "          end\n"
    << "        end\n"
    << "      end\n"
    << "    end\n"
    << "  endfunction\n\n";

  v << "  wire nan_now     = sticky_nan || a_nan || b_nan ||\n"
    << "                     ((a_inf && b_zero) || (b_inf && a_zero));\n"
    << "  wire inf_pos_now = sticky_inf_pos ||\n"
    << "                     ((a_inf || b_inf) && !a_zero && !b_zero && !sign_p);\n"
    << "  wire inf_neg_now = sticky_inf_neg ||\n"
    << "                     ((a_inf || b_inf) && !a_zero && !b_zero && sign_p);\n"
    << "  wire [" << ow - 1 << ":0] nan_pattern = {1'b0, " << bin_ones(oeb) << ", 1'b1, {"
    << ofb - 1 << "{1'b0}}};\n\n";

  v << "  always @(posedge clk) begin\n"
    << "    if (rst) begin\n"
    << "      acc            <= {ACC_WIDTH{1'b0}};\n"
    << "      sticky_nan     <= 1'b0;\n"
    << "      sticky_inf_pos <= 1'b0;\n"
    << "      sticky_inf_neg <= 1'b0;\n"
    << "      valid_out      <= 1'b0;\n"
    << "      result         <= {OUT_WIDTH{1'b0}};\n"
    << "    end else begin\n"
    << "      valid_out <= 1'b0;\n"
    << "      if (valid_in) begin\n"
    << "        if (last) begin\n"
    << "          if (nan_now || (inf_pos_now && inf_neg_now))\n"
    << "            result <= nan_pattern;\n"
    << "          else if (inf_pos_now)\n"
    << "            result <= {1'b0, " << bin_ones(oeb) << ", {OUT_FRAC_BITS{1'b0}}};\n"
    << "          else if (inf_neg_now)\n"
    << "            result <= {1'b1, " << bin_ones(oeb) << ", {OUT_FRAC_BITS{1'b0}}};\n"
    << "          else\n"
    << "            result <= round_out(acc + addend);\n"
    << "          valid_out      <= 1'b1;\n"
    << "          acc            <= {ACC_WIDTH{1'b0}};\n"
    << "          sticky_nan     <= 1'b0;\n"
    << "          sticky_inf_pos <= 1'b0;\n"
    << "          sticky_inf_neg <= 1'b0;\n"
    << "        end else begin\n"
    << "          acc <= acc + addend;\n"
    << "          if (a_nan || b_nan || (a_inf && b_zero) || (b_inf && a_zero))\n"
    << "            sticky_nan <= 1'b1;\n"
    << "          else if ((a_inf || b_inf) && !a_zero && !b_zero) begin\n"
    << "            if (sign_p) sticky_inf_neg <= 1'b1;\n"
    << "            else        sticky_inf_pos <= 1'b1;\n"
    << "          end\n"
    << "        end\n"
    << "      end\n"
    << "    end\n"
    << "  end\n\n"
    << "endmodule\n";
  return v.str();
}

GoldenVectors emit_golden(const FormatSpec& fmt_in, const AccumConfig& cfg,
                          const FormatSpec& fmt_out, std::size_t n_vectors,
                          std::uint64_t seed) {
  if (n_vectors < 1) throw std::invalid_argument("emit_golden: need at least one vector");
  cfg.width();

  GoldenVectors g;
  g.fmt_in = fmt_in;
  g.fmt_out = fmt_out;
  g.cfg = cfg;
  g.seed = seed;

  std::mt19937_64 rng(seed);
  const auto random_finite = [&]() -> BigInt {
    // Finite operand with a moderate exponent; never inf/nan.
    if (fmt_in.is_ieee()) {
      const int span = std::min(6, fmt_in.e_max() - 1);
      const std::int64_t biased =
          fmt_in.bias() + static_cast<std::int64_t>(rng() % (2 * span + 1)) - span;
      BigInt frac = 0;
      for (int got = 0; got < fmt_in.frac_bits; got += 32)
        frac = (frac << 32) | static_cast<std::uint32_t>(rng());
      frac &= (BigInt(1) << fmt_in.frac_bits) - 1;
      BigInt bits = frac | (BigInt(biased) << fmt_in.frac_bits);
      if (rng() & 1) bits |= BigInt(1) << (fmt_in.width() - 1);
      return bits;
    }
    BigInt bits;
    do {
      bits = BigInt(rng()) & ((BigInt(1) << fmt_in.width()) - 1);
    } while (bits == BigInt(1) << (fmt_in.width() - 1));  // skip NaR
    return bits;
  };

  std::size_t remaining = n_vectors;
  while (remaining > 0) {
    const std::size_t len = std::min<std::size_t>(1 + rng() % 8, remaining);
    std::vector<BigInt> xs(len), ys(len);
    for (std::size_t i = 0; i < len; ++i) {
      xs[i] = random_finite();
      ys[i] = random_finite();
    }
    const BigInt expected = fdp(xs, ys, fmt_in, cfg, fmt_out);
    for (std::size_t i = 0; i < len; ++i) {
      GoldenRow row;
      row.a = xs[i];
      row.b = ys[i];
      row.last = i + 1 == len;
      if (row.last) row.expected = expected;
      g.rows.push_back(std::move(row));
    }
    remaining -= len;
  }
  return g;
}

std::string golden_csv(const GoldenVectors& g) {
  std::ostringstream out;
  out << "# " << g.fmt_in.name() << "," << g.cfg.str() << "," << g.fmt_out.name() << ","
      << g.seed << "\n";
  const int iw = g.fmt_in.width();
  const int ow = g.fmt_out.width();
  for (const auto& row : g.rows) {
    out << to_hex(row.a, iw) << "," << to_hex(row.b, iw) << "," << (row.last ? 1 : 0)
        << "," << (row.expected ? to_hex(*row.expected, ow) : "") << "\n";
  }
  return out.str();
}

GoldenVectors parse_golden_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw std::invalid_argument("golden csv: missing '#' header");
  std::istringstream head(line.substr(2));
  std::string fmt_in, cfg, fmt_out, seed;
  if (!std::getline(head, fmt_in, ',') || !std::getline(head, cfg, ',') ||
      !std::getline(head, fmt_out, ',') || !std::getline(head, seed))
    throw std::invalid_argument("golden csv: bad header");

  GoldenVectors g;
  g.fmt_in = FormatSpec::parse(fmt_in);
  g.fmt_out = FormatSpec::parse(fmt_out);
  g.cfg = AccumConfig::parse(cfg);
  g.seed = std::stoull(seed);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, last, expected;
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    std::getline(row, last, ',');
    std::getline(row, expected);
    GoldenRow r;
    r.a = parse_hex(a);
    r.b = parse_hex(b);
    r.last = last == "1";
    if (!expected.empty()) r.expected = parse_hex(expected);
    g.rows.push_back(std::move(r));
  }
  return g;
}

std::vector<std::string> lint_fdp(const std::string& text, const PipelineParams& params) {
  std::vector<std::string> issues;

  std::size_t modules = 0, endmodules = 0, pos = 0;
  for (std::smatch m; std::regex_search(text.cbegin() + pos, text.cend(), m,
                                        std::regex(R"(\b(endmodule|module)\b)"));) {
    if (m[1] == "module") ++modules;
    else ++endmodules;
    pos += static_cast<std::size_t>(m.position(0) + m.length(0));
  }
  if (modules == 0) issues.push_back("no module declaration");
  if (modules != endmodules)
    issues.push_back("unbalanced module/endmodule (" + std::to_string(modules) + " vs " +
                     std::to_string(endmodules) + ")");

  const auto port_width = [&](const std::string& port) -> int {
    const std::regex re(R"(\[\s*(\d+)\s*:\s*0\s*\]\s*)" + port + R"(\b)");
    std::smatch m;
    if (!std::regex_search(text, m, re)) return -1;
    return std::stoi(m[1]) + 1;
  };
  for (const char* port : {"clk", "rst", "valid_in", "last", "valid_out"}) {
    if (text.find(port) == std::string::npos)
      issues.push_back(std::string("missing port ") + port);
  }
  const auto check_width = [&](const std::string& port, int want) {
    const int got = port_width(port);
    if (got != want)
      issues.push_back("port " + port + " width " + std::to_string(got) + ", expected " +
                       std::to_string(want));
  };
  check_width("a", params.in_width);
  check_width("b", params.in_width);
  check_width("result", params.out_width);

  const std::string acc_decl =
      "reg signed [" + std::to_string(params.acc_width - 1) + ":0] acc;";
  if (text.find(acc_decl) == std::string::npos)
    issues.push_back("missing " + std::to_string(params.acc_width) +
                     "-bit accumulator register declaration");
  return issues;
}

}  // namespace fdp
