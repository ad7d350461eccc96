// fdp: numerically-tailored dot product / GEMM experiment driver.
//
// Every subcommand is deterministic given its arguments and seed; when no
// seed is passed the documented default (1729) is used and echoed, so any
// run can be replayed exactly.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fdp/analysis.hpp"
#include "fdp/kernels.hpp"
#include "fdp/rtl_gen.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1729;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnsupported = 3;

std::vector<fdp::BigInt> parse_vector(const std::string& csv, const fdp::FormatSpec& fmt) {
  std::vector<fdp::BigInt> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(fdp::parse_operand(tok, fmt));
  return out;
}

std::vector<std::string> split(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

// "fdp" (geometry from --acc) or "fma:<ieee format>".
fdp::KernelSpec make_kernel(const std::string& name, const fdp::AccumConfig& cfg,
                            const fdp::FormatSpec& out_fmt) {
  if (name == "fdp") return fdp::KernelSpec::fdp(cfg, out_fmt);
  if (name.rfind("fma:", 0) == 0)
    return fdp::KernelSpec::fma_chain(fdp::FormatSpec::parse(name.substr(4)), out_fmt);
  throw std::invalid_argument("unknown kernel '" + name + "' (expected fdp or fma:<format>)");
}

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  return file;
}

// Power reporting id for a kernel: the published constants cover the 64/128
// bit FMA units and the 91-bit FDP.
std::string power_id(const fdp::KernelSpec& k) {
  return k.kind == fdp::KernelSpec::Kind::fdp ? "fdp_91bit" : "fma_" + k.acc_fmt.name();
}

int cmd_dot(const std::string& fmt_name, const std::string& acc_str,
            const std::string& kernel_name, std::string out_fmt_name,
            const std::string& xs, const std::string& ys, bool json) {
  const auto fmt = fdp::FormatSpec::parse(fmt_name);
  const auto cfg = fdp::AccumConfig::parse(acc_str);
  if (out_fmt_name.empty())
    out_fmt_name = kernel_name.rfind("fma:", 0) == 0 ? kernel_name.substr(4) : fmt_name;
  const auto kernel = make_kernel(kernel_name, cfg, fdp::FormatSpec::parse(out_fmt_name));

  const auto x = parse_vector(xs, fmt);
  const auto y = parse_vector(ys, fmt);
  const fdp::BigInt result = fdp::run_kernel(x, y, fmt, kernel);
  const fdp::UnpackedReal exact = fdp::exact_dot_bits(x, y, fmt);
  const double bits = fdp::correct_bits(result, kernel.out_fmt, exact);

  const std::string hex = fdp::to_hex(result, kernel.out_fmt.width());
  if (json) {
    std::cout << "{\"kernel\":\"" << kernel.id() << "\",\"result_hex\":\"" << hex
              << "\",\"correct_bits\":" << bits << "}\n";
  } else {
    std::cout << "kernel,result_hex,correct_bits\n"
              << kernel.id() << "," << hex << "," << bits << "\n";
  }
  return kExitOk;
}

int cmd_ssh_sweep(const std::string& sizes_csv, const std::string& conds_csv,
                  const std::string& acc_str, std::uint64_t seed, const std::string& out_path) {
  const auto cfg = fdp::AccumConfig::parse(acc_str);
  const auto b64 = fdp::FormatSpec::binary64();
  const auto b128 = fdp::FormatSpec::binary128();

  std::vector<std::size_t> sizes;
  for (const auto& s : split(sizes_csv)) {
    const long v = std::stol(s);
    if (v < 6) throw std::invalid_argument("--sizes entries must be >= 6");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  std::vector<double> conds;
  for (const auto& s : split(conds_csv)) {
    const double v = std::stod(s);
    if (v < 1.0) throw std::invalid_argument("--conds entries must be >= 1");
    conds.push_back(v);
  }
  if (sizes.empty() || conds.empty())
    throw std::invalid_argument("--sizes and --conds must be nonempty");

  const std::vector<fdp::KernelSpec> kernels = {
      fdp::KernelSpec::fma_chain(b64, b64),
      fdp::KernelSpec::fma_chain(b128, b128),
      fdp::KernelSpec::fdp(cfg, b64),
  };
  const fdp::PowerConstants power;

  std::ofstream file;
  std::ostream& out = open_sink(file, out_path);
  std::cerr << "seed," << seed << "\n";
  out << "n,cond,kernel,result_hex,correct_bits,watts_paper_constant,"
         "bits_per_watt_paper_constant\n";

  std::map<std::string, std::vector<double>> bits_by_kernel;
  std::uint64_t instance_seed = seed;
  for (const std::size_t n : sizes) {
    for (const double cond : conds) {
      const auto g = fdp::gen_dot(n, cond, b64, instance_seed++);
      for (const auto& k : kernels) {
        const fdp::BigInt r = fdp::run_kernel(g.x, g.y, b64, k);
        const double bits = fdp::correct_bits(r, k.out_fmt, g.exact);
        const double watts = power.watts.at(power_id(k));
        bits_by_kernel[power_id(k)].push_back(bits);
        out << n << "," << g.achieved_cond << "," << k.id() << ","
            << fdp::to_hex(r, k.out_fmt.width()) << "," << bits << "," << watts << ","
            << bits / watts << "\n";
      }
    }
  }

  // Median correct bits per kernel, then the pairwise bits-per-watt ratios.
  std::map<std::string, double> median_bits;
  for (auto& [id, v] : bits_by_kernel) {
    std::sort(v.begin(), v.end());
    median_bits[id] = v[v.size() / 2];
  }
  for (const auto& row : fdp::bits_per_watt(median_bits, power)) {
    if (row.kernel_a != "fdp_91bit") continue;
    out << "# bits_per_watt_ratio," << row.kernel_a << "_vs_" << row.kernel_b << ","
        << row.ratio << ",paper_constant\n";
  }
  return kExitOk;
}

int cmd_repro(const std::string& kernel_name, const std::string& acc_str,
              const std::string& fmt_name, std::string out_fmt_name, std::size_t n,
              std::size_t permutations, double cond, std::uint64_t seed, bool json) {
  const auto fmt = fdp::FormatSpec::parse(fmt_name);
  const auto cfg = fdp::AccumConfig::parse(acc_str);
  if (out_fmt_name.empty())
    out_fmt_name = kernel_name.rfind("fma:", 0) == 0 ? kernel_name.substr(4) : fmt_name;
  const auto kernel = make_kernel(kernel_name, cfg, fdp::FormatSpec::parse(out_fmt_name));

  const auto g = fdp::gen_dot(n, cond, fmt, seed);
  const auto rep = fdp::repro_probe(g.x, g.y, fmt, kernel, permutations, seed);
  if (json) {
    fdp::write_repro_report_json(std::cout, rep);
    return kExitOk;
  }
  std::cout << "seed," << seed << "\n"
            << "kernel," << rep.kernel_id << "\n"
            << "n," << rep.n << "\n"
            << "cond," << g.achieved_cond << "\n"
            << "permutations," << rep.permutations << "\n"
            << "distinct_results," << rep.distinct_results << "\n"
            << "max_abs_deviation," << rep.max_abs_deviation << "\n"
            << "bit_identical," << (rep.bit_identical ? 1 : 0) << "\n";
  return kExitOk;
}

int cmd_gemm(const std::string& a_path, const std::string& b_path, const std::string& c_path,
             const std::string& alpha_str, const std::string& beta_str,
             const std::string& kernel_name, const std::string& acc_str,
             std::string out_fmt_name, int workers, const std::string& out_path) {
  const auto A = fdp::load_matrix(a_path);
  const auto B = fdp::load_matrix(b_path);
  const auto C = c_path.empty() ? fdp::PackedMatrix::zeros(A.rows, B.cols, A.fmt)
                                : fdp::load_matrix(c_path);
  const auto cfg = fdp::AccumConfig::parse(acc_str);
  if (out_fmt_name.empty()) out_fmt_name = A.fmt.name();
  const auto kernel = make_kernel(kernel_name, cfg, fdp::FormatSpec::parse(out_fmt_name));

  const fdp::BigInt alpha = fdp::parse_operand(alpha_str, A.fmt);
  const fdp::BigInt beta = fdp::parse_operand(beta_str, A.fmt);
  const auto out_matrix = fdp::gemm(alpha, A, B, beta, C, kernel, workers);

  std::ofstream file;
  std::ostream& out = open_sink(file, out_path);
  fdp::write_matrix_csv(out, out_matrix);
  return kExitOk;
}

int cmd_gendot(std::size_t n, double cond, const std::string& fmt_name, std::uint64_t seed,
               const std::string& out_path) {
  const auto fmt = fdp::FormatSpec::parse(fmt_name);
  const auto g = fdp::gen_dot(n, cond, fmt, seed);

  std::ofstream file;
  std::ostream& out = open_sink(file, out_path);
  std::cerr << "seed," << seed << "\n";
  out << "# n=" << n << ",target_cond=" << cond << ",achieved_cond=" << g.achieved_cond
      << ",exact=" << g.exact.str() << ",format=" << fmt.name() << ",seed=" << seed << "\n";
  out << "x_hex,y_hex\n";
  for (std::size_t i = 0; i < g.x.size(); ++i)
    out << fdp::to_hex(g.x[i], fmt.width()) << "," << fdp::to_hex(g.y[i], fmt.width())
        << "\n";
  return kExitOk;
}

int cmd_rtl(const std::string& fmt_name, std::string out_fmt_name, const std::string& acc_str,
            std::string name, std::size_t n_vectors, std::uint64_t seed,
            const std::string& out_dir) {
  const auto fmt_in = fdp::FormatSpec::parse(fmt_name);
  if (out_fmt_name.empty()) out_fmt_name = fmt_name;
  const auto fmt_out = fdp::FormatSpec::parse(out_fmt_name);
  const auto cfg = fdp::AccumConfig::parse(acc_str);

  if (name.empty()) {
    name = "fdp_" + fmt_in.name() + "_acc_" + cfg.str();
    for (auto& c : name)
      if (c == ':' || c == '-') c = c == ':' ? '_' : 'm';
  }

  const auto params = fdp::derive_params(fmt_in, cfg, fmt_out);
  const std::string verilog = fdp::emit_fdp(params, cfg, fmt_in, fmt_out, name);
  const auto golden = fdp::emit_golden(fmt_in, cfg, fmt_out, n_vectors, seed);

  const std::string vpath = out_dir + "/" + name + ".v";
  const std::string gpath = out_dir + "/" + name + "_golden.csv";
  std::ofstream vf(vpath);
  if (!vf) throw std::invalid_argument("cannot write '" + vpath + "'");
  vf << verilog;
  std::ofstream gf(gpath);
  if (!gf) throw std::invalid_argument("cannot write '" + gpath + "'");
  gf << fdp::golden_csv(golden);

  std::cout << "seed," << seed << "\n"
            << "verilog," << vpath << "\n"
            << "golden," << gpath << "\n"
            << "acc_width," << params.acc_width << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerically-tailored fused dot products, GEMM kernels, and RTL collateral"};
  app.require_subcommand(1);

  // --- dot ---
  auto* dot = app.add_subcommand("dot", "One dot product; prints result and correct bits");
  std::string dot_fmt = "binary64", dot_acc = "30:30:-30", dot_kernel = "fdp";
  std::string dot_out_fmt, dot_x, dot_y;
  bool dot_json = false;
  dot->add_option("--fmt", dot_fmt, "Input format")->capture_default_str();
  dot->add_option("--acc", dot_acc, "Accumulator ovf:msb:lsb")->capture_default_str();
  dot->add_option("--kernel", dot_kernel, "fdp or fma:<format>")->capture_default_str();
  dot->add_option("--out-fmt", dot_out_fmt, "Output format (default: input format)");
  dot->add_option("--x", dot_x, "Comma-separated x (hex patterns or decimals)")->required();
  dot->add_option("--y", dot_y, "Comma-separated y")->required();
  dot->add_flag("--json", dot_json, "JSON output");

  // --- ssh-sweep ---
  auto* sweep = app.add_subcommand(
      "ssh-sweep", "Correct-bits sweep over sizes/conditions: FMA64, FMA128 vs FDP");
  std::string sw_sizes = "128,256,512,1024", sw_conds = "1e5,1e10,1e15,1e20";
  std::string sw_acc = "30:30:-30", sw_out;
  std::uint64_t sw_seed = kDefaultSeed;
  sweep->add_option("--sizes", sw_sizes, "Vector sizes")->capture_default_str();
  sweep->add_option("--conds", sw_conds, "Target condition numbers")->capture_default_str();
  sweep->add_option("--acc", sw_acc, "FDP accumulator ovf:msb:lsb")->capture_default_str();
  sweep->add_option("--seed", sw_seed, "RNG seed")->capture_default_str();
  sweep->add_option("--out", sw_out, "Output CSV path (default: stdout)");

  // --- repro ---
  auto* repro = app.add_subcommand("repro", "Permutation reproducibility probe");
  std::string rp_kernel = "fdp", rp_acc = "30:30:-30", rp_fmt = "binary64", rp_out_fmt;
  std::size_t rp_n = 512, rp_k = 1000;
  double rp_cond = 1e15;
  std::uint64_t rp_seed = kDefaultSeed;
  bool rp_json = false;
  repro->add_option("--kernel", rp_kernel, "fdp or fma:<format>")->capture_default_str();
  repro->add_option("--acc", rp_acc, "Accumulator ovf:msb:lsb")->capture_default_str();
  repro->add_option("--fmt", rp_fmt, "Input format")->capture_default_str();
  repro->add_option("--out-fmt", rp_out_fmt, "Output format");
  repro->add_option("--n", rp_n, "Vector length")->capture_default_str();
  repro->add_option("--K", rp_k, "Permutation count")->capture_default_str();
  repro->add_option("--cond", rp_cond, "Target condition number")->capture_default_str();
  repro->add_option("--seed", rp_seed, "RNG seed")->capture_default_str();
  repro->add_flag("--json", rp_json, "JSON output");

  // --- gemm ---
  auto* gemm = app.add_subcommand("gemm", "C' = alpha*A*B + beta*C on matrix CSV files");
  std::string gm_a, gm_b, gm_c, gm_alpha = "1", gm_beta = "0";
  std::string gm_kernel = "fdp", gm_acc = "30:30:-30", gm_out_fmt, gm_out;
  int gm_workers = 1;
  gemm->add_option("--a", gm_a, "Left matrix CSV")->required();
  gemm->add_option("--b", gm_b, "Right matrix CSV")->required();
  gemm->add_option("--c", gm_c, "Addend matrix CSV (default: zeros)");
  gemm->add_option("--alpha", gm_alpha, "Scalar alpha")->capture_default_str();
  gemm->add_option("--beta", gm_beta, "Scalar beta")->capture_default_str();
  gemm->add_option("--kernel", gm_kernel, "fdp or fma:<format>")->capture_default_str();
  gemm->add_option("--acc", gm_acc, "Accumulator ovf:msb:lsb")->capture_default_str();
  gemm->add_option("--out-fmt", gm_out_fmt, "Output format (default: A's format)");
  gemm->add_option("--workers", gm_workers, "Worker threads")->capture_default_str();
  gemm->add_option("--out", gm_out, "Output CSV path (default: stdout)");

  // --- gendot ---
  auto* gendot = app.add_subcommand("gendot", "Ill-conditioned dot product instance");
  std::size_t gd_n = 512;
  double gd_cond = 1e15;
  std::string gd_fmt = "binary64", gd_out;
  std::uint64_t gd_seed = kDefaultSeed;
  gendot->add_option("--n", gd_n, "Vector length (>= 6)")->capture_default_str();
  gendot->add_option("--cond", gd_cond, "Target condition number")->capture_default_str();
  gendot->add_option("--fmt", gd_fmt, "Storage format")->capture_default_str();
  gendot->add_option("--seed", gd_seed, "RNG seed")->capture_default_str();
  gendot->add_option("--out", gd_out, "Output CSV path (default: stdout)");

  // --- rtl ---
  auto* rtl = app.add_subcommand("rtl", "Emit Verilog FDP datapath + golden vectors");
  std::string rt_fmt = "binary64", rt_out_fmt, rt_acc = "30:30:-30", rt_name, rt_dir = ".";
  std::size_t rt_vectors = 64;
  std::uint64_t rt_seed = kDefaultSeed;
  rtl->add_option("--fmt", rt_fmt, "Input format")->capture_default_str();
  rtl->add_option("--out-fmt", rt_out_fmt, "Output format (default: input format)");
  rtl->add_option("--acc", rt_acc, "Accumulator ovf:msb:lsb")->capture_default_str();
  rtl->add_option("--name", rt_name, "Module name (default: derived)");
  rtl->add_option("--vectors", rt_vectors, "Golden operand pair count")->capture_default_str();
  rtl->add_option("--seed", rt_seed, "RNG seed")->capture_default_str();
  rtl->add_option("--out-dir", rt_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*dot)
      return cmd_dot(dot_fmt, dot_acc, dot_kernel, dot_out_fmt, dot_x, dot_y, dot_json);
    if (*sweep) return cmd_ssh_sweep(sw_sizes, sw_conds, sw_acc, sw_seed, sw_out);
    if (*repro)
      return cmd_repro(rp_kernel, rp_acc, rp_fmt, rp_out_fmt, rp_n, rp_k, rp_cond, rp_seed,
                       rp_json);
    if (*gemm)
      return cmd_gemm(gm_a, gm_b, gm_c, gm_alpha, gm_beta, gm_kernel, gm_acc, gm_out_fmt,
                      gm_workers, gm_out);
    if (*gendot) return cmd_gendot(gd_n, gd_cond, gd_fmt, gd_seed, gd_out);
    if (*rtl)
      return cmd_rtl(rt_fmt, rt_out_fmt, rt_acc, rt_name, rt_vectors, rt_seed, rt_dir);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const fdp::unsupported_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
