#include "fdp/kernels.hpp"

#include <fstream>
#include <sstream>
#include <thread>

namespace fdp {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void check_lengths(std::size_t nx, std::size_t ny) {
  if (nx != ny)
    throw std::invalid_argument("dot product: vector lengths differ (" +
                                std::to_string(nx) + " vs " + std::to_string(ny) + ")");
}

std::vector<UnpackedReal> decode_all(const std::vector<BigInt>& v, const FormatSpec& fmt) {
  std::vector<UnpackedReal> out;
  out.reserve(v.size());
  for (const BigInt& bits : v) out.push_back(decode(bits, fmt));
  return out;
}

}  // namespace

PackedMatrix PackedMatrix::zeros(int rows, int cols, const FormatSpec& fmt) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix dims must be positive");
  PackedMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.fmt = fmt;
  m.data.assign(static_cast<std::size_t>(rows) * cols, BigInt(0));
  return m;
}

PackedMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("matrix file: missing header");
  const auto head = split_csv(line);
  if (head.size() != 3) throw std::invalid_argument("matrix header must be rows,cols,format");
  const int rows = std::stoi(head[0]);
  const int cols = std::stoi(head[1]);
  PackedMatrix m = PackedMatrix::zeros(rows, cols, FormatSpec::parse(head[2]));
  for (int i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("matrix file: expected " + std::to_string(rows) + " rows");
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != cols)
      throw std::invalid_argument("matrix file: row " + std::to_string(i) + " has " +
                                  std::to_string(cells.size()) + " columns, expected " +
                                  std::to_string(cols));
    for (int j = 0; j < cols; ++j) m.at(i, j) = parse_operand(cells[j], m.fmt);
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const PackedMatrix& m) {
  out << m.rows << "," << m.cols << "," << m.fmt.name() << "\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j)
      out << (j ? "," : "") << to_hex(m.at(i, j), m.fmt.width());
    out << "\n";
  }
}

PackedMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file '" + path + "'");
  return read_matrix_csv(in);
}

void store_matrix(const std::string& path, const PackedMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write matrix file '" + path + "'");
  write_matrix_csv(out, m);
}

KernelSpec KernelSpec::fdp(const AccumConfig& cfg, const FormatSpec& out_fmt) {
  cfg.width();
  KernelSpec k;
  k.kind = Kind::fdp;
  k.cfg = cfg;
  k.out_fmt = out_fmt;
  return k;
}

KernelSpec KernelSpec::fma_chain(const FormatSpec& acc_fmt, const FormatSpec& out_fmt) {
  if (!acc_fmt.is_ieee())
    throw std::invalid_argument("fma_chain accumulation format must be IEEE-like");
  KernelSpec k;
  k.kind = Kind::fma_chain;
  k.acc_fmt = acc_fmt;
  k.out_fmt = out_fmt;
  return k;
}

std::string KernelSpec::id() const {
  return kind == Kind::fdp ? "fdp<" + cfg.str() + ">" : "fma_" + acc_fmt.name();
}

BigInt fdp(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
           const FormatSpec& in_fmt, const AccumConfig& cfg, const FormatSpec& out_fmt) {
  check_lengths(x.size(), y.size());
  Accumulator acc(cfg);
  for (std::size_t i = 0; i < x.size(); ++i)
    acc.mac(decode(x[i], in_fmt), decode(y[i], in_fmt));
  return acc.round_into(out_fmt);
}

BigInt fma_chain_dot(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                     const FormatSpec& in_fmt, const FormatSpec& acc_fmt) {
  check_lengths(x.size(), y.size());
  if (!acc_fmt.is_ieee())
    throw std::invalid_argument("fma_chain accumulation format must be IEEE-like");
  UnpackedReal s = UnpackedReal::zero();
  BigInt bits = encode(s, acc_fmt);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const UnpackedReal p = dyadic_mul(decode(x[i], in_fmt), decode(y[i], in_fmt));
    bits = encode(dyadic_add(s, p), acc_fmt);  // single rounding per step
    s = decode(bits, acc_fmt);
  }
  return bits;
}

BigInt run_kernel(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                  const FormatSpec& in_fmt, const KernelSpec& kernel) {
  if (kernel.kind == KernelSpec::Kind::fdp)
    return fdp(x, y, in_fmt, kernel.cfg, kernel.out_fmt);
  const BigInt bits = fma_chain_dot(x, y, in_fmt, kernel.acc_fmt);
  if (kernel.acc_fmt == kernel.out_fmt) return bits;
  return encode(decode(bits, kernel.acc_fmt), kernel.out_fmt);
}

PackedMatrix gemm(const BigInt& alpha, const PackedMatrix& A, const PackedMatrix& B,
                  const BigInt& beta, const PackedMatrix& C, const KernelSpec& kernel,
                  int workers) {
  if (A.cols != B.rows || C.rows != A.rows || C.cols != B.cols)
    throw std::invalid_argument("gemm: dimension mismatch");
  if (!(A.fmt == B.fmt) || !(A.fmt == C.fmt))
    throw std::invalid_argument("gemm: operand formats must match");
  if (workers < 1) throw std::invalid_argument("gemm: workers must be >= 1");

  const FormatSpec& in_fmt = A.fmt;
  const UnpackedReal alpha_u = decode(alpha, in_fmt);
  const UnpackedReal beta_u = decode(beta, in_fmt);
  const auto a = decode_all(A.data, in_fmt);
  const auto b = decode_all(B.data, in_fmt);
  const auto c = decode_all(C.data, in_fmt);

  PackedMatrix out = PackedMatrix::zeros(A.rows, B.cols, kernel.out_fmt);
  const int rows = out.rows, cols = out.cols, inner = A.cols;

  const auto element = [&](int i, int j) -> BigInt {
    if (kernel.kind == KernelSpec::Kind::fdp) {
      Accumulator acc(kernel.cfg);
      for (int k = 0; k < inner; ++k)
        acc.mac(dyadic_mul(alpha_u, a[static_cast<std::size_t>(i) * inner + k]),
                b[static_cast<std::size_t>(k) * cols + j]);
      acc.mac(beta_u, c[static_cast<std::size_t>(i) * cols + j]);
      return acc.round_into(kernel.out_fmt);
    }
    // Conventional kernel: fma chain, then one rounding for alpha and one for
    // the beta*C fold.
    UnpackedReal s = UnpackedReal::zero();
    for (int k = 0; k < inner; ++k) {
      const UnpackedReal p = dyadic_mul(a[static_cast<std::size_t>(i) * inner + k],
                                        b[static_cast<std::size_t>(k) * cols + j]);
      s = decode(encode(dyadic_add(s, p), kernel.acc_fmt), kernel.acc_fmt);
    }
    s = decode(encode(dyadic_mul(alpha_u, s), kernel.acc_fmt), kernel.acc_fmt);
    s = decode(encode(dyadic_add(s, dyadic_mul(beta_u, c[static_cast<std::size_t>(i) * cols + j])),
                      kernel.acc_fmt),
               kernel.acc_fmt);
    return encode(s, kernel.out_fmt);
  };

  const std::size_t total = static_cast<std::size_t>(rows) * cols;
  const int nw = std::min<std::size_t>(workers, total) > 0
                     ? static_cast<int>(std::min<std::size_t>(workers, total))
                     : 1;
  if (nw == 1) {
    for (std::size_t idx = 0; idx < total; ++idx)
      out.data[idx] = element(static_cast<int>(idx / cols), static_cast<int>(idx % cols));
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t idx = static_cast<std::size_t>(w); idx < total; idx += nw)
        out.data[idx] = element(static_cast<int>(idx / cols), static_cast<int>(idx % cols));
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace fdp
