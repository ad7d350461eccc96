#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdp/accumulator.hpp"
#include "fdp/bigint.hpp"
#include "fdp/formats.hpp"

namespace fdp {

// Row-major matrix of packed bit patterns.
struct PackedMatrix {
  int rows = 0;
  int cols = 0;
  FormatSpec fmt;
  std::vector<BigInt> data;

  static PackedMatrix zeros(int rows, int cols, const FormatSpec& fmt);

  BigInt& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const BigInt& at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
};

// CSV with a one-line header "rows,cols,format"; entries are hex bit
// patterns (decimal literals accepted on read, encoded with RNE).
PackedMatrix read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const PackedMatrix& m);
PackedMatrix load_matrix(const std::string& path);
void store_matrix(const std::string& path, const PackedMatrix& m);

struct KernelSpec {
  enum class Kind { fdp, fma_chain };

  Kind kind = Kind::fdp;
  AccumConfig cfg;        // fdp only
  FormatSpec acc_fmt;     // fma_chain only; must be IEEE-like
  FormatSpec out_fmt;

  static KernelSpec fdp(const AccumConfig& cfg, const FormatSpec& out_fmt);
  static KernelSpec fma_chain(const FormatSpec& acc_fmt, const FormatSpec& out_fmt);

  std::string id() const;
};

// Fused dot product: exact products accumulated into one scratchpad, rounded
// once at the end. Empty vectors encode 0.
BigInt fdp(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
           const FormatSpec& in_fmt, const AccumConfig& cfg, const FormatSpec& out_fmt);

// Conventional baseline: s <- round(s + x_i*y_i) in acc_fmt, one rounding per
// step (fused multiply-add), strict left-to-right. Result is in acc_fmt.
BigInt fma_chain_dot(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                     const FormatSpec& in_fmt, const FormatSpec& acc_fmt);

// Runs either kernel and delivers the result in kernel.out_fmt.
BigInt run_kernel(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                  const FormatSpec& in_fmt, const KernelSpec& kernel);

// C' = alpha*A*B + beta*C. For the fdp kernel every output element folds all
// its terms (alpha pre-multiplied exactly, beta*C included) through a single
// accumulator and rounds once; the result is bit-identical for any worker
// count. For fma_chain, alpha and beta each cost one extra rounding.
PackedMatrix gemm(const BigInt& alpha, const PackedMatrix& A, const PackedMatrix& B,
                  const BigInt& beta, const PackedMatrix& C, const KernelSpec& kernel,
                  int workers = 1);

}  // namespace fdp
