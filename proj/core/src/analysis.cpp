#include "fdp/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <set>

namespace fdp {
namespace {

// Deterministic Fisher-Yates, independent of the standard library's
// std::shuffle implementation.
void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

UnpackedReal exact_dot(const std::vector<UnpackedReal>& x,
                       const std::vector<UnpackedReal>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("exact_dot: vector lengths differ");
  UnpackedReal s = UnpackedReal::zero();
  for (std::size_t i = 0; i < x.size(); ++i)
    s = dyadic_add(s, dyadic_mul(x[i], y[i]));
  return s;
}

UnpackedReal exact_dot_bits(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                            const FormatSpec& fmt) {
  if (x.size() != y.size())
    throw std::invalid_argument("exact_dot: vector lengths differ");
  UnpackedReal s = UnpackedReal::zero();
  for (std::size_t i = 0; i < x.size(); ++i)
    s = dyadic_add(s, dyadic_mul(decode(x[i], fmt), decode(y[i], fmt)));
  return s;
}

double dot_condition(const std::vector<UnpackedReal>& x,
                     const std::vector<UnpackedReal>& y) {
  UnpackedReal num = UnpackedReal::zero();
  for (std::size_t i = 0; i < x.size(); ++i)
    num = dyadic_add(num, dyadic_abs(dyadic_mul(x[i], y[i])));
  const UnpackedReal den = exact_dot(x, y);
  if (num.is_zero()) return 1.0;
  if (den.is_zero() || !den.is_finite())
    return std::numeric_limits<double>::infinity();
  return std::exp2(log2_abs(num) - log2_abs(den));
}

double correct_bits(const BigInt& result, const FormatSpec& fmt, const UnpackedReal& exact) {
  const UnpackedReal v = decode(result, fmt);
  if (v.is_special()) return 0.0;
  const double cap = fmt.fraction_precision();
  if (result == encode(exact, fmt)) return cap;
  if (exact.is_zero()) return v.is_zero() ? cap : 0.0;
  if (v.is_inf() || !exact.is_finite()) return 0.0;
  const UnpackedReal diff = dyadic_add(v, dyadic_neg(exact));
  if (diff.is_zero()) return cap;  // same value, differently encoded
  const double rel_log2 = log2_abs(diff) - log2_abs(exact);
  return std::max(0.0, std::min(cap, -rel_log2));
}

ReproReport repro_probe(const std::vector<BigInt>& x, const std::vector<BigInt>& y,
                        const FormatSpec& in_fmt, const KernelSpec& kernel,
                        std::size_t permutations, std::uint64_t seed) {
  if (x.size() != y.size())
    throw std::invalid_argument("repro_probe: vector lengths differ");
  if (permutations < 2)
    throw std::invalid_argument("repro_probe: need at least 2 permutations");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  std::set<BigInt> distinct;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<BigInt> px(x.size()), py(y.size());
  for (std::size_t k = 0; k < permutations; ++k) {
    shuffle_indices(idx, rng);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      px[i] = x[idx[i]];
      py[i] = y[idx[i]];
    }
    const BigInt r = run_kernel(px, py, in_fmt, kernel);
    distinct.insert(r);
    const double v = to_double(decode(r, kernel.out_fmt));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  ReproReport rep;
  rep.kernel_id = kernel.id();
  rep.n = x.size();
  rep.permutations = permutations;
  rep.distinct_results = distinct.size();
  rep.max_abs_deviation = (std::isfinite(hi) && std::isfinite(lo)) ? hi - lo : 0.0;
  rep.bit_identical = distinct.size() == 1;
  rep.seed = seed;
  return rep;
}

namespace {

// Round a dyadic value (nearest-even) to the coarser of the absolute grid
// 2^-g and the format's p-bit precision. Results are always exactly
// representable and keep every product of two such values on the 2^(-2g)
// grid.
UnpackedReal quantize(const UnpackedReal& v, int g, int p) {
  if (!v.is_finite()) return v;
  const std::int64_t top = v.exponent + bit_length(v.significand) - 1;
  const std::int64_t grid = std::max<std::int64_t>(-g, top - (p - 1));
  const std::int64_t k = grid - v.exponent;
  if (k <= 0) return v;
  const BigInt rem = v.significand & ((BigInt(1) << k) - 1);
  BigInt q = v.significand >> k;
  const BigInt half = BigInt(1) << (k - 1);
  if (rem > half || (rem == half && (q & 1) != 0)) ++q;
  if (q == 0) return UnpackedReal::zero(v.negative);
  return UnpackedReal::finite(v.negative, q, grid);
}

}  // namespace

GeneratedDot gen_dot(std::size_t n, double target_cond, const FormatSpec& fmt,
                     std::uint64_t seed) {
  if (n < 6) throw std::invalid_argument("gen_dot: n must be >= 6");
  if (!(target_cond >= 1.0)) throw std::invalid_argument("gen_dot: target_cond must be >= 1");

  std::mt19937_64 rng(seed);
  const int p = fmt.precision();
  // Operands live on the 2^-g grid so products stay on the 2^(-2g) grid; a
  // tailored accumulator whose lsb is at or below -2g adds them exactly.
  const int g = fmt.fraction_precision() / 4 + 2;
  const double b = std::log2(target_cond);
  const int E = static_cast<int>(std::ceil(b / 2.0));
  if (E > p - g - 2)
    throw std::invalid_argument("gen_dot: target_cond out of range for the format");

  GeneratedDot out;
  out.x.resize(n);
  out.y.resize(n);
  std::vector<UnpackedReal> xd(n), yd(n);

  // Random grid value with top bit of weight 2^e.
  const auto grid_value = [&](int e, bool neg) {
    const std::uint64_t lo = std::uint64_t{1} << (e + g);
    std::uniform_int_distribution<std::uint64_t> dist(lo, 2 * lo - 1);
    return UnpackedReal::finite(neg, BigInt(dist(rng)), -g);
  };
  const auto coin = [&] { return (rng() & 1) != 0; };
  const auto put = [&](std::size_t i, const UnpackedReal& xv, const UnpackedReal& yv) {
    out.x[i] = encode(xv, fmt);
    out.y[i] = encode(yv, fmt);
    xd[i] = decode(out.x[i], fmt);
    yd[i] = decode(out.y[i], fmt);
  };

  if (b < 1.0) {
    // Well-conditioned: all-positive entries in [1/2, 1), no cancellation.
    for (std::size_t i = 0; i < n; ++i) put(i, grid_value(-1, false), grid_value(-1, false));
  } else {
    const std::size_t n2 = n / 2;
    std::uniform_int_distribution<int> edist(0, E);
    UnpackedReal running = UnpackedReal::zero();
    UnpackedReal sum_abs = UnpackedReal::zero();
    for (std::size_t i = 0; i < n2; ++i) {
      const int e = i == 0 ? E : i == n2 - 1 ? 0 : edist(rng);
      put(i, grid_value(e, coin()), grid_value(e, coin()));
      const UnpackedReal prod = dyadic_mul(xd[i], yd[i]);
      running = dyadic_add(running, prod);
      sum_abs = dyadic_add(sum_abs, dyadic_abs(prod));
    }
    // Cancellation stage: unit x entries, y chosen to pull the partial sum
    // onto targets whose exponents ramp back down from b/2 to 0.
    const UnpackedReal one = UnpackedReal::finite(false, BigInt(1), 0);
    const std::size_t m2 = n - n2 - 1;
    for (std::size_t j = 0; j < m2; ++j) {
      const std::size_t i = n2 + j;
      const int e = m2 == 1 ? 0
                            : static_cast<int>(std::llround(
                                  static_cast<double>(E) * static_cast<double>(m2 - 1 - j) /
                                  static_cast<double>(m2 - 1)));
      const UnpackedReal t = grid_value(e, coin());
      const UnpackedReal yv = quantize(dyadic_add(t, dyadic_neg(running)), g, p);
      put(i, one, yv);
      running = dyadic_add(running, yd[i]);
      sum_abs = dyadic_add(sum_abs, dyadic_abs(yd[i]));
    }
    // Last pair drives the exact dot to a grid value sized sum_abs / cond.
    const double desired = to_double(sum_abs) / target_cond;
    const std::int64_t m =
        std::max<std::int64_t>(1, std::llround(std::ldexp(desired, 2 * g)));
    const UnpackedReal exact_target = UnpackedReal::finite(coin(), BigInt(m), -2 * g);
    put(n - 1, one, dyadic_add(exact_target, dyadic_neg(running)));
  }

  out.exact = exact_dot(xd, yd);
  out.achieved_cond = dot_condition(xd, yd);
  return out;
}

double bits_per_watt_ratio(double bits1, double watts1, double bits2, double watts2) {
  if (watts1 <= 0.0 || watts2 <= 0.0)
    throw std::invalid_argument("bits_per_watt_ratio: watts must be positive");
  return (bits1 / watts1) / (bits2 / watts2);
}

std::vector<BitsPerWattRow> bits_per_watt(const std::map<std::string, double>& bits,
                                          const PowerConstants& constants) {
  const auto watts_of = [&](const std::string& id) {
    const auto it = constants.watts.find(id);
    if (it == constants.watts.end())
      throw std::invalid_argument("bits_per_watt: unknown kernel id '" + id + "'");
    return it->second;
  };
  std::vector<BitsPerWattRow> rows;
  for (const auto& [ka, ba] : bits) {
    for (const auto& [kb, bb] : bits) {
      if (ka == kb) continue;
      rows.push_back({ka, kb, bits_per_watt_ratio(ba, watts_of(ka), bb, watts_of(kb))});
    }
  }
  return rows;
}

void write_dot_report_csv(std::ostream& out, const std::vector<DotReport>& reports,
                          bool header) {
  if (header) out << "n,cond,kernel,result_hex,correct_bits\n";
  for (const auto& r : reports) {
    for (const auto& e : r.per_kernel) {
      out << r.n << "," << r.condition << "," << e.kernel_id << ","
          << to_hex(e.result, e.fmt.width()) << "," << e.correct_bits << "\n";
    }
  }
}

void write_repro_report_json(std::ostream& out, const ReproReport& r) {
  out << "{\"kernel\":\"" << r.kernel_id << "\",\"n\":" << r.n
      << ",\"permutations\":" << r.permutations
      << ",\"distinct_results\":" << r.distinct_results
      << ",\"max_abs_deviation\":" << r.max_abs_deviation
      << ",\"bit_identical\":" << (r.bit_identical ? "true" : "false")
      << ",\"seed\":" << r.seed << "}\n";
}

}  // namespace fdp
