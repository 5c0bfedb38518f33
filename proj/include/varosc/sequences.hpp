#ifndef VAROSC_SEQUENCES_HPP_
#define VAROSC_SEQUENCES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "varosc/errors.hpp"

namespace varosc {

namespace detail {

// Exact binary-rational view of a double beta = mant / 2^shift (shift may be
// negative).  Lets the generator round beta * n upward without ever touching
// floating-point products of large integers.
struct BinaryRational {
  std::int64_t mant;
  int shift;
};

inline BinaryRational decompose_double(double beta) {
  int ex = 0;
  const double fr = std::frexp(beta, &ex);  // beta = fr * 2^ex, fr in [0.5, 1)
  const auto mant = static_cast<std::int64_t>(std::ldexp(fr, 53));
  return {mant, 53 - ex};
}

// ceil(beta * n) with exact arithmetic; throws when the result leaves int64.
inline std::int64_t ceil_mul_exact(BinaryRational b, std::int64_t n) {
  using i128 = __int128;
  const i128 prod = static_cast<i128>(b.mant) * n;
  i128 q;
  if (b.shift >= 0) {
    const i128 one = 1;
    q = (prod + (one << b.shift) - 1) >> b.shift;
  } else {
    q = prod << (-b.shift);
    if ((q >> (-b.shift)) != prod) q = std::numeric_limits<std::int64_t>::max();
  }
  if (q > std::numeric_limits<std::int64_t>::max())
    throw resource_error("geometric_lacunary: term overflows 64-bit signed integers");
  return static_cast<std::int64_t>(q);
}

// Compare terms[i+1]/terms[i] < terms[j+1]/terms[j] by cross-multiplication.
inline bool ratio_less(const std::vector<std::int64_t>& t, std::size_t i, std::size_t j) {
  using i128 = __int128;
  return static_cast<i128>(t[i + 1]) * t[j] < static_cast<i128>(t[j + 1]) * t[i];
}

}  // namespace detail

// Minimum consecutive ratio of a strictly increasing positive integer list.
// The > 1 test is exact (integers strictly increase iff every ratio > 1);
// the returned double is the nearest rounding of the minimal ratio.
inline double validate_lacunary(const std::vector<std::int64_t>& terms) {
  if (terms.size() < 2)
    throw invalid_argument("validate_lacunary: need at least 2 terms to certify a ratio");
  if (terms[0] < 1)
    throw not_lacunary_error("validate_lacunary: terms must be positive", 0);
  std::size_t worst = 0;
  for (std::size_t k = 0; k + 1 < terms.size(); ++k) {
    if (terms[k + 1] <= terms[k])
      throw not_lacunary_error(
          "validate_lacunary: not strictly increasing at index " + std::to_string(k + 1),
          k + 1);
    if (k > 0 && detail::ratio_less(terms, k, worst)) worst = k;
  }
  return static_cast<double>(terms[worst + 1]) / static_cast<double>(terms[worst]);
}

// Strictly increasing positive integers with a certified ratio lower bound.
class LacunarySeq {
public:
  static LacunarySeq from_terms(std::vector<std::int64_t> terms) {
    const double certified = validate_lacunary(terms);
    return LacunarySeq(std::move(terms), certified, certified);
  }

  const std::vector<std::int64_t>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::int64_t operator[](std::size_t k) const { return terms_[k]; }
  std::int64_t back() const { return terms_.back(); }
  double beta_claimed() const noexcept { return beta_claimed_; }
  double beta_certified() const noexcept { return beta_certified_; }

private:
  friend LacunarySeq geometric_lacunary(double, std::int64_t, std::int64_t);
  LacunarySeq(std::vector<std::int64_t> terms, double claimed, double certified)
      : terms_(std::move(terms)), beta_claimed_(claimed), beta_certified_(certified) {}

  std::vector<std::int64_t> terms_;
  double beta_claimed_;
  double beta_certified_;
};

// n_{k+1} = max(ceil(beta * n_k), n_k + 1), rounded exactly so every
// consecutive ratio is >= beta.
inline LacunarySeq geometric_lacunary(double beta, std::int64_t count, std::int64_t n1 = 1) {
  if (!(beta > 1.0) || !std::isfinite(beta))
    throw not_lacunary_error("geometric_lacunary: beta must be > 1", 0);
  if (count < 2) throw invalid_argument("geometric_lacunary: count must be >= 2");
  if (n1 < 1) throw invalid_argument("geometric_lacunary: n1 must be >= 1");

  const detail::BinaryRational b = detail::decompose_double(beta);
  std::vector<std::int64_t> terms;
  terms.reserve(static_cast<std::size_t>(count));
  terms.push_back(n1);
  for (std::int64_t k = 1; k < count; ++k) {
    const std::int64_t prev = terms.back();
    const std::int64_t grown = detail::ceil_mul_exact(b, prev);  // throws on overflow
    terms.push_back(grown > prev ? grown : prev + 1);
  }
  const double certified = validate_lacunary(terms);
  return LacunarySeq(std::move(terms), beta, certified);
}

// All m in M with lo <= m < hi, ascending.
inline std::vector<std::int64_t> window(const LacunarySeq& m, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw invalid_argument("window: lo must be <= hi");
  const auto& t = m.terms();
  auto first = std::lower_bound(t.begin(), t.end(), lo);
  auto last = std::lower_bound(t.begin(), t.end(), hi);
  return std::vector<std::int64_t>(first, last);
}

}  // namespace varosc

#endif  // VAROSC_SEQUENCES_HPP_
