#ifndef VAROSC_AVERAGES_HPP_
#define VAROSC_AVERAGES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "varosc/errors.hpp"
#include "varosc/linalg.hpp"
#include "varosc/sequences.hpp"

namespace varosc {

// n_max * dim^2 cap for the streaming pass.
inline constexpr std::int64_t kDefaultWorkBudget = std::int64_t{1} << 34;

// Sorted checkpoint indices at which ergodic averages are evaluated.
struct CheckpointPlan {
  std::vector<std::int64_t> indices;

  static CheckpointPlan from(const std::vector<std::int64_t>& ns) {
    if (ns.empty()) throw invalid_argument("CheckpointPlan: empty index set");
    CheckpointPlan p{ns};
    std::sort(p.indices.begin(), p.indices.end());
    p.indices.erase(std::unique(p.indices.begin(), p.indices.end()), p.indices.end());
    if (p.indices.front() < 1)
      throw invalid_argument("CheckpointPlan: indices must be positive");
    return p;
  }

  // Union of the sequence terms and every member of M inside some window.
  static CheckpointPlan from(const LacunarySeq& nk, const LacunarySeq* m = nullptr) {
    std::vector<std::int64_t> ix = nk.terms();
    if (m) {
      const auto extra = window(*m, nk.terms().front(), nk.back());
      ix.insert(ix.end(), extra.begin(), extra.end());
    }
    return from(ix);
  }

  std::int64_t n_max() const { return indices.back(); }
};

// Checkpoint averages A_n f, in plan order.
struct AverageTrace {
  std::vector<std::pair<std::int64_t, HVector>> rows;
  std::int64_t matvec_count = 0;

  const HVector& at(std::int64_t n) const {
    for (const auto& [idx, v] : rows)
      if (idx == n) return v;
    throw invalid_argument("AverageTrace: index " + std::to_string(n) + " not in trace");
  }
};

// Single streaming pass g_j = B g_{j-1}, S_j = S_{j-1} + g_j, emitting
// S_n / n at each checkpoint.  Performs exactly n_max matrix-vector products.
inline AverageTrace average_stream(const Operator& b, const HVector& f,
                                   const CheckpointPlan& plan,
                                   std::int64_t work_budget = kDefaultWorkBudget) {
  if (b.dim() != f.dim()) throw invalid_argument("average_stream: dimension mismatch");
  const std::int64_t d = static_cast<std::int64_t>(b.dim());
  const std::int64_t n_max = plan.n_max();
  if (n_max > work_budget / (d * d))
    throw resource_error("average_stream: n_max=" + std::to_string(n_max) + " at dim=" +
                         std::to_string(d) + " exceeds work budget n_max*dim^2 <= " +
                         std::to_string(work_budget) + " (raise --budget to override)");

  AverageTrace trace;
  trace.rows.reserve(plan.indices.size());
  HVector g = f;
  HVector sum = HVector::zero(f.dim());
  auto next_cp = plan.indices.begin();
  for (std::int64_t j = 1; j <= n_max; ++j) {
    g = b.apply(g);
    ++trace.matvec_count;
    sum += g;
    if (next_cp != plan.indices.end() && j == *next_cp) {
      HVector avg = sum;
      avg *= cplx{1.0 / static_cast<double>(j), 0.0};
      trace.rows.emplace_back(j, std::move(avg));
      ++next_cp;
    }
  }
  return trace;
}

namespace detail {

// (B^a, S_a) with S_a = sum_{j=1..a} B^j.  Composition
// (a) then (b):  S_{a+b} = S_a + B^a S_b,  B^{a+b} = B^a B^b.
struct PowerSum {
  Operator power;
  Operator sum;
};

inline PowerSum compose(const PowerSum& a, const PowerSum& b) {
  return {a.power * b.power, a.sum + a.power * b.sum};
}

}  // namespace detail

// Same checkpoint averages as average_stream, computed with O(log n_max)
// matrix products per checkpoint via binary splitting of the power sums.
// Makes n_K ~ 2^30 reachable where the stream would take hours.
inline AverageTrace checkpoint_averages(const Operator& b, const HVector& f,
                                        const CheckpointPlan& plan) {
  if (b.dim() != f.dim())
    throw invalid_argument("checkpoint_averages: dimension mismatch");

  std::vector<detail::PowerSum> cache;  // cache[j] covers a block of 2^j steps
  cache.push_back({b, b});
  const auto block = [&](int j) -> const detail::PowerSum& {
    while (static_cast<int>(cache.size()) <= j)
      cache.push_back(detail::compose(cache.back(), cache.back()));
    return cache[static_cast<std::size_t>(j)];
  };

  AverageTrace trace;
  trace.rows.reserve(plan.indices.size());
  detail::PowerSum state{Operator::identity(b.dim()), Operator(b.dim())};
  std::int64_t reached = 0;
  for (const std::int64_t n : plan.indices) {
    std::int64_t gap = n - reached;
    for (int j = 0; gap != 0; ++j, gap >>= 1)
      if (gap & 1) state = detail::compose(state, block(j));
    reached = n;
    HVector avg = state.sum.apply(f);
    avg *= cplx{1.0 / static_cast<double>(n), 0.0};
    trace.rows.emplace_back(n, std::move(avg));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Variation and oscillation functionals.
// ---------------------------------------------------------------------------

// (sum_k ||A_{n_{k+1}} f - A_{n_k} f||^p)^{1/p} over the finite sequence.
inline double variation_sum(const Operator& b, const HVector& f, const LacunarySeq& nk,
                            double p = 1.0) {
  if (nk.size() < 2) throw invalid_argument("variation_sum: need >= 2 sequence terms");
  if (!(p >= 1.0)) throw invalid_argument("variation_sum: p must be >= 1");
  const AverageTrace trace = checkpoint_averages(b, f, CheckpointPlan::from(nk));
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < trace.rows.size(); ++k) {
    const double d = (trace.rows[k + 1].second - trace.rows[k].second).norm();
    acc += (p == 1.0) ? d : std::pow(d, p);
  }
  return (p == 1.0) ? acc : std::pow(acc, 1.0 / p);
}

// sum_k sup over m in M
//
//   n_k <= m < n_{k+1}
//
// of ||A_m f - A_{n_k} f||; empty windows contribute 0.  All averages come
// from one ascending checkpoint pass.
inline double oscillation_sum(const Operator& b, const HVector& f, const LacunarySeq& nk,
                              const LacunarySeq& m) {
  if (nk.size() < 2) throw invalid_argument("oscillation_sum: need >= 2 sequence terms");
  const AverageTrace trace = checkpoint_averages(b, f, CheckpointPlan::from(nk, &m));
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < nk.size(); ++k) {
    const auto win = window(m, nk[k], nk[k + 1]);
    if (win.empty()) continue;
    const HVector& base = trace.at(nk[k]);
    double sup = 0.0;
    for (std::int64_t mm : win) sup = std::max(sup, (trace.at(mm) - base).norm());
    acc += sup;
  }
  return acc;
}

namespace detail {
inline void require_contraction(const Operator& t, const char* who) {
  const double nrm = operator_norm(t);
  if (nrm > 1.0 + kContractionTol)
    throw contract_violation(std::string(who) + ": operator norm " + std::to_string(nrm) +
                             " exceeds 1 + contraction_tol");
}
}  // namespace detail

// Theorems for contractions are checked on T directly; the dilation is the
// proof device and is certified separately by the dilation module.
inline double contraction_variation(const Operator& t, const HVector& f,
                                    const LacunarySeq& nk, double p = 1.0) {
  detail::require_contraction(t, "contraction_variation");
  return variation_sum(t, f, nk, p);
}

inline double contraction_oscillation(const Operator& t, const HVector& f,
                                      const LacunarySeq& nk, const LacunarySeq& m) {
  detail::require_contraction(t, "contraction_oscillation");
  return oscillation_sum(t, f, nk, m);
}

}  // namespace varosc

#endif  // VAROSC_AVERAGES_HPP_
