#ifndef VAROSC_SYMBOL_HPP_
#define VAROSC_SYMBOL_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "varosc/errors.hpp"
#include "varosc/parallel.hpp"
#include "varosc/sequences.hpp"

namespace varosc {

inline constexpr double kPi = 3.14159265358979323846;

// Map theta in (0, 2pi) to its conjugate representative in (0, pi].
inline double reduce_to_halfcircle(double theta) {
  if (!(theta > 0.0) || !(theta < 2.0 * kPi))
    throw invalid_argument("reduce_to_halfcircle: theta must be in (0, 2pi)");
  return theta <= kPi ? theta : 2.0 * kPi - theta;
}

namespace detail {
inline void require_theta(double theta, const char* who) {
  if (!(theta > 0.0) || !(theta <= kPi))
    throw invalid_argument(std::string(who) + ": theta must be in (0, pi]");
}
}  // namespace detail

// Mean of the first n powers of e^{i theta}, evaluated through the
// sine-ratio closed form.  The ratio form stays stable down to theta ~ 1/n
// where the naive (gamma^n - 1)/(gamma - 1) quotient cancels.
inline std::complex<double> symbol(std::int64_t n, double theta) {
  if (n < 1) throw invalid_argument("symbol: n must be >= 1");
  detail::require_theta(theta, "symbol");
  const double nd = static_cast<double>(n);
  return std::polar(1.0, theta * (nd + 1.0) / 2.0) *
         (std::sin(nd * theta / 2.0) / (nd * std::sin(theta / 2.0)));
}

// Boundary convention at gamma = 1: the mean of ones is 1 for every n.
inline std::complex<double> symbol_or_one(std::int64_t n, double theta) {
  if (n < 1) throw invalid_argument("symbol_or_one: n must be >= 1");
  if (theta == 0.0) return {1.0, 0.0};
  return symbol(n, theta);
}

// Sum over k of |a_{n_{k+1}} - a_{n_k}| for the finite sequence.
inline double symbol_variation(const LacunarySeq& nk, double theta) {
  detail::require_theta(theta, "symbol_variation");
  double total = 0.0;
  std::complex<double> prev = symbol(nk[0], theta);
  for (std::size_t k = 1; k < nk.size(); ++k) {
    const std::complex<double> cur = symbol(nk[k], theta);
    total += std::abs(cur - prev);
    prev = cur;
  }
  return total;
}

// Sum over k of the worst |a_m - a_{n_k}| with m ranging over M inside
// [n_k, n_{k+1}); empty windows contribute 0.
inline double symbol_oscillation(const LacunarySeq& nk, const LacunarySeq& m, double theta) {
  detail::require_theta(theta, "symbol_oscillation");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < nk.size(); ++k) {
    const auto win = window(m, nk[k], nk[k + 1]);
    if (win.empty()) continue;
    const std::complex<double> base = symbol(nk[k], theta);
    double sup = 0.0;
    for (std::int64_t mm : win) sup = std::max(sup, std::abs(symbol(mm, theta) - base));
    total += sup;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Threshold decomposition.
// ---------------------------------------------------------------------------

struct SymbolDecomposition {
  double theta = 0.0;
  std::optional<std::size_t> k0;  // 1-based first k with theta * n_k >= 1
  double I1 = 0.0;                // terms with theta * n_k < 1
  double I2 = 0.0;                // terms with theta * n_k >= 1
  double total = 0.0;             // I1 + I2
  double tail_bound = 0.0;        // overestimate of the discarded infinite tail
};

namespace detail {

// 16 beta / ((beta - 1) theta n_K): from |a_n| <= 2/(n |1-gamma|), the chord
// bound |1-gamma| >= theta/4, and the geometric decay of 1/n_k beyond n_K.
inline double tail_bound_value(const LacunarySeq& nk, double theta) {
  const double beta = nk.beta_certified();
  return 16.0 * beta / ((beta - 1.0) * theta * static_cast<double>(nk.back()));
}

template <typename TermFn>
SymbolDecomposition classify_terms(const LacunarySeq& nk, double theta, TermFn term) {
  SymbolDecomposition d;
  d.theta = theta;
  // classification uses the round-to-nearest product theta * n_k
  for (std::size_t k = 0; k < nk.size(); ++k) {
    if (theta * static_cast<double>(nk[k]) >= 1.0) {
      d.k0 = k + 1;
      break;
    }
  }
  for (std::size_t k = 0; k + 1 < nk.size(); ++k) {
    const double t = term(k);
    if (theta * static_cast<double>(nk[k]) < 1.0)
      d.I1 += t;
    else
      d.I2 += t;
  }
  d.total = d.I1 + d.I2;
  d.tail_bound = tail_bound_value(nk, theta);
  return d;
}

}  // namespace detail

// Classify the variation terms by the threshold theta * n_k >= 1.
inline SymbolDecomposition decompose(const LacunarySeq& nk, double theta) {
  detail::require_theta(theta, "decompose");
  std::vector<std::complex<double>> a(nk.size());
  for (std::size_t k = 0; k < nk.size(); ++k) a[k] = symbol(nk[k], theta);
  return detail::classify_terms(nk, theta,
                                [&](std::size_t k) { return std::abs(a[k + 1] - a[k]); });
}

// Same split applied to the oscillation terms.
inline SymbolDecomposition decompose_oscillation(const LacunarySeq& nk, const LacunarySeq& m,
                                                 double theta) {
  detail::require_theta(theta, "decompose_oscillation");
  std::vector<double> sups(nk.size() > 0 ? nk.size() - 1 : 0, 0.0);
  for (std::size_t k = 0; k + 1 < nk.size(); ++k) {
    const auto win = window(m, nk[k], nk[k + 1]);
    if (win.empty()) continue;
    const std::complex<double> base = symbol(nk[k], theta);
    for (std::int64_t mm : win)
      sups[k] = std::max(sups[k], std::abs(symbol(mm, theta) - base));
  }
  return detail::classify_terms(nk, theta, [&](std::size_t k) { return sups[k]; });
}

// ---------------------------------------------------------------------------
// Lemma audits.
// ---------------------------------------------------------------------------

struct ChordAuditReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double min_slack = 0.0;        // min of 2 sin(theta/2) - theta/4
  double min_slack_theta = 0.0;
};

// Checks |e^{i theta} - 1| = 2 sin(theta/2) >= theta / 4 on the grid.
inline ChordAuditReport chord_lower_bound_audit(const std::vector<double>& theta_grid) {
  ChordAuditReport r;
  r.min_slack = std::numeric_limits<double>::infinity();
  for (double t : theta_grid) {
    detail::require_theta(t, "chord_lower_bound_audit");
    const double slack = 2.0 * std::sin(t / 2.0) - t / 4.0;
    if (slack < r.min_slack) {
      r.min_slack = slack;
      r.min_slack_theta = t;
    }
    if (slack < 0.0) ++r.failures;
    ++r.checked;
  }
  return r;
}

struct KernelAuditReport {
  std::size_t checked = 0;
  std::size_t bound_failures = 0;   // points with |F'(x)| > (x+1)/x^2
  double min_bound_slack = 0.0;     // min of (x+1)/x^2 - |F'(x)|
  double worst_x = 0.0;             // location of the minimal slack
  double max_fd_rel_error = 0.0;    // analytic F' vs centered differences
  bool derivative_consistent = false;
};

// F(r) = (e^{ir} - 1)/r.  The analytic derivative is checked against the
// claimed envelope (x+1)/x^2 and cross-checked by centered differences.
inline std::complex<double> kernel_f(double r) {
  return (std::polar(1.0, r) - std::complex<double>{1.0, 0.0}) / r;
}

inline std::complex<double> kernel_f_prime(double x) {
  const std::complex<double> eix = std::polar(1.0, x);
  return (std::complex<double>{0.0, x} * eix - (eix - std::complex<double>{1.0, 0.0})) /
         (x * x);
}

inline KernelAuditReport kernel_audit(const std::vector<double>& x_grid) {
  KernelAuditReport r;
  r.min_bound_slack = std::numeric_limits<double>::infinity();
  for (double x : x_grid) {
    if (!(x > 0.0)) throw invalid_argument("kernel_audit: grid points must be > 0");
    const double fp = std::abs(kernel_f_prime(x));
    const double bound = (x + 1.0) / (x * x);
    const double slack = bound - fp;
    if (slack < r.min_bound_slack) {
      r.min_bound_slack = slack;
      r.worst_x = x;
    }
    if (slack < 0.0) ++r.bound_failures;

    const double h = std::max(1e-6, 1e-8 * x);
    const double fd = std::abs(kernel_f(x + h) - kernel_f(x - h)) / (2.0 * h);
    // |.| of the centered difference of F matches |F'| to O(h^2) here
    const double rel = std::abs(fd - fp) / std::max(fp, 1e-300);
    r.max_fd_rel_error = std::max(r.max_fd_rel_error, rel);
    ++r.checked;
  }
  r.derivative_consistent = r.max_fd_rel_error <= 1e-4;
  return r;
}

// ---------------------------------------------------------------------------
// Supremum sweep over the half circle.
// ---------------------------------------------------------------------------

struct SweepResult {
  double sup_estimate = 0.0;
  double theta_star = 0.0;
  SymbolDecomposition at_star;
  std::vector<SymbolDecomposition> samples;  // one per grid point, ascending theta
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::uint64_t grid_points = 0;
  int refine_iters = 0;
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo > 0.0) || !(lo < hi))
    throw invalid_argument("log_grid: degenerate grid");
  std::vector<double> g(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                              static_cast<double>(count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  if (count < 1 || !(lo <= hi)) throw invalid_argument("uniform_grid: degenerate grid");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(count);
  return g;
}

namespace detail {

// Golden-section maximization in log-theta; returns the best sample seen.
template <typename Fn>
std::pair<double, double> golden_refine(Fn f, double theta_lo, double theta_hi, int iters) {
  const double invphi = 0.6180339887498948482;
  double a = std::log(theta_lo), b = std::log(theta_hi);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(std::exp(c)), fd = f(std::exp(d));
  double best_t = fc >= fd ? std::exp(c) : std::exp(d);
  double best_v = std::max(fc, fd);
  for (int i = 0; i < iters; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(std::exp(d));
    }
    const double t = fc >= fd ? std::exp(c) : std::exp(d);
    const double v = std::max(fc, fd);
    if (v > best_v || (v == best_v && t < best_t)) {
      best_v = v;
      best_t = t;
    }
  }
  return {best_v, best_t};
}

}  // namespace detail

// Lower-bound estimate of sup over theta of the variation functional (or the
// oscillation functional when m is given).  Log-uniform grid over
// [theta_min, theta_max], then golden-section refinement inside the five best
// brackets.  Ties resolve toward the smallest theta so the result does not
// depend on worker scheduling.
inline SweepResult sweep_sup(const LacunarySeq& nk, const LacunarySeq* m,
                             std::uint64_t grid_points, int refine_iters,
                             double theta_min = 0.0, double theta_max = kPi,
                             unsigned workers = 0) {
  if (grid_points < 2) throw invalid_argument("sweep_sup: grid must have >= 2 points");
  if (refine_iters < 0) throw invalid_argument("sweep_sup: refine_iters must be >= 0");
  if (theta_min <= 0.0) theta_min = 1.0 / (10.0 * static_cast<double>(nk.back()));
  if (!(theta_min < theta_max) || !(theta_max <= kPi) || !(theta_min > 0.0))
    throw invalid_argument("sweep_sup: degenerate theta range");

  const auto functional = [&](double theta) {
    return m ? symbol_oscillation(nk, *m, theta) : symbol_variation(nk, theta);
  };
  const auto decomposition = [&](double theta) {
    return m ? decompose_oscillation(nk, *m, theta) : decompose(nk, theta);
  };

  SweepResult r;
  r.theta_min = theta_min;
  r.theta_max = theta_max;
  r.grid_points = grid_points;
  r.refine_iters = refine_iters;

  const std::vector<double> grid = log_grid(theta_min, theta_max, grid_points);
  r.samples.resize(grid.size());
  parallel_for_index(grid.size(), workers,
                     [&](std::size_t i) { r.samples[i] = decomposition(grid[i]); });

  // five best grid points, value descending with smallest-theta tie-break
  std::vector<std::size_t> top;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    top.push_back(i);
    std::sort(top.begin(), top.end(), [&](std::size_t x, std::size_t y) {
      if (r.samples[x].total != r.samples[y].total)
        return r.samples[x].total > r.samples[y].total;
      return x < y;
    });
    if (top.size() > 5) top.pop_back();
  }

  double best_v = -1.0, best_t = theta_max;
  for (std::size_t i : top) {
    if (r.samples[i].total > best_v ||
        (r.samples[i].total == best_v && grid[i] < best_t)) {
      best_v = r.samples[i].total;
      best_t = grid[i];
    }
  }
  if (refine_iters > 0) {
    for (std::size_t i : top) {
      const double lo = grid[i == 0 ? 0 : i - 1];
      const double hi = grid[std::min(i + 1, grid.size() - 1)];
      if (!(lo < hi)) continue;
      auto [v, t] = detail::golden_refine(functional, lo, hi, refine_iters);
      if (v > best_v || (v == best_v && t < best_t)) {
        best_v = v;
        best_t = t;
      }
    }
  }

  r.sup_estimate = best_v;
  r.theta_star = best_t;
  r.at_star = decomposition(best_t);
  return r;
}

}  // namespace varosc

#endif  // VAROSC_SYMBOL_HPP_
