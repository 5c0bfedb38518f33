#ifndef VAROSC_HARNESS_HPP_
#define VAROSC_HARNESS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "varosc/averages.hpp"
#include "varosc/dilation.hpp"
#include "varosc/errors.hpp"
#include "varosc/io.hpp"
#include "varosc/linalg.hpp"
#include "varosc/parallel.hpp"
#include "varosc/rng.hpp"
#include "varosc/sequences.hpp"
#include "varosc/symbol.hpp"

namespace varosc {

inline constexpr const char* kVersion = "varosc 0.1.0";

// ---------------------------------------------------------------------------
// Sequence and operator specs (the CLI grammar lives here so experiments can
// echo their configuration).
// ---------------------------------------------------------------------------

// "geometric:<beta>:<count>[:<n1>]" or a comma-separated term list.
struct SeqSpec {
  enum class Kind { geometric, explicit_terms } kind = Kind::geometric;
  double beta = 2.0;
  std::int64_t count = 2;
  std::int64_t n1 = 1;
  std::vector<std::int64_t> terms;

  static SeqSpec geometric(double beta, std::int64_t count, std::int64_t n1 = 1) {
    SeqSpec s;
    s.kind = Kind::geometric;
    s.beta = beta;
    s.count = count;
    s.n1 = n1;
    return s;
  }

  static SeqSpec explicit_terms_of(std::vector<std::int64_t> terms) {
    SeqSpec s;
    s.kind = Kind::explicit_terms;
    s.terms = std::move(terms);
    return s;
  }

  static SeqSpec parse(const std::string& text) {
    if (text.rfind("geometric:", 0) == 0) {
      std::vector<std::string> parts;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(item);
      if (parts.size() < 3 || parts.size() > 4)
        throw invalid_argument("sequence spec '" + text +
                               "': expected geometric:<beta>:<count>[:<n1>]");
      try {
        return geometric(std::stod(parts[1]), std::stoll(parts[2]),
                         parts.size() == 4 ? std::stoll(parts[3]) : 1);
      } catch (const std::exception&) {
        throw invalid_argument("sequence spec '" + text + "': bad number");
      }
    }
    std::vector<std::int64_t> terms;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        terms.push_back(std::stoll(item));
      } catch (const std::exception&) {
        throw invalid_argument("sequence spec '" + text + "': bad term '" + item + "'");
      }
    }
    if (terms.empty()) throw invalid_argument("sequence spec '" + text + "': empty");
    return explicit_terms_of(std::move(terms));
  }

  LacunarySeq to_lacunary() const {
    if (kind == Kind::geometric) return geometric_lacunary(beta, count, n1);
    return LacunarySeq::from_terms(terms);
  }

  // Raw terms without the lacunarity certificate (roj-check accepts any
  // strictly increasing sequence).
  std::vector<std::int64_t> to_increasing_terms() const {
    if (kind == Kind::geometric) return geometric_lacunary(beta, count, n1).terms();
    std::vector<std::int64_t> t = terms;
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
      if (t[i + 1] <= t[i] || t[0] < 1)
        throw invalid_argument("sequence is not strictly increasing");
    return t;
  }

  std::string echo() const {
    if (kind == Kind::geometric) {
      std::ostringstream os;
      os << "geometric:" << fmt17(beta) << ":" << count << ":" << n1;
      return os.str();
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) os << (i ? "," : "") << terms[i];
    return os.str();
  }
};

// identity | diag:<angles> | random-unitary | random-contraction:<cap>
struct OperatorSpec {
  enum class Kind { identity, diag, random_unitary_k, random_contraction_k } kind =
      Kind::random_unitary_k;
  std::vector<double> phases;
  double norm_cap = 1.0;

  static OperatorSpec parse(const std::string& text) {
    OperatorSpec s;
    if (text == "identity") {
      s.kind = Kind::identity;
    } else if (text == "random-unitary") {
      s.kind = Kind::random_unitary_k;
    } else if (text.rfind("random-contraction:", 0) == 0) {
      s.kind = Kind::random_contraction_k;
      try {
        s.norm_cap = std::stod(text.substr(19));
      } catch (const std::exception&) {
        throw invalid_argument("operator spec '" + text + "': bad cap");
      }
    } else if (text.rfind("diag:", 0) == 0) {
      s.kind = Kind::diag;
      std::stringstream ss(text.substr(5));
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          s.phases.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw invalid_argument("operator spec '" + text + "': bad angle '" + item + "'");
        }
      }
      if (s.phases.empty()) throw invalid_argument("operator spec 'diag:' needs angles");
    } else {
      throw invalid_argument("unknown operator spec '" + text + "'");
    }
    return s;
  }

  Operator realize(std::size_t dim, std::uint64_t seed) const {
    switch (kind) {
      case Kind::identity: return Operator::identity(dim);
      case Kind::diag: return make_diagonal_unitary(phases);
      case Kind::random_unitary_k: return random_unitary(dim, seed);
      case Kind::random_contraction_k: return random_contraction(dim, seed, norm_cap);
    }
    throw invalid_argument("operator spec: unreachable");
  }

  bool is_contraction_kind() const { return kind == Kind::random_contraction_k; }

  std::string echo() const {
    switch (kind) {
      case Kind::identity: return "identity";
      case Kind::diag: {
        std::ostringstream os;
        os << "diag:";
        for (std::size_t i = 0; i < phases.size(); ++i)
          os << (i ? "," : "") << fmt17(phases[i]);
        return os.str();
      }
      case Kind::random_unitary_k: return "random-unitary";
      case Kind::random_contraction_k: return "random-contraction:" + fmt17(norm_cap);
    }
    return "?";
  }
};

// ---------------------------------------------------------------------------
// Experiment configuration and report.
// ---------------------------------------------------------------------------

enum class ExperimentKind {
  variation,
  oscillation,
  sweep,
  constant_curve,
  diverge,
  dilation_check,
  roj_check
};

inline const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::variation: return "variation";
    case ExperimentKind::oscillation: return "oscillation";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::constant_curve: return "constant-curve";
    case ExperimentKind::diverge: return "diverge";
    case ExperimentKind::dilation_check: return "dilation-check";
    case ExperimentKind::roj_check: return "roj-check";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::variation;
  std::vector<int> dims = {4};
  int trials = 1;
  std::uint64_t seed = 1;
  std::optional<SeqSpec> nk;  // roj-check draws random sequences when unset
  std::optional<SeqSpec> m;
  OperatorSpec op;
  double p = 1.0;
  unsigned workers = 0;
  std::optional<double> assert_max_ratio;  // finding when exceeded

  void validate() const {
    if (trials < 1) throw invalid_argument("config: trials must be >= 1");
    if (dims.empty()) throw invalid_argument("config: need at least one dimension");
    for (int d : dims)
      if (d < 1) throw invalid_argument("config: dimensions must be >= 1");
  }
};

struct TrialRow {
  std::uint64_t seed = 0;
  int dim = 0;
  double value = 0.0;
  double f_norm = 0.0;
  double ratio = 0.0;
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::variation;
  std::vector<TrialRow> rows;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::string config_echo;
  std::string version = kVersion;
  bool finding = false;  // an asserted bound was exceeded
  std::string finding_message;
};

// CSV schema for per-trial rows: seed,dim,value,f_norm,ratio.
inline std::string ensemble_csv(const ExperimentReport& rep) {
  std::string out = "seed,dim,value,f_norm,ratio\n";
  for (const TrialRow& r : rep.rows) {
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.dim);
    out += ',';
    out += fmt17(r.value);
    out += ',';
    out += fmt17(r.f_norm);
    out += ',';
    out += fmt17(r.ratio);
    out += '\n';
  }
  return out;
}

namespace detail {

inline void summarize(ExperimentReport& rep) {
  double mx = 0.0, mean = 0.0;
  for (const TrialRow& r : rep.rows) {
    mx = std::max(mx, r.ratio);
    mean += r.ratio;
  }
  rep.max_ratio = mx;
  rep.mean_ratio = rep.rows.empty() ? 0.0 : mean / static_cast<double>(rep.rows.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ensemble runners.
// ---------------------------------------------------------------------------

// Per trial: operator and unit vector drawn from streams derived off the
// experiment seed (trial seed = splitmix(seed XOR trial); operator and f use
// further derivations of it), then the requested functional and its ratio.
inline ExperimentReport run_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.nk) throw invalid_argument("ensemble needs an nk sequence");
  const LacunarySeq nk = cfg.nk->to_lacunary();
  std::optional<LacunarySeq> m;
  if (cfg.kind == ExperimentKind::oscillation) {
    if (!cfg.m) throw invalid_argument("oscillation ensemble needs an M sequence");
    m = cfg.m->to_lacunary();
  }

  ExperimentReport rep;
  rep.kind = cfg.kind;
  rep.config_echo = std::string(kind_name(cfg.kind)) + " seed=" + std::to_string(cfg.seed) +
                    " trials=" + std::to_string(cfg.trials) + " nk=" + cfg.nk->echo() +
                    (cfg.m ? " m=" + cfg.m->echo() : "") + " p=" + fmt17(cfg.p) +
                    " op=" + cfg.op.echo();
  rep.rows.resize(static_cast<std::size_t>(cfg.trials));

  parallel_for_index(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, t);
    const int dim = cfg.dims[t % cfg.dims.size()];
    const Operator b = cfg.op.realize(static_cast<std::size_t>(dim), derive_seed(trial_seed, 1));
    const HVector f = random_unit_vector(b.dim(), derive_seed(trial_seed, 2));

    double value = 0.0;
    if (cfg.kind == ExperimentKind::variation) {
      value = cfg.op.is_contraction_kind() ? contraction_variation(b, f, nk, cfg.p)
                                           : variation_sum(b, f, nk, cfg.p);
    } else {
      value = cfg.op.is_contraction_kind() ? contraction_oscillation(b, f, nk, *m)
                                           : oscillation_sum(b, f, nk, *m);
    }
    const double fn = f.norm();
    rep.rows[t] = TrialRow{trial_seed, dim, value, fn, value / fn};
  });

  detail::summarize(rep);
  if (cfg.assert_max_ratio && rep.max_ratio > *cfg.assert_max_ratio) {
    rep.finding = true;
    rep.finding_message = "max ratio " + fmt17(rep.max_ratio) + " exceeds asserted bound " +
                          fmt17(*cfg.assert_max_ratio);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Constant-versus-beta curve.
// ---------------------------------------------------------------------------

struct CurveRow {
  double beta = 0.0;
  double sup_estimate = 0.0;
  double theta_star = 0.0;
};

// For each beta: sweep over geometric_lacunary(beta, count, 1).  Exhibits
// the blow-up of the measured constant as beta drops toward 1.
inline std::vector<CurveRow> constant_curve(const std::vector<double>& betas,
                                            std::int64_t count, std::uint64_t grid_points,
                                            int refine_iters, unsigned workers = 0) {
  std::vector<CurveRow> rows;
  rows.reserve(betas.size());
  for (double beta : betas) {
    const LacunarySeq nk = geometric_lacunary(beta, count, 1);
    const SweepResult s = sweep_sup(nk, nullptr, grid_points, refine_iters, 0.0, kPi, workers);
    rows.push_back({beta, s.sup_estimate, s.theta_star});
  }
  return rows;
}

inline std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::string out = "beta,sup_estimate,theta_star\n";
  for (const CurveRow& r : rows)
    out += fmt17(r.beta) + "," + fmt17(r.sup_estimate) + "," + fmt17(r.theta_star) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Lacunarity-necessity demonstration.
// ---------------------------------------------------------------------------

struct DivergenceRow {
  std::int64_t n = 0;
  double v = 0.0;           // partial variation sum along n_k = k
  double log_n = 0.0;
  double closed_form = 0.0; // harmonic-sum formula for the same partial sum
};

// U = (-1) on a 1-dim space, f = 1, n_k = k.  V(N) = sum_{k=1..N}
// |a_{k+1} - a_k| grows like log N; emitted at decades up to n_max.
// Closed form: 1 + 2 sum_{odd m, 3 <= m <= N} 1/m for odd N, plus the
// boundary term 1/(N+1) when N is even.
inline std::vector<DivergenceRow> divergence_demo(std::int64_t n_max) {
  if (n_max < 10) throw invalid_argument("divergence_demo: N_max must be >= 10");
  std::vector<DivergenceRow> rows;
  double v = 0.0;
  double odd_recip_sum = 0.0;  // sum of 1/m over odd m in [3, k]
  std::int64_t next_emit = 10;
  for (std::int64_t k = 1; k <= n_max; ++k) {
    const double ak = (k % 2 == 1) ? -1.0 / static_cast<double>(k) : 0.0;
    const double ak1 = ((k + 1) % 2 == 1) ? -1.0 / static_cast<double>(k + 1) : 0.0;
    v += std::abs(ak1 - ak);
    if (k % 2 == 1 && k >= 3) odd_recip_sum += 1.0 / static_cast<double>(k);
    if (k == next_emit || k == n_max) {
      double closed = 1.0 + 2.0 * odd_recip_sum;
      if (k % 2 == 0) closed += 1.0 / static_cast<double>(k + 1);
      rows.push_back({k, v, std::log(static_cast<double>(k)), closed});
      if (k == next_emit) next_emit *= 10;
    }
  }
  return rows;
}

inline std::string divergence_csv(const std::vector<DivergenceRow>& rows) {
  std::string out = "n,v,log_n,closed_form\n";
  for (const DivergenceRow& r : rows)
    out += std::to_string(r.n) + "," + fmt17(r.v) + "," + fmt17(r.log_n) + "," +
           fmt17(r.closed_form) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Square-variation check against the cited p=2 bound.
// ---------------------------------------------------------------------------

inline constexpr double kRojBound = 25.0;

// p=2 functional over random unitaries and contractions along arbitrary
// strictly increasing sequences.  A ratio above 25 is recorded as a finding
// (it would contradict the cited theorem), never thrown.
inline ExperimentReport roj_check(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<std::vector<std::int64_t>> fixed_terms;
  if (cfg.nk) fixed_terms = cfg.nk->to_increasing_terms();

  ExperimentReport rep;
  rep.kind = ExperimentKind::roj_check;
  rep.config_echo = std::string("roj-check seed=") + std::to_string(cfg.seed) +
                    " trials=" + std::to_string(cfg.trials) +
                    (fixed_terms ? " nk=" + cfg.nk->echo() : " nk=random-increasing");
  rep.rows.resize(static_cast<std::size_t>(cfg.trials));

  parallel_for_index(static_cast<std::size_t>(cfg.trials), cfg.workers, [&](std::size_t t) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, t);
    const int dim = cfg.dims[t % cfg.dims.size()];

    // alternate unitaries and contractions; caps cycle 0.5 / 0.9 / 1.0
    Operator b = (t % 2 == 0)
                     ? random_unitary(static_cast<std::size_t>(dim), derive_seed(trial_seed, 1))
                     : random_contraction(static_cast<std::size_t>(dim),
                                          derive_seed(trial_seed, 1),
                                          (t % 6 == 1) ? 0.5 : (t % 6 == 3) ? 0.9 : 1.0);
    const HVector f = random_unit_vector(b.dim(), derive_seed(trial_seed, 2));

    std::vector<std::int64_t> terms;
    if (fixed_terms) {
      terms = *fixed_terms;
    } else {
      // random strictly increasing sequence: 16..64 terms, gaps 1..64
      SplitMix64 rng(derive_seed(trial_seed, 3));
      const std::size_t len = 16 + static_cast<std::size_t>(rng.next() % 49);
      std::int64_t n = 1 + static_cast<std::int64_t>(rng.next() % 4);
      terms.reserve(len);
      for (std::size_t i = 0; i < len; ++i) {
        terms.push_back(n);
        n += 1 + static_cast<std::int64_t>(rng.next() % 64);
      }
    }

    const AverageTrace trace = checkpoint_averages(b, f, CheckpointPlan::from(terms));
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < trace.rows.size(); ++k) {
      const double d = (trace.rows[k + 1].second - trace.rows[k].second).norm();
      acc += d * d;
    }
    const double value = std::sqrt(acc);
    const double fn = f.norm();
    rep.rows[t] = TrialRow{trial_seed, dim, value, fn, value / fn};
  });

  detail::summarize(rep);
  if (rep.max_ratio > kRojBound) {
    rep.finding = true;
    rep.finding_message = "p=2 ratio " + fmt17(rep.max_ratio) +
                          " exceeds the cited bound 25; this contradicts the reference result";
  }
  return rep;
}

}  // namespace varosc

#endif  // VAROSC_HARNESS_HPP_
