// Command-line front end: sweeps, ensemble experiments, the divergence
// demonstration, dilation certification, and the square-variation check.
//
// Exit codes: 0 success, 2 invalid arguments, 3 budget/resource errors,
// 4 failed acceptance assertion.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "varosc/varosc.hpp"

namespace {

using nlohmann::ordered_json;
using namespace varosc;

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
  if (dims.empty()) throw invalid_argument("--dim: empty list");
  return dims;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.empty()) throw invalid_argument("empty numeric list");
  return vals;
}

std::string summary_path(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size()) + ".summary.json";
  return out + ".summary.json";
}

struct SeqFlags {
  std::string seq;
  std::string seq_file;
  double beta = 2.0;
  std::int64_t count = 20;
  std::int64_t n1 = 1;
  bool beta_given = false;

  void attach(CLI::App* cmd, bool with_geometric = true) {
    cmd->add_option("--seq", seq, "sequence spec: geometric:<beta>:<count>[:<n1>] or t1,t2,...");
    cmd->add_option("--seq-file", seq_file, "file with one integer term per line");
    if (with_geometric) {
      cmd->add_option("--beta", beta, "geometric ratio (with --count/--n1)");
      cmd->add_option("--count", count, "number of geometric terms");
      cmd->add_option("--n1", n1, "first geometric term");
    }
  }

  SeqSpec resolve() const {
    if (!seq.empty()) return SeqSpec::parse(seq);
    if (!seq_file.empty()) return SeqSpec::explicit_terms_of(read_sequence_file(seq_file));
    return SeqSpec::geometric(beta, count, n1);
  }
};

void enforce_lacunary(const LacunarySeq& nk, bool require, double min_beta) {
  if (!require) return;
  if (nk.beta_certified() < min_beta)
    throw invalid_argument("certified beta " + fmt17(nk.beta_certified()) +
                           " is below --min-beta " + fmt17(min_beta));
}

ordered_json report_summary_json(const ExperimentReport& rep) {
  ordered_json j;
  j["kind"] = kind_name(rep.kind);
  j["trials"] = rep.rows.size();
  j["max_ratio"] = rep.max_ratio;
  j["mean_ratio"] = rep.mean_ratio;
  j["config"] = rep.config_echo;
  j["version"] = rep.version;
  if (rep.finding) j["finding"] = rep.finding_message;
  return j;
}

int finish_ensemble(const ExperimentReport& rep, const std::string& out) {
  if (!out.empty()) {
    write_text_file(out, ensemble_csv(rep));
    write_text_file(summary_path(out), report_summary_json(rep).dump(2) + "\n");
  } else {
    std::cout << "ratio " << fmt17(rep.max_ratio) << "\n";
    std::cout << report_summary_json(rep).dump(2) << "\n";
  }
  if (rep.finding) {
    std::cerr << "finding: " << rep.finding_message << "\n";
    return 4;
  }
  return 0;
}

std::string sweep_csv(const SweepResult& r) {
  std::string out = "theta,total,I1,I2,k0,tail_bound\n";
  for (const SymbolDecomposition& d : r.samples) {
    out += fmt17(d.theta);
    out += ',';
    out += fmt17(d.total);
    out += ',';
    out += fmt17(d.I1);
    out += ',';
    out += fmt17(d.I2);
    out += ',';
    out += std::to_string(d.k0 ? *d.k0 : 0);
    out += ',';
    out += fmt17(d.tail_bound);
    out += '\n';
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variation/oscillation functionals of operator ergodic averages"};
  app.require_subcommand(1);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "supremum sweep of the scalar symbol functional");
  SeqFlags sweep_seq;
  sweep_seq.attach(sweep);
  std::string sweep_mseq;
  std::uint64_t grid = 100000;
  int refine = 40;
  double theta_min = 0.0, theta_max = kPi;
  std::string sweep_out;
  bool req_lac = false;
  double min_beta = 1.0;
  sweep->add_option("--m-seq", sweep_mseq, "M sequence spec; switches to the oscillation functional");
  sweep->add_option("--grid", grid, "log-uniform grid points");
  sweep->add_option("--refine", refine, "golden-section iterations per top bracket");
  sweep->add_option("--theta-min", theta_min, "lower sweep bound (default 1/(10 n_K))");
  sweep->add_option("--theta-max", theta_max, "upper sweep bound (default pi)");
  sweep->add_option("--out", sweep_out, "CSV output path (summary JSON written next to it)");
  sweep->add_flag("--require-lacunary", req_lac, "reject sequences below --min-beta");
  sweep->add_option("--min-beta", min_beta, "lower bound for the certified ratio");

  // ---- variation / oscillation ensembles ----
  auto* variation = app.add_subcommand("variation", "variation functional over an ensemble");
  auto* oscillation = app.add_subcommand("oscillation", "oscillation functional over an ensemble");
  SeqFlags var_seq, osc_seq;
  var_seq.attach(variation);
  osc_seq.attach(oscillation);
  std::string var_mseq, osc_mseq;
  oscillation->add_option("--m-seq", osc_mseq, "M sequence spec")->required();
  std::string var_dim = "4", osc_dim = "4";
  int var_trials = 1, osc_trials = 1;
  std::uint64_t var_seed = 1, osc_seed = 1;
  double p = 1.0;
  std::string var_op = "random-unitary", osc_op = "random-unitary";
  std::string var_out, osc_out, var_trace;
  double assert_max_ratio = -1.0;
  std::int64_t budget = kDefaultWorkBudget;
  bool var_req_lac = false, osc_req_lac = false;
  double var_min_beta = 1.0, osc_min_beta = 1.0;
  variation->add_option("--dim", var_dim, "dimension list, e.g. 1,2,4");
  variation->add_option("--trials", var_trials, "ensemble size");
  variation->add_option("--seed", var_seed, "experiment seed");
  variation->add_option("--p", p, "variation exponent (>= 1)");
  variation->add_option("--op", var_op,
                        "identity | diag:<angles> | random-unitary | random-contraction:<cap>");
  variation->add_option("--out", var_out, "CSV output path");
  variation->add_option("--trace", var_trace, "write the first trial's average trace CSV here");
  variation->add_option("--budget", budget, "streaming work budget for --trace (n_max*dim^2)");
  variation->add_option("--assert-max-ratio", assert_max_ratio,
                        "exit 4 when the max ratio exceeds this bound");
  variation->add_flag("--require-lacunary", var_req_lac, "reject sequences below --min-beta");
  variation->add_option("--min-beta", var_min_beta, "lower bound for the certified ratio");
  oscillation->add_option("--dim", osc_dim, "dimension list");
  oscillation->add_option("--trials", osc_trials, "ensemble size");
  oscillation->add_option("--seed", osc_seed, "experiment seed");
  oscillation->add_option("--op", osc_op, "operator spec");
  oscillation->add_option("--out", osc_out, "CSV output path");
  oscillation->add_flag("--require-lacunary", osc_req_lac, "reject sequences below --min-beta");
  oscillation->add_option("--min-beta", osc_min_beta, "lower bound for the certified ratio");

  // ---- constant-curve ----
  auto* curve = app.add_subcommand("constant-curve", "sup estimate as a function of beta");
  std::string betas_text = "1.1,1.5,2,3,4";
  std::int64_t curve_count = 20;
  std::uint64_t curve_grid = 20000;
  int curve_refine = 20;
  std::string curve_out;
  curve->add_option("--betas", betas_text, "comma-separated beta list");
  curve->add_option("--count", curve_count, "terms per sequence");
  curve->add_option("--grid", curve_grid, "grid points per sweep");
  curve->add_option("--refine", curve_refine, "refinement iterations");
  curve->add_option("--out", curve_out, "CSV output path");

  // ---- diverge ----
  auto* diverge = app.add_subcommand("diverge", "non-lacunary partial sums along n_k = k");
  std::int64_t nmax = 10000;
  std::string div_out;
  diverge->add_option("--nmax", nmax, "largest index");
  diverge->add_option("--out", div_out, "CSV output path");

  // ---- dilate ----
  auto* dilate = app.add_subcommand("dilate", "build and certify a finite-step unitary dilation");
  int dil_dim = 4;
  std::int64_t steps = 32;
  int dil_trials = 20;
  std::uint64_t dil_seed = 1;
  std::string dil_op = "random-contraction:0.9";
  std::string dil_out;
  double tol = -1.0;
  dilate->add_option("--dim", dil_dim, "base dimension");
  dilate->add_option("--steps", steps, "certified power steps N");
  dilate->add_option("--trials", dil_trials, "sampled vectors");
  dilate->add_option("--seed", dil_seed, "seed");
  dilate->add_option("--op", dil_op, "operator spec (contraction)");
  dilate->add_option("--out", dil_out, "JSON report path");
  dilate->add_option("--tol", tol, "exit 4 when any residual exceeds this tolerance");

  // ---- roj-check ----
  auto* roj = app.add_subcommand("roj-check", "p=2 functional against the cited bound 25");
  std::string roj_dim = "1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16";
  int roj_trials = 100;
  std::uint64_t roj_seed = 1;
  std::string roj_seq_text, roj_out;
  roj->add_option("--dim", roj_dim, "dimension list");
  roj->add_option("--trials", roj_trials, "ensemble size");
  roj->add_option("--seed", roj_seed, "seed");
  roj->add_option("--seq", roj_seq_text, "fixed increasing sequence (default: random per trial)");
  roj->add_option("--out", roj_out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) {
      const LacunarySeq nk = sweep_seq.resolve().to_lacunary();
      enforce_lacunary(nk, req_lac, min_beta);
      std::optional<LacunarySeq> m;
      if (!sweep_mseq.empty()) m = SeqSpec::parse(sweep_mseq).to_lacunary();
      const SweepResult r =
          sweep_sup(nk, m ? &*m : nullptr, grid, refine, theta_min, theta_max);
      ordered_json j;
      j["sup_estimate"] = r.sup_estimate;
      j["theta_star"] = r.theta_star;
      j["beta"] = nk.beta_certified();
      j["K"] = nk.size();
      j["grid_points"] = r.grid_points;
      j["refine_iters"] = r.refine_iters;
      if (!sweep_out.empty()) {
        write_text_file(sweep_out, sweep_csv(r));
        write_text_file(summary_path(sweep_out), j.dump(2) + "\n");
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (variation->parsed() || oscillation->parsed()) {
      const bool is_var = variation->parsed();
      ExperimentConfig cfg;
      cfg.kind = is_var ? ExperimentKind::variation : ExperimentKind::oscillation;
      cfg.dims = parse_dims(is_var ? var_dim : osc_dim);
      cfg.trials = is_var ? var_trials : osc_trials;
      cfg.seed = is_var ? var_seed : osc_seed;
      cfg.nk = (is_var ? var_seq : osc_seq).resolve();
      if (!is_var) cfg.m = SeqSpec::parse(osc_mseq);
      cfg.op = OperatorSpec::parse(is_var ? var_op : osc_op);
      cfg.p = p;
      if (assert_max_ratio >= 0.0 && is_var) cfg.assert_max_ratio = assert_max_ratio;

      const LacunarySeq nk = cfg.nk->to_lacunary();
      enforce_lacunary(nk, is_var ? var_req_lac : osc_req_lac,
                       is_var ? var_min_beta : osc_min_beta);

      if (is_var && !var_trace.empty()) {
        const Operator b =
            cfg.op.realize(static_cast<std::size_t>(cfg.dims[0]),
                           derive_seed(derive_seed(cfg.seed, 0), 1));
        const HVector f =
            random_unit_vector(b.dim(), derive_seed(derive_seed(cfg.seed, 0), 2));
        const AverageTrace tr = average_stream(b, f, CheckpointPlan::from(nk), budget);
        std::string csv = "n";
        for (std::size_t i = 0; i < b.dim(); ++i)
          csv += ",re" + std::to_string(i) + ",im" + std::to_string(i);
        csv += '\n';
        for (const auto& [n, v] : tr.rows) {
          csv += std::to_string(n);
          for (std::size_t i = 0; i < v.dim(); ++i)
            csv += "," + fmt17(v[i].real()) + "," + fmt17(v[i].imag());
          csv += '\n';
        }
        write_text_file(var_trace, csv);
      }

      return finish_ensemble(run_ensemble(cfg), is_var ? var_out : osc_out);
    }

    if (curve->parsed()) {
      const auto rows = constant_curve(parse_doubles(betas_text), curve_count,
                                       curve_grid, curve_refine);
      const std::string csv = curve_csv(rows);
      if (!curve_out.empty())
        write_text_file(curve_out, csv);
      else
        std::cout << csv;
      return 0;
    }

    if (diverge->parsed()) {
      const auto rows = divergence_demo(nmax);
      const std::string csv = divergence_csv(rows);
      if (!div_out.empty())
        write_text_file(div_out, csv);
      else
        std::cout << csv;
      return 0;
    }

    if (dilate->parsed()) {
      const OperatorSpec spec = OperatorSpec::parse(dil_op);
      const Operator t =
          spec.realize(static_cast<std::size_t>(dil_dim), derive_seed(dil_seed, 1));
      const DilationPack pack = build_dilation(t, steps);
      const DilationReport rep = verify_dilation(pack, t, dil_trials, derive_seed(dil_seed, 2));
      ordered_json j;
      j["dim"] = rep.dim;
      j["N"] = rep.steps;
      j["unitarity_residual"] = rep.unitarity_residual;
      j["max_power_error"] = rep.max_power_error;
      j["functional_gap"] = rep.functional_gap;
      if (!dil_out.empty()) write_text_file(dil_out, j.dump(2) + "\n");
      std::cout << j.dump(2) << "\n";
      if (tol >= 0.0 && (rep.unitarity_residual > tol || rep.max_power_error > tol ||
                         rep.functional_gap > tol)) {
        std::cerr << "finding: dilation residual exceeds --tol " << fmt17(tol) << "\n";
        return 4;
      }
      return 0;
    }

    if (roj->parsed()) {
      ExperimentConfig cfg;
      cfg.kind = ExperimentKind::roj_check;
      cfg.dims = parse_dims(roj_dim);
      cfg.trials = roj_trials;
      cfg.seed = roj_seed;
      if (!roj_seq_text.empty()) cfg.nk = SeqSpec::parse(roj_seq_text);
      return finish_ensemble(roj_check(cfg), roj_out);
    }
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
