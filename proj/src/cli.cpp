#include "permsolve/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "permsolve/adversarial.hpp"
#include "permsolve/assignment.hpp"
#include "permsolve/experiments.hpp"
#include "permsolve/filters.hpp"
#include "permsolve/json_io.hpp"
#include "permsolve/solver.hpp"
#include "permsolve/sparsity.hpp"
#include "permsolve/spectral.hpp"

namespace permsolve {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
};

std::string read_text(const std::string& path, Streams io) {
  if (path == "-") return {std::istreambuf_iterator<char>(io.in), std::istreambuf_iterator<char>()};
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open \"" + path + "\" for reading");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text, Streams io) {
  if (path == "-") {
    io.out << text;
    io.out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open \"" + path + "\" for writing");
  f << text;
  if (!f) throw UsageError("failed writing \"" + path + "\"");
}

void write_json(const std::string& path, const Json& j, Streams io) { write_text(path, dump_json(j, 2) + "\n", io); }

Json read_json(const std::string& path, Streams io) { return parse_json(read_text(path, io)); }

// Accepts a bare matrix document or a solve result carrying "A_hat".
FilterMatrix read_matrix(const std::string& path, Streams io) {
  const Json j = read_json(path, io);
  if (j.is_object() && j.contains("A_hat")) return filter_matrix_from_json(j.at("A_hat"));
  return filter_matrix_from_json(j);
}

NormOrder parse_norm(const std::string& text) {
  if (text == "inf" || text == "infinity") return NormOrder::infinity();
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != text.size() || !(v >= 0.0)) throw UsageError("invalid norm order \"" + text + "\"");
  return NormOrder(v);
}

Json norm_value(NormOrder p) {
  if (p.is_max()) return "inf";
  return p.value();
}

Json perm_json(const Permutation& p) { return p.image(); }

Json solve_result_json(const SolveResult& r, NormOrder p) {
  Json j;
  j["p"] = norm_value(p);
  j["sweeps"] = r.sweeps;
  j["accepted_moves"] = r.accepted_moves;
  j["converged"] = r.converged;
  j["permutation_invariant_objective"] = r.permutation_invariant_objective;
  j["objective_trace"] = r.objective_trace;
  j["sweep_seconds"] = r.sweep_seconds;
  j["applied"] = to_json(r.applied);
  j["A_hat"] = to_json(r.a_hat);
  return j;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const GuardError*>(&e)) return kExitGuard;
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
      dynamic_cast<const DomainError*>(&e))
    return kExitUsage;
  return kExitNumeric;
}

std::string error_kind(int code) {
  switch (code) {
    case kExitUsage:
      return "usage";
    case kExitGuard:
      return "guard";
    default:
      return "numeric";
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  const Streams io{in, out};
  CLI::App app{"Frequency-permutation resolution for sparse filter matrices", "permsolve"};
  app.require_subcommand(1, 1);
  bool json_errors = false;
  app.add_flag("--json", json_errors, "Report errors as JSON on stderr");

  std::function<void()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Draw a random k-sparse filter matrix");
  Index g_m = 1, g_n = 2, g_l = 31, g_k = 1;
  std::uint64_t g_seed = 0;
  std::string g_mode = "uniform", g_out = "-";
  gen->add_option("--M", g_m, "Channels")->required();
  gen->add_option("--N", g_n, "Sources")->required();
  gen->add_option("--L", g_l, "Filter length")->required();
  gen->add_option("--k", g_k, "Nonzeros per filter")->required();
  gen->add_option("--seed", g_seed, "RNG seed");
  gen->add_option("--mode", g_mode, "Support mode")->check(CLI::IsMember({"uniform", "disjoint"}));
  gen->add_option("-o,--out", g_out, "Output path");
  gen->callback([&] {
    action = [&] {
      const SparseSpec spec{g_k, g_mode == "disjoint" ? SupportMode::DisjointBlocks : SupportMode::UniformRandom};
      write_text(g_out, serialize(generate_sparse_matrix(g_m, g_n, g_l, spec, g_seed)), io);
    };
  });

  // permute
  auto* permute = app.add_subcommand("permute", "Apply a frequency-permutation sequence");
  std::string pm_in, pm_out = "-", pm_perm_out, pm_perms;
  std::uint64_t pm_seed = 0;
  permute->add_option("input", pm_in, "Filter matrix")->required();
  auto* pm_seed_opt = permute->add_option("--seed", pm_seed, "Seed for L uniform permutations");
  auto* pm_perms_opt = permute->add_option("--perms", pm_perms, "Permutation sequence document");
  pm_seed_opt->excludes(pm_perms_opt);
  permute->add_option("-o,--out", pm_out, "Output path for A_tilde");
  permute->add_option("--perm-out", pm_perm_out, "Output path for the sequence");
  permute->callback([&] {
    action = [&] {
      const FilterMatrix a = read_matrix(pm_in, io);
      const PermutationSequence s =
          pm_perms.empty() ? random_permutation_sequence(static_cast<int>(a.sources()), a.filter_length(), pm_seed)
                           : deserialize_sequence(read_text(pm_perms, io));
      write_text(pm_out, serialize(apply_frequency_permutations(a, s)), io);
      if (!pm_perm_out.empty()) write_text(pm_perm_out, serialize(s), io);
    };
  });

  // solve
  auto* solve = app.add_subcommand("solve", "Greedy l^p minimization over per-bin permutations");
  std::string sv_in, sv_p = "1", sv_tie = "keep", sv_out, sv_result = "-";
  int sv_sweeps = 100;
  std::optional<double> sv_tol;
  solve->add_option("input", sv_in, "Permuted filter matrix")->required();
  solve->add_option("--p", sv_p, "Norm order (number or inf)");
  solve->add_option("--max-sweeps", sv_sweeps, "Sweep budget")->check(CLI::PositiveNumber);
  solve->add_option("--tie-break", sv_tie, "keep | lex")->check(CLI::IsMember({"keep", "lex"}));
  solve->add_option("--zero-tol", sv_tol, "Absolute zero tolerance for p = 0");
  solve->add_option("-o,--out", sv_out, "Output path for A_hat");
  solve->add_option("--result-out", sv_result, "Output path for the full result");
  solve->callback([&] {
    action = [&] {
      SolverConfig cfg;
      cfg.p = parse_norm(sv_p);
      cfg.max_sweeps = sv_sweeps;
      cfg.zero_tol = sv_tol;
      cfg.tie_break = sv_tie == "lex" ? TieBreak::Lexicographic : TieBreak::KeepCurrent;
      const SolveResult r = greedy_solve(read_matrix(sv_in, io), cfg);
      if (!sv_out.empty()) write_text(sv_out, serialize(r.a_hat), io);
      if (!(sv_out == "-" && sv_result == "-")) write_json(sv_result, solve_result_json(r, cfg.p), io);
    };
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exhaustive search over all sequences (small instances)");
  std::string or_in, or_p = "0", or_out = "-";
  std::optional<double> or_tol;
  oracle->add_option("input", or_in, "Permuted filter matrix")->required();
  oracle->add_option("--p", or_p, "Norm order");
  oracle->add_option("--zero-tol", or_tol, "Absolute zero tolerance for p = 0");
  oracle->add_option("-o,--out", or_out, "Output path");
  oracle->callback([&] {
    action = [&] {
      const NormOrder p = parse_norm(or_p);
      const BruteForceResult r = brute_force_solve(read_matrix(or_in, io), p, or_tol);
      Json j;
      j["p"] = norm_value(p);
      j["best_objective"] = r.best_objective;
      j["enumerated"] = r.enumerated;
      Json seqs = Json::array();
      for (const auto& s : r.optimal) seqs.push_back(to_json(s));
      j["optimal"] = std::move(seqs);
      write_json(or_out, j, io);
    };
  });

  // eval
  auto* eval = app.add_subcommand("eval", "l^p norms of a matrix, or the SNR of an estimate");
  std::vector<std::string> ev_files, ev_p{"0", "0.5", "1", "2", "inf"};
  bool ev_snr = false;
  std::string ev_out = "-";
  eval->add_option("files", ev_files, "A (and A_hat with --snr)")->required();
  eval->add_option("--p", ev_p, "Norm orders");
  eval->add_flag("--snr", ev_snr, "Compare A with A_hat");
  eval->add_option("-o,--out", ev_out, "Output path");
  eval->callback([&] {
    action = [&] {
      Json j;
      if (ev_snr) {
        if (ev_files.size() != 2) throw UsageError("eval --snr takes exactly two files: A and A_hat");
        const SnrReport r = snr(read_matrix(ev_files[0], io), read_matrix(ev_files[1], io));
        j["snr_db"] = r.db;
        j["exact_match"] = r.exact_match;
        j["best_perm"] = perm_json(r.best_perm);
        j["error_energy"] = r.error_energy;
      } else {
        if (ev_files.size() != 1) throw UsageError("eval without --snr takes one file");
        const FilterMatrix a = read_matrix(ev_files[0], io);
        Json norms = Json::array();
        for (const std::string& text : ev_p) {
          const NormOrder p = parse_norm(text);
          norms.push_back(Json{{"p", norm_value(p)}, {"value", lp_norm(a, p)}});
        }
        j["norms"] = std::move(norms);
      }
      write_json(ev_out, j, io);
    };
  });

  // delta
  auto* dlt = app.add_subcommand("delta", "Spectral disagreement between A_tilde and A");
  std::string dl_tilde, dl_a, dl_out = "-";
  dlt->add_option("a_tilde", dl_tilde, "Permuted matrix")->required();
  dlt->add_option("a", dl_a, "Reference matrix")->required();
  dlt->add_option("-o,--out", dl_out, "Output path");
  dlt->callback([&] {
    action = [&] {
      const DeltaReport r = delta(read_matrix(dl_tilde, io), read_matrix(dl_a, io));
      Json rows = Json::array();
      for (Index i = 0; i < r.per_pair.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < r.per_pair.cols(); ++j) row.push_back(r.per_pair(i, j));
        rows.push_back(std::move(row));
      }
      write_json(dl_out, Json{{"delta", r.delta}, {"best_global_perm", perm_json(r.best_global_perm)}, {"per_pair", rows}},
                 io);
    };
  });

  // counterexample
  auto* cex = app.add_subcommand("counterexample", "Emit a comb-based non-uniqueness bundle");
  std::string cx_family = "lemma3", cx_out = "-";
  Index cx_l = 8, cx_k = 2, cx_kp = 1, cx_m = 1, cx_n = 2;
  std::uint64_t cx_seed = 0;
  cex->add_option("--family", cx_family, "lemma3 | lemma4")->check(CLI::IsMember({"lemma3", "lemma4"}));
  cex->add_option("--L", cx_l, "Filter length")->required();
  cex->add_option("--k", cx_k, "Sparsity")->required();
  cex->add_option("--k-prime", cx_kp, "Comb spikes (lemma4)");
  cex->add_option("--seed", cx_seed, "Seed for the random parts");
  cex->add_option("--M", cx_m, "Channels of the embedding");
  cex->add_option("--N", cx_n, "Sources of the embedding");
  cex->add_option("-o,--out", cx_out, "Output path");
  cex->callback([&] {
    action = [&] {
      CounterexampleBundle b = cx_family == "lemma3" ? comb_pair_counterexample(cx_l, cx_k)
                                                     : disjoint_comb_counterexample(cx_l, cx_kp, cx_k, cx_seed);
      if (cx_m != 1 || cx_n != 2) b = embed_counterexample(b, cx_m, cx_n, cx_l, derive_seed(cx_seed, 0x656d62));
      write_json(cx_out, to_json(b), io);
    };
  });

  // transversal
  auto* trans = app.add_subcommand("transversal", "Permutation supported on large entries of a bistochastic matrix");
  std::string tr_in, tr_out = "-";
  std::optional<double> tr_threshold;
  bool tr_counts = false;
  trans->add_option("input", tr_in, "2-D array or permutation-sequence document")->required();
  trans->add_option("--threshold", tr_threshold, "Entry threshold (default 2 alpha(N))");
  trans->add_flag("--counts", tr_counts, "Input array holds integer counts with equal row sums");
  trans->add_option("-o,--out", tr_out, "Output path");
  trans->callback([&] {
    action = [&] {
      const Json doc = read_json(tr_in, io);
      Json j;
      if (doc.is_object()) {
        const PermutationSequence s = permutation_sequence_from_json(doc);
        const GlobalMatch g = best_matching_global_perm(s);
        const CountMatrix c = count_matrix(s);
        Json rows = Json::array();
        for (Index r = 0; r < c.size(); ++r) {
          Json row = Json::array();
          for (Index col = 0; col < c.size(); ++col) row.push_back(c.entries(r, col));
          rows.push_back(std::move(row));
        }
        j["perm"] = perm_json(g.perm);
        j["min_count"] = g.min_count;
        j["guaranteed_min_count"] = (alpha(s.num_sources()) * Rational(2 * s.length(), 1)).ceil();
        j["counts"] = std::move(rows);
      } else {
        if (!doc.is_array() || doc.empty()) throw ParseError("transversal input must be a square 2-D array");
        const Index n = static_cast<Index>(doc.size());
        Eigen::MatrixXd m(n, n);
        for (Index r = 0; r < n; ++r) {
          const Json& row = doc.at(static_cast<std::size_t>(r));
          if (!row.is_array() || static_cast<Index>(row.size()) != n)
            throw DimensionError("transversal input must be square");
          for (Index col = 0; col < n; ++col) m(r, col) = row.at(static_cast<std::size_t>(col)).get<double>();
        }
        if (tr_counts) {
          const double total = m.row(0).sum();
          if (!(total > 0.0)) throw DomainError("count rows must have a positive sum");
          m /= total;
        }
        const BistochasticMatrix b(m);
        const double threshold = tr_threshold.value_or(2.0 * alpha(static_cast<int>(n)).to_double());
        const auto perm = hall_transversal(b, threshold);
        j["threshold"] = threshold;
        j["perm"] = perm ? perm_json(*perm) : Json(nullptr);
      }
      write_json(tr_out, j, io);
    };
  });

  // sharp-seq
  auto* sharp = app.add_subcommand("sharp-seq", "Sequence attaining the matching-count bound");
  int sh_n = 2;
  Index sh_l = 2;
  std::string sh_out = "-";
  sharp->add_option("--N", sh_n, "Sources")->required();
  sharp->add_option("--L", sh_l, "Length")->required();
  sharp->add_option("-o,--out", sh_out, "Output path");
  sharp->callback([&] { action = [&] { write_text(sh_out, serialize(sharp_permutation_sequence(sh_n, sh_l)), io); }; });

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Run a Monte-Carlo grid");
  std::string mc_cfg, mc_trials = "-", mc_cells;
  unsigned mc_threads = 0;
  mc->add_option("config", mc_cfg, "Experiment config JSON")->required();
  mc->add_option("--trials-out", mc_trials, "Per-trial CSV");
  mc->add_option("--cells-out", mc_cells, "Per-cell CSV");
  mc->add_option("--threads", mc_threads, "Worker count (0: PERMSOLVE_THREADS or hardware)");
  mc->callback([&] {
    action = [&] {
      ExperimentConfig cfg = experiment_config_from_json(read_json(mc_cfg, io));
      if (mc_threads > 0) cfg.workers = mc_threads;
      const ExperimentResult r = run_experiment(cfg);
      std::ostringstream trials;
      write_trials_csv(trials, r.records);
      write_text(mc_trials, trials.str(), io);
      if (!mc_cells.empty()) {
        std::ostringstream cells;
        write_cells_csv(cells, r.cells);
        write_text(mc_cells, cells.str(), io);
      }
    };
  });

  // fit-runtime
  auto* fit = app.add_subcommand("fit-runtime", "Fit t = C (L^2 log2 L)^slope to per-sweep timings");
  std::string ft_in, ft_out = "-";
  fit->add_option("trials", ft_in, "Per-trial CSV")->required();
  fit->add_option("-o,--out", ft_out, "Output path");
  fit->callback([&] {
    action = [&] {
      std::istringstream csv(read_text(ft_in, io));
      const RuntimeFit f = runtime_model_fit(read_trials_csv(csv));
      write_json(ft_out,
                 Json{{"slope", f.slope},
                      {"coefficient", f.coefficient},
                      {"unit_slope_coefficient", f.unit_slope_coefficient},
                      {"samples", f.samples}},
                 io);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (json_errors) {
      err << dump_json(Json{{"error", {{"kind", "usage"}, {"exit_code", kExitUsage}, {"message", e.what()}}}}) << "\n";
    } else {
      app.exit(e, out, err);
    }
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    if (json_errors)
      err << dump_json(Json{{"error", {{"kind", error_kind(code)}, {"exit_code", code}, {"message", e.what()}}}})
          << "\n";
    else
      err << "permsolve: " << e.what() << "\n";
    return code;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return dispatch(args, std::cin, std::cout, std::cerr);
}

}  // namespace permsolve
