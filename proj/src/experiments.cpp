#include "permsolve/experiments.hpp"

#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "permsolve/filters.hpp"
#include "permsolve/solver.hpp"
#include "permsolve/sparsity.hpp"
#include "permsolve/spectral.hpp"

namespace permsolve {

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::vector<T> read_list(const Json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) throw ConfigError(std::string("experiment config is missing \"") + key + "\"");
    return {};
  }
  try {
    const Json& v = j.at(key);
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config field \"") + key + "\": " + e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (lengths.empty()) throw ConfigError("experiment grid: L list is empty");
  if (sparsities.empty() && relative_sparsities.empty()) throw ConfigError("experiment grid: k list is empty");
  if (channels.empty()) throw ConfigError("experiment grid: M list is empty");
  if (sources.empty()) throw ConfigError("experiment grid: N list is empty");
  if (norms.empty()) throw ConfigError("experiment grid: p list is empty");
  if (trials < 1) throw ConfigError("experiment needs trials >= 1");
  if (!(options.success_threshold_db > 0.0)) throw ConfigError("success threshold must be > 0 dB");
  if (options.max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
  for (double p : norms)
    if (!(p >= 0.0)) throw ConfigError("norm orders must be >= 0");
}

std::vector<Cell> ExperimentConfig::cells() const {
  validate();
  std::vector<Cell> out;
  for (Index L : lengths) {
    std::vector<Index> ks = sparsities;
    if (ks.empty())
      for (double r : relative_sparsities)
        ks.push_back(std::max<Index>(1, static_cast<Index>(std::llround(r * static_cast<double>(L)))));
    for (Index k : ks)
      for (Index M : channels)
        for (Index N : sources)
          for (double p : norms) out.push_back({L, k, M, N, p});
  }
  return out;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  cfg.lengths = read_list<Index>(j, "L", true);
  cfg.sparsities = read_list<Index>(j, "k", false);
  cfg.relative_sparsities = read_list<double>(j, "k_over_L", false);
  cfg.channels = read_list<Index>(j, "M", true);
  cfg.sources = read_list<Index>(j, "N", true);
  cfg.norms = read_list<double>(j, "p", true);
  try {
    cfg.trials = j.value("trials", 200);
    cfg.options.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.options.success_threshold_db = j.value("success_threshold_db", 100.0);
    cfg.options.max_sweeps = j.value("max_sweeps", 100);
    cfg.options.identity_permutations = j.value("identity_permutations", false);
    cfg.workers = j.value("workers", 0u);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["L"] = cfg.lengths;
  if (!cfg.sparsities.empty()) j["k"] = cfg.sparsities;
  if (!cfg.relative_sparsities.empty()) j["k_over_L"] = cfg.relative_sparsities;
  j["M"] = cfg.channels;
  j["N"] = cfg.sources;
  j["p"] = cfg.norms;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.options.master_seed;
  j["success_threshold_db"] = cfg.options.success_threshold_db;
  j["max_sweeps"] = cfg.options.max_sweeps;
  j["identity_permutations"] = cfg.options.identity_permutations;
  return j;
}

std::uint64_t trial_seed(std::uint64_t master_seed, const Cell& c, int trial) {
  return derive_seed(master_seed, c.length, c.k, c.channels, c.sources, std::bit_cast<std::uint64_t>(c.p), trial);
}

TrialRecord run_cell(const Cell& cell, int trial, const TrialOptions& options) {
  TrialRecord rec;
  rec.cell = cell;
  rec.trial = trial;
  const std::uint64_t seed = trial_seed(options.master_seed, cell, trial);
  const FilterMatrix a = generate_sparse_matrix(cell.channels, cell.sources, cell.length,
                                                {cell.k, SupportMode::UniformRandom}, derive_seed(seed, 1));
  if (cell.sources > kMaxEnumeratedSources)
    throw GuardError("N = " + std::to_string(cell.sources) + " is too large for per-bin enumeration");

  const int N = static_cast<int>(cell.sources);
  const PermutationSequence s = options.identity_permutations
                                    ? PermutationSequence::identity(N, cell.length)
                                    : random_permutation_sequence(N, cell.length, derive_seed(seed, 2));
  const FilterMatrix a_tilde = apply_frequency_permutations(a, s);

  SolverConfig cfg;
  cfg.p = NormOrder(cell.p);
  cfg.max_sweeps = options.max_sweeps;
  const SolveResult solved = greedy_solve(a_tilde, cfg);
  const SnrReport score = snr(a, solved.a_hat);

  rec.snr_db = score.db;
  rec.exact_match = score.exact_match;
  rec.success = score.db > options.success_threshold_db;
  rec.sweeps = solved.sweeps;
  for (double t : solved.sweep_seconds) rec.wall_time_seconds += t;
  return rec;
}

unsigned resolve_worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERMSOLVE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const std::vector<Cell> cells = cfg.cells();
  const std::size_t jobs = cells.size() * static_cast<std::size_t>(cfg.trials);
  ExperimentResult result;
  result.records.resize(jobs);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const Cell& cell = cells[job / static_cast<std::size_t>(cfg.trials)];
      const int trial = static_cast<int>(job % static_cast<std::size_t>(cfg.trials));
      try {
        result.records[job] = run_cell(cell, trial, cfg.options);
      } catch (const std::exception& e) {
        TrialRecord failed;
        failed.cell = cell;
        failed.trial = trial;
        failed.error = e.what();
        result.records[job] = std::move(failed);
      }
    }
  };
  const unsigned workers = std::min<unsigned>(resolve_worker_count(cfg.workers), static_cast<unsigned>(std::max<std::size_t>(jobs, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  result.cells = summarize(result.records);
  return result;
}

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<CellSummary> out;
  const auto same = [](const Cell& a, const Cell& b) {
    return a.length == b.length && a.k == b.k && a.channels == b.channels && a.sources == b.sources &&
           std::bit_cast<std::uint64_t>(a.p) == std::bit_cast<std::uint64_t>(b.p);
  };
  for (const TrialRecord& r : records) {
    if (out.empty() || !same(out.back().cell, r.cell)) out.push_back({r.cell});
    CellSummary& s = out.back();
    ++s.trials;
    s.success_rate += r.success ? 1.0 : 0.0;
    s.mean_sweeps += r.sweeps;
    s.mean_time_seconds += r.wall_time_seconds;
  }
  for (CellSummary& s : out) {
    s.success_rate /= s.trials;
    s.mean_sweeps /= s.trials;
    s.mean_time_seconds /= s.trials;
  }
  return out;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "L,k,M,N,p,trial,snr_db,success,exact_match,sweeps,wall_time_s\n";
  for (const TrialRecord& r : records) {
    out << r.cell.length << ',' << r.cell.k << ',' << r.cell.channels << ',' << r.cell.sources << ','
        << shortest(r.cell.p) << ',' << r.trial << ',';
    if (r.error.empty())
      out << fixed17(r.snr_db);
    else
      out << "error";
    out << ',' << (r.success ? 1 : 0) << ',' << (r.exact_match ? 1 : 0) << ',' << (r.error.empty() ? r.sweeps : -1)
        << ',' << fixed17(r.wall_time_seconds) << '\n';
  }
}

void write_cells_csv(std::ostream& out, const std::vector<CellSummary>& cells) {
  out << "L,k,M,N,p,trials,success_rate,mean_sweeps,mean_time_s\n";
  for (const CellSummary& s : cells)
    out << s.cell.length << ',' << s.cell.k << ',' << s.cell.channels << ',' << s.cell.sources << ','
        << shortest(s.cell.p) << ',' << s.trials << ',' << fixed17(s.success_rate) << ',' << fixed17(s.mean_sweeps)
        << ',' << fixed17(s.mean_time_seconds) << '\n';
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("L,k,M,N,p,trial,snr_db", 0) != 0)
    throw ParseError("trial CSV must start with the L,k,M,N,p,trial,... header");
  std::vector<TrialRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 11) throw ParseError("trial CSV line " + std::to_string(line_no) + ": expected 11 fields");
    try {
      TrialRecord r;
      r.cell = {std::stol(f[0]), std::stol(f[1]), std::stol(f[2]), std::stol(f[3]), std::stod(f[4])};
      r.trial = std::stoi(f[5]);
      if (f[6] == "error")
        r.error = "error";
      else
        r.snr_db = std::stod(f[6]);
      r.success = f[7] == "1";
      r.exact_match = f[8] == "1";
      r.sweeps = std::stoi(f[9]);
      r.wall_time_seconds = std::stod(f[10]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("trial CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return out;
}

RuntimeFit runtime_model_fit(const std::vector<RuntimeSample>& samples) {
  std::set<Index> distinct;
  std::vector<std::pair<double, double>> pts;
  for (const RuntimeSample& s : samples) {
    if (s.length < 2 || !(s.seconds_per_sweep > 0.0)) continue;
    const double L = static_cast<double>(s.length);
    pts.emplace_back(std::log(L * L * std::log2(L)), std::log(s.seconds_per_sweep));
    distinct.insert(s.length);
  }
  if (distinct.size() < 4)
    throw DomainError("runtime fit needs timings at >= 4 distinct L values, got " + std::to_string(distinct.size()));

  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  RuntimeFit fit;
  fit.samples = pts.size();
  fit.slope = sxy / sxx;
  fit.coefficient = std::exp(my - fit.slope * mx);
  fit.unit_slope_coefficient = std::exp(my - mx);
  return fit;
}

RuntimeFit runtime_model_fit(const std::vector<TrialRecord>& records) {
  std::vector<RuntimeSample> samples;
  for (const TrialRecord& r : records)
    if (r.error.empty() && r.sweeps > 0)
      samples.push_back({r.cell.length, r.wall_time_seconds / r.sweeps});
  return runtime_model_fit(samples);
}

}  // namespace permsolve
