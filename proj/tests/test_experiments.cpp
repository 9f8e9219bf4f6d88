#include <doctest.h>

#include <cmath>
#include <sstream>

#include "permsolve/experiments.hpp"

using namespace permsolve;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.lengths = {7, 11};
  cfg.sparsities = {1, 2};
  cfg.channels = {2};
  cfg.sources = {2};
  cfg.norms = {1.0, 1.9};
  cfg.trials = 6;
  cfg.options.master_seed = 99;
  return cfg;
}

std::string non_timing_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  write_trials_csv(out, records);
  std::istringstream in(out.str());
  std::string line, kept;
  while (std::getline(in, line)) kept += line.substr(0, line.rfind(',')) + "\n";
  return kept;
}

}  // namespace

TEST_CASE("grid expansion order") {
  const ExperimentConfig cfg = small_config();
  const auto cells = cfg.cells();
  REQUIRE(cells.size() == 8);
  CHECK(cells.front().length == 7);
  CHECK(cells.front().k == 1);
  CHECK(cells[1].p == 1.9);
  CHECK(cells[2].k == 2);
  CHECK(cells[4].length == 11);
}

TEST_CASE("relative sparsity levels") {
  ExperimentConfig cfg = small_config();
  cfg.sparsities.clear();
  cfg.relative_sparsities = {0.01, 0.25};
  const auto cells = cfg.cells();
  CHECK(cells[0].k == 1);
  CHECK(cells[2].k == 2);
  CHECK(cells[6].k == 3);
}

TEST_CASE("config validation and documents") {
  ExperimentConfig cfg = small_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.norms.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  const ExperimentConfig back = experiment_config_from_json(to_json(small_config()));
  CHECK(back.lengths == small_config().lengths);
  CHECK(back.norms == small_config().norms);
  CHECK(back.options.master_seed == 99);
  CHECK(back.trials == 6);
  CHECK_THROWS_AS(experiment_config_from_json(parse_json("{\"L\":[5]}")), ConfigError);
  CHECK_THROWS_AS(experiment_config_from_json(parse_json("{\"L\":\"x\",\"k\":[1],\"M\":[1],\"N\":[2],\"p\":[1]}")),
                  ConfigError);
  const ExperimentConfig scalar = experiment_config_from_json(parse_json("{\"L\":31,\"k\":3,\"M\":2,\"N\":2,\"p\":1.9}"));
  CHECK(scalar.cells().size() == 1);
  CHECK(scalar.trials == 200);
}

TEST_CASE("trial seeds separate every coordinate") {
  const Cell c{31, 3, 2, 2, 1.9};
  const auto base = trial_seed(1, c, 0);
  CHECK(base == trial_seed(1, c, 0));
  CHECK(base != trial_seed(2, c, 0));
  CHECK(base != trial_seed(1, c, 1));
  CHECK(base != trial_seed(1, Cell{31, 3, 2, 2, 1.8}, 0));
  CHECK(base != trial_seed(1, Cell{31, 4, 2, 2, 1.9}, 0));
  CHECK(base != trial_seed(1, Cell{29, 3, 2, 2, 1.9}, 0));
}

TEST_CASE("identity permutations recover A") {
  TrialOptions opt;
  opt.identity_permutations = true;
  const TrialRecord r = run_cell({31, 3, 2, 2, 1.9}, 0, opt);
  CHECK(r.success);
  CHECK(r.snr_db > 250.0);
  CHECK(r.sweeps == 1);
}

TEST_CASE("results do not depend on the worker count") {
  ExperimentConfig cfg = small_config();
  cfg.workers = 1;
  const ExperimentResult one = run_experiment(cfg);
  cfg.workers = 4;
  const ExperimentResult four = run_experiment(cfg);
  CHECK(one.records.size() == 48);
  CHECK(non_timing_csv(one.records) == non_timing_csv(four.records));
  REQUIRE(one.cells.size() == 8);
  CHECK(one.cells[3].trials == 6);
  for (std::size_t c = 0; c < one.cells.size(); ++c) CHECK(one.cells[c].success_rate == four.cells[c].success_rate);
}

TEST_CASE("failing cells are recorded, not thrown") {
  ExperimentConfig cfg = small_config();
  cfg.sparsities = {20};
  cfg.trials = 2;
  const ExperimentResult r = run_experiment(cfg);
  for (const auto& rec : r.records) CHECK_FALSE(rec.error.empty());
}

TEST_CASE("trial CSV round trip") {
  ExperimentConfig cfg = small_config();
  cfg.trials = 2;
  const ExperimentResult r = run_experiment(cfg);
  std::ostringstream out;
  write_trials_csv(out, r.records);
  CHECK(out.str().rfind("L,k,M,N,p,trial,snr_db,success,exact_match,sweeps,wall_time_s\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_trials_csv(in);
  REQUIRE(back.size() == r.records.size());
  for (std::size_t n = 0; n < back.size(); ++n) {
    CHECK(back[n].snr_db == r.records[n].snr_db);
    CHECK(back[n].sweeps == r.records[n].sweeps);
    CHECK(back[n].cell.p == r.records[n].cell.p);
    CHECK(back[n].wall_time_seconds == r.records[n].wall_time_seconds);
  }
  std::ostringstream cells;
  write_cells_csv(cells, r.cells);
  CHECK(cells.str().rfind("L,k,M,N,p,trials,success_rate,mean_sweeps,mean_time_s\n", 0) == 0);
  std::istringstream bad("L,k\n1,2\n");
  CHECK_THROWS_AS(read_trials_csv(bad), ParseError);
}

TEST_CASE("runtime fit recovers a known power law") {
  std::vector<RuntimeSample> samples;
  for (Index L : {64, 128, 256, 512}) {
    const double x = static_cast<double>(L) * static_cast<double>(L) * std::log2(static_cast<double>(L));
    samples.push_back({L, 3e-8 * std::pow(x, 1.1)});
  }
  const RuntimeFit f = runtime_model_fit(samples);
  CHECK(f.slope == doctest::Approx(1.1).epsilon(1e-10));
  CHECK(f.coefficient == doctest::Approx(3e-8).epsilon(1e-8));
  CHECK(f.samples == 4);
  samples.pop_back();
  CHECK_THROWS_AS(runtime_model_fit(samples), DomainError);
}

TEST_CASE("worker count resolution") {
  CHECK(resolve_worker_count(3) == 3);
  CHECK(resolve_worker_count(0) >= 1);
}
