#include "portfind/cli_commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "portfind/experiment.hpp"
#include "portfind/finder.hpp"
#include "portfind/io.hpp"
#include "portfind/oracle.hpp"
#include "portfind/sim.hpp"
#include "portfind/snapshot.hpp"

namespace portfind::cli {

namespace {

void emit(const nlohmann::json& j, const std::optional<std::filesystem::path>& out_path) {
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path->string());
    out << j.dump(1) << '\n';
  } else {
    std::cout << j.dump(1) << '\n';
  }
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_log,
                 const std::optional<std::filesystem::path>& ground_truth) {
  SimulationLog log = simulate(io::load_sim_config(config_path));
  io::write_log(log, out_log);
  if (ground_truth) io::write_ground_truth(log, *ground_truth);
  return 0;
}

int cmd_snapshot(const std::filesystem::path& log_path, int64_t time,
                 const std::optional<std::filesystem::path>& rates_path,
                 const std::filesystem::path& out_path) {
  io::LoadedLog loaded = io::read_log(log_path);
  RateTable rates;
  std::vector<int> universe = loaded.currency_ids;
  if (rates_path) {
    rates = io::read_rates(*rates_path);
    for (const auto& [id, rate] : rates) {
      if (std::find(universe.begin(), universe.end(), id) == universe.end()) {
        universe.insert(std::lower_bound(universe.begin(), universe.end(), id), id);
      }
    }
  }
  Snapshot snapshot = replay_records(loaded.records, universe, time, rates);
  io::write_snapshot(snapshot, out_path);
  return 0;
}

int cmd_find(const std::filesystem::path& snapshot_path,
             const std::filesystem::path& portfolio_path, Fixed threshold,
             std::optional<uint64_t> top,
             const std::optional<std::filesystem::path>& out_path) {
  FinderParams params;
  params.score_threshold = threshold;
  params.max_answers = top;
  FinderResult result =
      find_accounts(io::read_snapshot(snapshot_path), io::read_portfolio(portfolio_path), params);
  emit(io::finder_result_to_json(result), out_path);
  return 0;
}

int cmd_oracle(const std::filesystem::path& snapshot_path,
               const std::filesystem::path& portfolio_path, uint64_t limit,
               const std::optional<std::filesystem::path>& out_path) {
  Snapshot snapshot = io::read_snapshot(snapshot_path);
  Portfolio portfolio = io::read_portfolio(portfolio_path);
  OracleResult result = exhaustive_best(snapshot, portfolio, limit);
  int searched_m = static_cast<int>(active_dims(snapshot, portfolio).size());
  emit(io::oracle_result_to_json(result, searched_m), out_path);
  return 0;
}

int cmd_experiment(const std::filesystem::path& config_path,
                   const std::filesystem::path& out_dir) {
  ExperimentConfig config = io::load_experiment_config(config_path);
  write_experiment_outputs(config, run_experiment(config), out_dir);
  return 0;
}

}  // namespace portfind::cli
