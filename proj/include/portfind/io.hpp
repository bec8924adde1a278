#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "portfind/experiment.hpp"
#include "portfind/finder.hpp"
#include "portfind/oracle.hpp"
#include "portfind/sim.hpp"
#include "portfind/snapshot.hpp"

namespace portfind::io {

// All rationals travel as decimal strings so fixed-point values survive
// serialization exactly. Plain JSON numbers are also accepted on input.

SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const SimConfig& config);
SimConfig load_sim_config(const std::filesystem::path& path);

// Transaction log: one JSON object per line, keys
// amount, currency, dst, fee, src ("MINT" or an address), turn.
void write_log(const SimulationLog& log, std::ostream& out);
void write_log(const SimulationLog& log, const std::filesystem::path& path);

struct LoadedLog {
  std::vector<TransactionRecord> records;
  std::vector<int> currency_ids;  // every currency seen, ascending
};
LoadedLog read_log(std::istream& in);
LoadedLog read_log(const std::filesystem::path& path);

void write_ground_truth(const SimulationLog& log, const std::filesystem::path& path);

nlohmann::json snapshot_to_json(const Snapshot& snapshot);
Snapshot snapshot_from_json(const nlohmann::json& j);
void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

Portfolio portfolio_from_json(const nlohmann::json& j);
Portfolio read_portfolio(const std::filesystem::path& path);

RateTable read_rates(const std::filesystem::path& path);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

nlohmann::json answer_to_json(const AnswerTuple& answer, int searched_m);
nlohmann::json finder_result_to_json(const FinderResult& result);
nlohmann::json oracle_result_to_json(const OracleResult& result, int searched_m);

}  // namespace portfind::io
