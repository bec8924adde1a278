#include "portfind/io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace portfind::io {

namespace {

using nlohmann::json;

Fixed fixed_from_json(const json& j, const char* field) {
  try {
    if (j.is_string()) return Fixed::parse(j.get<std::string>());
    if (j.is_number_integer()) return Fixed::from_int(j.get<int64_t>());
    if (j.is_number_unsigned()) return Fixed::from_int(static_cast<int64_t>(j.get<uint64_t>()));
    if (j.is_number_float()) return Fixed::from_double(j.get<double>());
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string(field) + ": " + e.what());
  }
  throw std::invalid_argument(std::string(field) + ": expected a decimal string or number");
}

const json& require(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + field + "'");
  return *it;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int currency_key_to_id(const std::string& key) {
  size_t used = 0;
  int id = std::stoi(key, &used);
  if (used != key.size() || id < 1) throw std::invalid_argument("bad currency key '" + key + "'");
  return id;
}

}  // namespace

SimConfig sim_config_from_json(const json& j) {
  SimConfig config;
  for (const json& jc : require(j, "currencies")) {
    CurrencyConfig c;
    c.currency_id = require(jc, "currency_id").get<int>();
    c.beta1 = fixed_from_json(require(jc, "beta1"), "beta1");
    c.beta0 = fixed_from_json(require(jc, "beta0"), "beta0");
    c.miner_fee_rate = fixed_from_json(require(jc, "miner_fee_rate"), "miner_fee_rate");
    c.miner_reward = fixed_from_json(require(jc, "miner_reward"), "miner_reward");
    c.initial_endowment = fixed_from_json(require(jc, "initial_endowment"), "initial_endowment");
    if (jc.contains("exchange_rate")) {
      c.exchange_rate = fixed_from_json(jc["exchange_rate"], "exchange_rate");
    }
    config.currencies.push_back(c);
  }
  config.turns = require(j, "turns").get<int64_t>();
  if (j.contains("transactions_per_user_per_turn")) {
    config.transactions_per_user_per_turn = j["transactions_per_user_per_turn"].get<int64_t>();
  }
  config.seed = require(j, "seed").get<uint64_t>();
  return config;
}

json sim_config_to_json(const SimConfig& config) {
  json currencies = json::array();
  for (const CurrencyConfig& c : config.currencies) {
    currencies.push_back({{"currency_id", c.currency_id},
                          {"beta1", c.beta1.str()},
                          {"beta0", c.beta0.str()},
                          {"miner_fee_rate", c.miner_fee_rate.str()},
                          {"miner_reward", c.miner_reward.str()},
                          {"initial_endowment", c.initial_endowment.str()},
                          {"exchange_rate", c.exchange_rate.str()}});
  }
  return {{"currencies", std::move(currencies)},
          {"turns", config.turns},
          {"transactions_per_user_per_turn", config.transactions_per_user_per_turn},
          {"seed", config.seed}};
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  return sim_config_from_json(load_json_file(path));
}

void write_log(const SimulationLog& log, std::ostream& out) {
  for (const TransactionRecord& r : log.records) {
    json line = {{"turn", r.turn},
                 {"currency", r.currency_id},
                 {"dst", r.destination},
                 {"amount", r.amount.str()},
                 {"fee", r.fee.str()}};
    if (r.source) {
      line["src"] = *r.source;
    } else {
      line["src"] = "MINT";
    }
    out << line.dump() << '\n';
  }
}

void write_log(const SimulationLog& log, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_log(log, out);
}

LoadedLog read_log(std::istream& in) {
  LoadedLog loaded;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      TransactionRecord r;
      r.turn = require(j, "turn").get<int64_t>();
      r.currency_id = require(j, "currency").get<int>();
      const json& src = require(j, "src");
      if (src.is_string()) {
        if (src.get<std::string>() != "MINT") throw std::invalid_argument("src must be 'MINT' or an address");
      } else {
        r.source = src.get<uint64_t>();
      }
      r.destination = require(j, "dst").get<uint64_t>();
      r.amount = fixed_from_json(require(j, "amount"), "amount");
      r.fee = fixed_from_json(require(j, "fee"), "fee");
      loaded.records.push_back(r);
    } catch (const std::exception& e) {
      throw std::runtime_error("log line " + std::to_string(line_no) + ": " + e.what());
    }
    int id = loaded.records.back().currency_id;
    auto pos = std::lower_bound(loaded.currency_ids.begin(), loaded.currency_ids.end(), id);
    if (pos == loaded.currency_ids.end() || *pos != id) loaded.currency_ids.insert(pos, id);
  }
  return loaded;
}

LoadedLog read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_log(in);
}

void write_ground_truth(const SimulationLog& log, const std::filesystem::path& path) {
  json users = json::array();
  for (const UserRecord& user : log.users) {
    json accounts = json::object();
    for (const AccountId& a : user.accounts) {
      accounts[std::to_string(a.currency_id)] = a.address;
    }
    users.push_back({{"user_id", user.user_id}, {"accounts", std::move(accounts)}});
  }
  auto out = open_out(path);
  out << json{{"users", std::move(users)}}.dump(1) << '\n';
}

json snapshot_to_json(const Snapshot& snapshot) {
  json dbs = json::array();
  for (const CurrencyDb& db : snapshot.dbs) {
    json accounts = json::array();
    for (const AccountBalance& a : db.accounts) {
      accounts.push_back(json::array({a.address, a.balance.str()}));
    }
    dbs.push_back({{"currency", db.currency_id}, {"accounts", std::move(accounts)}});
  }
  return {{"time", snapshot.time}, {"dbs", std::move(dbs)}};
}

Snapshot snapshot_from_json(const json& j) {
  Snapshot snapshot;
  snapshot.time = require(j, "time").get<int64_t>();
  for (const json& jdb : require(j, "dbs")) {
    CurrencyDb db;
    db.currency_id = require(jdb, "currency").get<int>();
    for (const json& ja : require(jdb, "accounts")) {
      if (!ja.is_array() || ja.size() != 2) {
        throw std::invalid_argument("snapshot account entries must be [address, balance]");
      }
      db.accounts.push_back({ja[0].get<uint64_t>(), fixed_from_json(ja[1], "balance")});
    }
    snapshot.dbs.push_back(std::move(db));
  }
  return snapshot;
}

void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << snapshot_to_json(snapshot).dump(1) << '\n';
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  return snapshot_from_json(load_json_file(path));
}

Portfolio portfolio_from_json(const json& j) {
  Portfolio p;
  for (const auto& [key, value] : require(j, "alphas").items()) {
    p.alphas.emplace_back(currency_key_to_id(key), fixed_from_json(value, "alpha"));
  }
  std::sort(p.alphas.begin(), p.alphas.end());
  validate(p);
  return p;
}

Portfolio read_portfolio(const std::filesystem::path& path) {
  return portfolio_from_json(load_json_file(path));
}

RateTable read_rates(const std::filesystem::path& path) {
  json j = load_json_file(path);
  RateTable rates;
  for (const auto& [key, value] : require(j, "rates").items()) {
    rates[currency_key_to_id(key)] = fixed_from_json(value, "rate");
  }
  return rates;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig config;
  config.sim = sim_config_from_json(require(j, "sim"));
  config.m_values = require(j, "m_values").get<std::vector<int>>();
  config.queries_per_m = require(j, "queries_per_m").get<int64_t>();
  config.snapshot_time = j.contains("snapshot_time") ? j["snapshot_time"].get<int64_t>()
                                                     : config.sim.turns;
  const json& threshold =
      j.contains("threshold") ? j["threshold"] : require(j, "score_threshold");
  config.score_threshold = fixed_from_json(threshold, "threshold");
  config.seed = require(j, "seed").get<uint64_t>();
  if (j.contains("max_resamples")) config.max_resamples = j["max_resamples"].get<int64_t>();
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_config_from_json(load_json_file(path));
}

json answer_to_json(const AnswerTuple& answer, int searched_m) {
  json accounts = json::array();
  for (const AnswerAccount& a : answer.accounts) {
    accounts.push_back(
        {{"currency", a.currency_id}, {"address", a.address}, {"balance", a.balance.str()}});
  }
  return {{"accounts", std::move(accounts)},
          {"score", answer.score.str()},
          {"normalized_score", normalized_score(answer.score, searched_m).str()}};
}

json finder_result_to_json(const FinderResult& result) {
  json retained = json::array();
  for (const AnswerTuple& answer : result.retained) {
    retained.push_back(answer_to_json(answer, result.searched_m));
  }
  json diagnostics = {{"searched_m", result.searched_m},
                      {"pivots", result.stats.pivots},
                      {"pivot_misses", result.stats.pivot_misses},
                      {"pivot_cap_overflows", result.stats.pivot_cap_overflows},
                      {"tuples_scored", result.stats.tuples_scored},
                      {"tuples_retained", result.stats.tuples_retained}};
  json out = {{"retained", std::move(retained)}, {"diagnostics", std::move(diagnostics)}};
  out["best"] = result.best ? answer_to_json(*result.best, result.searched_m) : json();
  return out;
}

json oracle_result_to_json(const OracleResult& result, int searched_m) {
  json out = {{"tuples_examined", result.tuples_examined}};
  out["best"] = result.best ? answer_to_json(*result.best, searched_m) : json();
  return out;
}

}  // namespace portfind::io
