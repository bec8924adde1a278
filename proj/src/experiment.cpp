#include "portfind/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "portfind/rng.hpp"
#include "portfind/snapshot.hpp"

namespace portfind {

namespace {

using nlohmann::json;

struct BalanceIndex {
  // currency_id -> (address -> common-unit balance)
  std::unordered_map<int, std::unordered_map<uint64_t, Fixed>> by_currency;

  explicit BalanceIndex(const Snapshot& snapshot) {
    for (const CurrencyDb& db : snapshot.dbs) {
      auto& m = by_currency[db.currency_id];
      m.reserve(db.accounts.size());
      for (const AccountBalance& a : db.accounts) m.emplace(a.address, a.balance);
    }
  }

  // zero when pruned from the snapshot
  Fixed lookup(int currency_id, uint64_t address) const {
    const auto& m = by_currency.at(currency_id);
    auto it = m.find(address);
    return it == m.end() ? Fixed{} : it->second;
  }
};

// First m entries of a Fisher-Yates pass over [1..count], returned ascending.
std::vector<int> draw_currency_subset(DetRng& rng, int count, int m) {
  std::vector<int> pool(count);
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < m; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, count - i)]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("experiment config: " + msg);
  };
  validate(config.sim);
  if (config.m_values.empty()) fail("m_values must be non-empty");
  for (int m : config.m_values) {
    if (m < 1 || m > static_cast<int>(config.sim.currencies.size())) {
      fail("each m must lie in [1, number of currencies]");
    }
  }
  if (config.queries_per_m < 1) fail("queries_per_m must be >= 1");
  if (config.snapshot_time < 0 || config.snapshot_time > config.sim.turns) {
    fail("snapshot_time must lie in [0, turns]");
  }
  if (config.max_resamples < 0) fail("max_resamples must be >= 0");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const int currency_count = static_cast<int>(config.sim.currencies.size());

  SimulationLog log = simulate(config.sim);
  Snapshot snapshot = replay(log, config.snapshot_time);
  BalanceIndex balances(snapshot);

  DetRng rng(config.seed);
  ExperimentResult result;

  for (int m : config.m_values) {
    MAggregate agg;
    agg.m = m;
    agg.queries = config.queries_per_m;
    Fixed normalized_sum;

    for (int64_t q = 1; q <= config.queries_per_m; ++q) {
      QueryRow row;
      row.m = m;
      row.query_id = q;

      // Resample until the drawn user holds a positive balance in every
      // drawn currency; users the snapshot has pruned carry no portfolio.
      const UserRecord* user = nullptr;
      std::vector<int> subset;
      std::vector<Fixed> user_balances;
      for (int64_t attempt = 0; attempt <= config.max_resamples; ++attempt) {
        const UserRecord& candidate = log.users[uniform_index(rng, log.users.size())];
        std::vector<int> chosen = draw_currency_subset(rng, currency_count, m);
        std::vector<Fixed> held;
        held.reserve(chosen.size());
        bool all_positive = true;
        for (int currency : chosen) {
          Fixed b = balances.lookup(currency, candidate.accounts[currency - 1].address);
          if (b.is_zero()) {
            all_positive = false;
            break;
          }
          held.push_back(b);
        }
        if (all_positive) {
          user = &candidate;
          subset = std::move(chosen);
          user_balances = std::move(held);
          break;
        }
      }
      if (user == nullptr) {
        row.skipped = true;
        ++agg.skipped;
        ++agg.misses;
        result.rows.push_back(row);
        continue;
      }

      if (m == 1) {
        // A single ratio P = {1} matches every account equally; the query
        // is declared missed without searching.
        ++agg.misses;
        result.rows.push_back(row);
        continue;
      }

      Fixed total;
      for (Fixed b : user_balances) total += b;
      Portfolio portfolio;
      for (size_t i = 0; i < subset.size(); ++i) {
        portfolio.alphas.emplace_back(subset[i], user_balances[i] / total);
      }

      FinderParams params;
      params.score_threshold = config.score_threshold;
      params.max_answers = 1;  // only the best matters here
      FinderResult found =
          find_accounts(filter_snapshot(snapshot, subset), portfolio, params);

      if (found.best) {
        row.hit = true;
        row.best_normalized = normalized_score(found.best->score, m);
        row.recovered = true;
        for (const AnswerAccount& a : found.best->accounts) {
          if (user->accounts[a.currency_id - 1].address != a.address) {
            row.recovered = false;
            break;
          }
        }
        ++agg.hits;
        if (row.recovered) ++agg.recovered;
        normalized_sum += row.best_normalized;
        int64_t bin = (row.best_normalized * Fixed::from_int(kHistogramBins)).floor_units();
        if (bin < 0) bin = 0;
        if (bin >= kHistogramBins) bin = kHistogramBins - 1;
        ++agg.histogram[static_cast<size_t>(bin)];
      } else {
        ++agg.misses;
      }
      result.rows.push_back(row);
    }

    agg.missing_rate = Fixed::from_int(agg.misses) / Fixed::from_int(agg.queries);
    if (agg.hits > 0) agg.mean_normalized = normalized_sum / Fixed::from_int(agg.hits);
    result.aggregates.push_back(agg);
  }
  return result;
}

void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  {
    auto out = open_out(out_dir / "missing_rate.csv");
    out << "m,queries,misses,missing_rate\n";
    for (const MAggregate& agg : result.aggregates) {
      out << agg.m << ',' << agg.queries << ',' << agg.misses << ',' << agg.missing_rate.str()
          << '\n';
    }
  }

  for (const MAggregate& agg : result.aggregates) {
    auto scores = open_out(out_dir / ("scores_m" + std::to_string(agg.m) + ".csv"));
    scores << "query_id,normalized_score,recovered\n";
    for (const QueryRow& row : result.rows) {
      if (row.m == agg.m && row.hit) {
        scores << row.query_id << ',' << row.best_normalized.str() << ',' << (row.recovered ? 1 : 0)
               << '\n';
      }
    }

    auto hist = open_out(out_dir / ("histogram_m" + std::to_string(agg.m) + ".csv"));
    hist << "bin_lo,bin_hi,count\n";
    const Fixed width = Fixed::from_int(1) / Fixed::from_int(kHistogramBins);
    for (int b = 0; b < kHistogramBins; ++b) {
      hist << (width * Fixed::from_int(b)).str() << ','
           << (width * Fixed::from_int(b + 1)).str() << ',' << agg.histogram[b] << '\n';
    }
  }

  json per_m = json::array();
  for (const MAggregate& agg : result.aggregates) {
    json entry = {{"m", agg.m},
                  {"queries", agg.queries},
                  {"misses", agg.misses},
                  {"skipped", agg.skipped},
                  {"hits", agg.hits},
                  {"recovered", agg.recovered},
                  {"missing_rate", agg.missing_rate.str()},
                  {"histogram", agg.histogram}};
    entry["mean_normalized_score"] = agg.mean_normalized ? json(agg.mean_normalized->str()) : json();
    per_m.push_back(std::move(entry));
  }
  json summary = {{"m_values", config.m_values},
                  {"queries_per_m", config.queries_per_m},
                  {"snapshot_time", config.snapshot_time},
                  {"threshold", config.score_threshold.str()},
                  {"seed", config.seed},
                  {"per_m", std::move(per_m)}};
  auto out = open_out(out_dir / "result.json");
  out << summary.dump(1) << '\n';
}

}  // namespace portfind
