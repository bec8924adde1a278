#include "portfind/snapshot.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace portfind {

namespace {

struct ReplayState {
  std::unordered_map<uint64_t, Fixed> balance;
  Fixed minted;
};

std::string describe(const TransactionRecord& r) {
  return "turn " + std::to_string(r.turn) + ", currency " + std::to_string(r.currency_id);
}

}  // namespace

Fixed convert_common(Fixed balance, Fixed rate) {
  if (rate <= Fixed{}) throw std::invalid_argument("exchange rate must be > 0");
  return balance * rate;
}

Snapshot replay_records(std::span<const TransactionRecord> records,
                        const std::vector<int>& currency_ids, int64_t t,
                        const RateTable& rates) {
  if (t < 0) throw std::invalid_argument("snapshot time must be >= 0");

  std::unordered_map<int, ReplayState> states;
  for (int id : currency_ids) states.emplace(id, ReplayState{});
  if (states.size() != currency_ids.size()) {
    throw std::invalid_argument("duplicate currency id");
  }

  // Fees of one (turn, currency) group are held back until the group ends,
  // then credited to the destination of its last MINT record. This mirrors
  // the simulator, where the miner collects reward and fees after all of
  // the turn's transfers.
  ReplayState* group_state = nullptr;
  std::pair<int64_t, int> group_key{-1, -1};
  Fixed group_fees;
  std::optional<uint64_t> group_miner;
  const auto flush_group = [&] {
    if (group_state == nullptr) return;
    if (group_fees > Fixed{}) {
      if (!group_miner) {
        throw std::runtime_error("corrupt log: fees collected with no miner record (turn " +
                                 std::to_string(group_key.first) + ", currency " +
                                 std::to_string(group_key.second) + ")");
      }
      group_state->balance[*group_miner] += group_fees;
    }
    group_fees = Fixed{};
    group_miner.reset();
  };

  for (const TransactionRecord& r : records) {
    if (r.turn >= t) continue;
    auto it = states.find(r.currency_id);
    if (it == states.end()) {
      throw std::runtime_error("corrupt log: unknown currency (" + describe(r) + ")");
    }
    std::pair<int64_t, int> key{r.turn, r.currency_id};
    if (key != group_key) {
      if (key < group_key) {
        throw std::runtime_error("corrupt log: records out of (turn, currency) order (" +
                                 describe(r) + ")");
      }
      flush_group();
      group_key = key;
      group_state = &it->second;
    }
    ReplayState& st = it->second;
    if (r.amount < Fixed{} || r.fee < Fixed{}) {
      throw std::runtime_error("corrupt log: negative amount or fee (" + describe(r) + ")");
    }
    if (r.is_mint()) {
      if (!r.fee.is_zero()) {
        throw std::runtime_error("corrupt log: MINT record with a fee (" + describe(r) + ")");
      }
      st.balance[r.destination] += r.amount;
      st.minted += r.amount;
      group_miner = r.destination;
    } else {
      if (*r.source == r.destination) {
        throw std::runtime_error("corrupt log: self transfer (" + describe(r) + ")");
      }
      Fixed& src = st.balance[*r.source];
      if (src < r.amount + r.fee) {
        throw std::runtime_error("corrupt log: balance driven negative (" + describe(r) + ")");
      }
      src -= r.amount + r.fee;
      st.balance[r.destination] += r.amount;
      group_fees += r.fee;
    }
  }
  flush_group();

  Snapshot snapshot;
  snapshot.time = t;
  for (int id : currency_ids) {
    Fixed rate = Fixed::from_int(1);
    if (auto it = rates.find(id); it != rates.end()) rate = it->second;

    CurrencyDb db;
    db.currency_id = id;
    for (const auto& [address, native] : states.at(id).balance) {
      Fixed common = convert_common(native, rate);
      if (!common.is_zero()) db.accounts.push_back({address, common});
    }
    std::sort(db.accounts.begin(), db.accounts.end(),
              [](const AccountBalance& a, const AccountBalance& b) {
                return std::pair(a.balance, a.address) < std::pair(b.balance, b.address);
              });
    snapshot.dbs.push_back(std::move(db));
  }
  std::sort(snapshot.dbs.begin(), snapshot.dbs.end(), [](const CurrencyDb& a, const CurrencyDb& b) {
    return std::pair(a.accounts.size(), a.currency_id) < std::pair(b.accounts.size(), b.currency_id);
  });
  return snapshot;
}

Snapshot replay(const SimulationLog& log, int64_t t, const RateTable& rates) {
  if (t > log.config.turns) throw std::invalid_argument("snapshot time is past the end of the log");
  std::vector<int> ids;
  RateTable effective;
  for (const CurrencyConfig& c : log.config.currencies) {
    ids.push_back(c.currency_id);
    effective[c.currency_id] = c.exchange_rate;
  }
  for (const auto& [id, rate] : rates) effective[id] = rate;
  return replay_records(log.records, ids, t, effective);
}

const CurrencyDb* find_db(const Snapshot& snapshot, int currency_id) {
  for (const CurrencyDb& db : snapshot.dbs) {
    if (db.currency_id == currency_id) return &db;
  }
  return nullptr;
}

Snapshot filter_snapshot(const Snapshot& snapshot, const std::vector<int>& currency_ids) {
  Snapshot out;
  out.time = snapshot.time;
  for (const CurrencyDb& db : snapshot.dbs) {
    if (std::find(currency_ids.begin(), currency_ids.end(), db.currency_id) != currency_ids.end()) {
      out.dbs.push_back(db);
    }
  }
  if (out.dbs.size() != currency_ids.size()) {
    throw std::invalid_argument("snapshot is missing a requested currency");
  }
  return out;
}

}  // namespace portfind
