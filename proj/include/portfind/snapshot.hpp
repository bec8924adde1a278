#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "portfind/fixed.hpp"
#include "portfind/sim.hpp"

namespace portfind {

struct AccountBalance {
  uint64_t address = 0;
  Fixed balance;  // common-currency units, > 0 after pruning
  friend bool operator==(const AccountBalance&, const AccountBalance&) = default;
};

struct CurrencyDb {
  int currency_id = 0;
  std::vector<AccountBalance> accounts;  // ascending (balance, address)
  friend bool operator==(const CurrencyDb&, const CurrencyDb&) = default;
};

struct Snapshot {
  int64_t time = 0;
  std::vector<CurrencyDb> dbs;  // ascending (account count, currency_id)
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

// Common units per native unit; currencies not listed convert at 1.
using RateTable = std::map<int, Fixed>;

// balance * rate, truncating. rate must be > 0.
Fixed convert_common(Fixed balance, Fixed rate);

// Applies every record with turn < t, converts balances to common units,
// drops zero balances and sorts. Records must arrive grouped by
// (turn, currency_id) in nondecreasing order; a group's fees are credited
// to the destination of its trailing MINT record.
// Throws std::invalid_argument for bad arguments and std::runtime_error
// for corrupt logs (unknown currency, negative balance, misplaced fees).
Snapshot replay_records(std::span<const TransactionRecord> records,
                        const std::vector<int>& currency_ids, int64_t t,
                        const RateTable& rates = {});

Snapshot replay(const SimulationLog& log, int64_t t, const RateTable& rates = {});

// nullptr when the snapshot has no db for that currency.
const CurrencyDb* find_db(const Snapshot& snapshot, int currency_id);

// Sub-snapshot restricted to the given currencies (all must be present).
// Db ordering is preserved, so the invariant keeps holding.
Snapshot filter_snapshot(const Snapshot& snapshot, const std::vector<int>& currency_ids);

}  // namespace portfind
