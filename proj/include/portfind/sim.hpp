#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "portfind/fixed.hpp"

namespace portfind {

struct CurrencyConfig {
  int currency_id = 0;        // dense ids 1..m
  Fixed beta1;                // per-turn slope of user acquisition
  Fixed beta0;                // acquisition intercept
  Fixed miner_fee_rate;       // fraction of each transfer paid to the turn's miner, in [0,1]
  Fixed miner_reward;         // value minted to the miner each turn
  Fixed initial_endowment;    // balance granted to each newly created account, > 0
  Fixed exchange_rate = Fixed::from_int(1);  // common units per native unit
};

struct SimConfig {
  std::vector<CurrencyConfig> currencies;  // ascending currency_id
  int64_t turns = 1;
  int64_t transactions_per_user_per_turn = 1;
  uint64_t seed = 0;
};

struct AccountId {
  int currency_id = 0;
  uint64_t address = 0;  // assigned sequentially within a currency, starting at 1
  friend bool operator==(const AccountId&, const AccountId&) = default;
};

// One value transfer. A record without a source is a MINT: value created
// out of nothing (account endowments and miner rewards).
struct TransactionRecord {
  int currency_id = 0;
  int64_t turn = 0;
  std::optional<uint64_t> source;  // nullopt => MINT
  uint64_t destination = 0;
  Fixed amount;  // credited to destination
  Fixed fee;     // extra debit on source, collected by the turn's miner
  bool is_mint() const { return !source.has_value(); }
  friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

// Ground truth: one user owns exactly one account in every currency.
struct UserRecord {
  uint64_t user_id = 0;
  std::vector<AccountId> accounts;  // ascending currency_id
  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct SimulationLog {
  SimConfig config;
  // Ordered by (turn, currency_id, emission order). Within one (turn,
  // currency) group: endowment MINTs, then transfers, then -- when the
  // turn minted a reward or collected fees -- one trailing MINT naming
  // the miner. Replay credits the group's fees to that account.
  std::vector<TransactionRecord> records;
  std::vector<UserRecord> users;
};

// NewUsers(t) = floor(beta1 * t + beta0).
int64_t new_users_at(const CurrencyConfig& config, int64_t t);

// Throws std::invalid_argument when a field is out of range, ids are not
// dense 1..m, or no turn in [0, turns) would ever create a user.
void validate(const SimConfig& config);

// Deterministic turn-based simulation. Each turn, in order:
//   1. every currency's acquisition formula adds that many new global
//      users; a new user gets one endowed account in every currency;
//   2. every account with a positive balance sends
//      transactions_per_user_per_turn transfers, each moving a uniform
//      random fraction of its live balance to a uniform random other
//      account of the same currency, plus fee = amount * miner_fee_rate;
//   3. per currency, a uniform random existing account becomes the turn's
//      miner and collects miner_reward plus the turn's fees.
// Identical config (including seed) => identical log.
SimulationLog simulate(const SimConfig& config);

}  // namespace portfind
