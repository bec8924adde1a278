#include "portfind/sim.hpp"

#include <stdexcept>
#include <string>

#include "portfind/rng.hpp"

namespace portfind {

namespace {

const Fixed kOne = Fixed::from_int(1);

// Largest amount with amount + trunc(amount * rate) <= balance. Exact
// equality is not always representable, so the sender may keep a few
// trailing raw units.
Fixed clip_amount(Fixed balance, Fixed fee_rate) {
  Fixed amount = balance / (kOne + fee_rate);
  for (;;) {
    Fixed next = Fixed::from_raw(amount.raw() + 1);
    if (next + next * fee_rate > balance) return amount;
    amount = next;
  }
}

}  // namespace

int64_t new_users_at(const CurrencyConfig& config, int64_t t) {
  if (t < 0) throw std::invalid_argument("turn must be >= 0");
  return (config.beta1 * Fixed::from_int(t) + config.beta0).floor_units();
}

void validate(const SimConfig& config) {
  const auto fail = [](const std::string& msg) { throw std::invalid_argument("sim config: " + msg); };
  if (config.currencies.empty()) fail("at least one currency required");
  if (config.turns < 1) fail("turns must be >= 1");
  if (config.transactions_per_user_per_turn < 1) fail("transactions_per_user_per_turn must be >= 1");
  const Fixed zero;
  for (size_t i = 0; i < config.currencies.size(); ++i) {
    const CurrencyConfig& c = config.currencies[i];
    if (c.currency_id != static_cast<int>(i) + 1) fail("currency ids must be dense 1..m, ascending");
    if (c.beta1 < zero || c.beta0 < zero) fail("beta coefficients must be >= 0");
    if (c.miner_fee_rate < zero || c.miner_fee_rate > kOne) fail("miner_fee_rate must be in [0,1]");
    if (c.miner_reward < zero) fail("miner_reward must be >= 0");
    if (c.initial_endowment <= zero) fail("initial_endowment must be > 0");
    if (c.exchange_rate <= zero) fail("exchange_rate must be > 0");
  }
  // floor(beta1*t + beta0) is nondecreasing in t, so the last turn decides
  // whether the world ever acquires a user.
  int64_t last_turn_users = 0;
  for (const CurrencyConfig& c : config.currencies) {
    last_turn_users += new_users_at(c, config.turns - 1);
  }
  if (last_turn_users == 0) fail("no turn would create any user (empty world)");
}

SimulationLog simulate(const SimConfig& config) {
  validate(config);
  const size_t m = config.currencies.size();
  const int64_t tx_per_user = config.transactions_per_user_per_turn;

  SimulationLog log;
  log.config = config;

  DetRng rng(config.seed);
  // balances[c][addr-1]; addresses are 1-based and shared across currencies
  // because every user gets one account per currency at creation.
  std::vector<std::vector<Fixed>> balances(m);
  std::vector<std::vector<TransactionRecord>> turn_buffer(m);
  uint64_t user_count = 0;

  for (int64_t t = 0; t < config.turns; ++t) {
    // creation phase
    for (size_t c = 0; c < m; ++c) {
      int64_t fresh = new_users_at(config.currencies[c], t);
      for (int64_t k = 0; k < fresh; ++k) {
        ++user_count;
        UserRecord user;
        user.user_id = user_count;
        for (size_t c2 = 0; c2 < m; ++c2) {
          const CurrencyConfig& cc = config.currencies[c2];
          balances[c2].push_back(cc.initial_endowment);
          turn_buffer[c2].push_back({cc.currency_id, t, std::nullopt, user_count,
                                     cc.initial_endowment, Fixed{}});
          user.accounts.push_back({cc.currency_id, user_count});
        }
        log.users.push_back(std::move(user));
      }
    }

    // transfer phase
    std::vector<Fixed> turn_fees(m);
    for (size_t c = 0; c < m; ++c) {
      if (user_count < 2) break;  // nobody has a counterparty yet
      const Fixed fee_rate = config.currencies[c].miner_fee_rate;
      std::vector<Fixed>& bal = balances[c];
      for (uint64_t addr = 1; addr <= user_count; ++addr) {
        for (int64_t k = 0; k < tx_per_user; ++k) {
          if (bal[addr - 1].is_zero()) break;
          Fixed amount = bal[addr - 1] * uniform_fraction(rng);
          uint64_t peer = uniform_index(rng, user_count - 1) + 1;
          if (peer >= addr) ++peer;
          Fixed fee = amount * fee_rate;
          if (amount + fee > bal[addr - 1]) {
            amount = clip_amount(bal[addr - 1], fee_rate);
            fee = amount * fee_rate;
          }
          bal[addr - 1] -= amount + fee;
          bal[peer - 1] += amount;
          turn_fees[c] += fee;
          turn_buffer[c].push_back({config.currencies[c].currency_id, t, addr, peer, amount, fee});
        }
      }
    }

    // miner phase
    for (size_t c = 0; c < m; ++c) {
      if (user_count == 0) break;
      uint64_t miner = uniform_index(rng, user_count) + 1;
      const Fixed reward = config.currencies[c].miner_reward;
      if (reward > Fixed{} || turn_fees[c] > Fixed{}) {
        balances[c][miner - 1] += reward + turn_fees[c];
        turn_buffer[c].push_back({config.currencies[c].currency_id, t, std::nullopt, miner,
                                  reward, Fixed{}});
      }
    }

    for (size_t c = 0; c < m; ++c) {
      log.records.insert(log.records.end(), turn_buffer[c].begin(), turn_buffer[c].end());
      turn_buffer[c].clear();
    }
  }
  return log;
}

}  // namespace portfind
