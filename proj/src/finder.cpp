#include "portfind/finder.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace portfind {

namespace {

bool address_tuple_less(const AnswerTuple& a, const AnswerTuple& b) {
  for (size_t i = 0; i < a.accounts.size(); ++i) {
    if (a.accounts[i].address != b.accounts[i].address) {
      return a.accounts[i].address < b.accounts[i].address;
    }
  }
  return false;
}

}  // namespace

void validate(const Portfolio& portfolio) {
  const auto fail = [](const std::string& msg) { throw std::invalid_argument("portfolio: " + msg); };
  if (portfolio.alphas.empty()) fail("no entries");
  Fixed sum;
  int prev_id = 0;
  for (const auto& [id, alpha] : portfolio.alphas) {
    if (id <= prev_id) fail("currency ids must be ascending and unique");
    prev_id = id;
    if (alpha < Fixed{} || alpha > Fixed::from_int(1)) fail("each alpha must lie in [0,1]");
    sum += alpha;
  }
  // One truncated division per entry loses at most one raw unit each.
  int64_t slack = static_cast<int64_t>(portfolio.alphas.size());
  int64_t err = sum.raw() - Fixed::kScale;
  if (err > slack || err < -slack) fail("alphas must sum to 1");
}

Fixed score(std::span<const Fixed> alphas, std::span<const Fixed> balances) {
  if (alphas.size() != balances.size() || alphas.empty()) {
    throw std::invalid_argument("score: alphas and balances must align");
  }
  Fixed total;
  for (Fixed b : balances) total += b;
  if (total <= Fixed{}) throw std::invalid_argument("score: balance total must be > 0");
  Fixed m = Fixed::from_int(static_cast<int64_t>(alphas.size()));
  Fixed distance;
  for (size_t i = 0; i < alphas.size(); ++i) {
    distance += (alphas[i] - balances[i] / total).abs();
  }
  return m - distance;
}

Fixed normalized_score(Fixed s, int m) {
  if (m < 1) throw std::invalid_argument("normalized_score: m must be >= 1");
  return s / Fixed::from_int(m);
}

Fixed target_balance(Fixed a_balance, Fixed alpha_1, Fixed alpha_i) {
  if (alpha_1 <= Fixed{}) throw std::invalid_argument("target_balance: pivot ratio must be > 0");
  return Fixed::mul_div(a_balance, alpha_i, alpha_1);
}

IndexRange binary_find_range(const CurrencyDb& db, Fixed target) {
  const auto& accounts = db.accounts;
  const auto bal_less = [](const AccountBalance& a, Fixed b) { return a.balance < b; };
  const auto less_bal = [](Fixed b, const AccountBalance& a) { return b < a.balance; };

  auto at_or_above = std::lower_bound(accounts.begin(), accounts.end(), target, bal_less);
  if (at_or_above == accounts.end()) return {};  // target above the maximum
  if (at_or_above->balance == target) {
    auto past = std::upper_bound(at_or_above, accounts.end(), target, less_bal);
    return {static_cast<size_t>(at_or_above - accounts.begin()),
            static_cast<size_t>(past - accounts.begin())};
  }
  if (at_or_above == accounts.begin()) return {};  // target below the minimum
  // Bracket: every account holding the nearest balance below the target,
  // plus every account holding the nearest balance above it.
  Fixed low_balance = (at_or_above - 1)->balance;
  auto low_first = std::lower_bound(accounts.begin(), at_or_above, low_balance, bal_less);
  auto high_past = std::upper_bound(at_or_above, accounts.end(), at_or_above->balance, less_bal);
  return {static_cast<size_t>(low_first - accounts.begin()),
          static_cast<size_t>(high_past - accounts.begin())};
}

std::vector<AccountBalance> binary_find(const CurrencyDb& db, Fixed target) {
  IndexRange r = binary_find_range(db, target);
  return {db.accounts.begin() + r.first, db.accounts.begin() + r.last};
}

std::vector<SearchDim> active_dims(const Snapshot& snapshot, const Portfolio& portfolio) {
  validate(portfolio);
  if (portfolio.alphas.size() != snapshot.dbs.size()) {
    throw std::invalid_argument("portfolio and snapshot cover a different number of currencies");
  }
  std::vector<SearchDim> dims;
  for (const CurrencyDb& db : snapshot.dbs) {
    auto it = std::find_if(portfolio.alphas.begin(), portfolio.alphas.end(),
                           [&](const auto& entry) { return entry.first == db.currency_id; });
    if (it == portfolio.alphas.end()) {
      throw std::invalid_argument("portfolio has no alpha for currency " +
                                  std::to_string(db.currency_id));
    }
    if (it->second > Fixed{}) dims.push_back({&db, db.currency_id, it->second});
  }
  return dims;
}

bool answer_precedes(const AnswerTuple& a, const AnswerTuple& b) {
  if (a.score != b.score) return a.score > b.score;
  return address_tuple_less(a, b);
}

FinderResult find_accounts(const Snapshot& snapshot, const Portfolio& portfolio,
                           const FinderParams& params) {
  if (params.max_answers && *params.max_answers == 0) {
    throw std::invalid_argument("max_answers must be >= 1");
  }
  if (params.per_pivot_product_cap == 0) {
    throw std::invalid_argument("per_pivot_product_cap must be >= 1");
  }
  std::vector<SearchDim> dims = active_dims(snapshot, portfolio);

  FinderResult result;
  result.searched_m = static_cast<int>(dims.size());
  if (dims.empty()) return result;  // all alphas zero: nothing to search

  const size_t k = dims.size();
  // Answer accounts are reported in ascending currency order regardless of
  // the size-sorted search order.
  std::vector<size_t> by_currency(k);
  for (size_t i = 0; i < k; ++i) by_currency[i] = i;
  std::sort(by_currency.begin(), by_currency.end(),
            [&](size_t a, size_t b) { return dims[a].currency_id < dims[b].currency_id; });

  std::vector<Fixed> alphas(k);
  for (size_t i = 0; i < k; ++i) alphas[i] = dims[i].alpha;

  // Worst answers on top, so the retained list can be capped as it grows.
  const auto worse = [](const AnswerTuple& a, const AnswerTuple& b) {
    return answer_precedes(a, b);
  };
  std::priority_queue<AnswerTuple, std::vector<AnswerTuple>, decltype(worse)> retained(worse);

  std::vector<IndexRange> ranges(k);
  std::vector<size_t> cursor(k);
  std::vector<Fixed> balances(k);
  const CurrencyDb& pivot_db = *dims[0].db;

  for (size_t pivot = 0; pivot < pivot_db.accounts.size(); ++pivot) {
    ++result.stats.pivots;
    const Fixed pivot_balance = pivot_db.accounts[pivot].balance;
    ranges[0] = {pivot, pivot + 1};
    bool miss = false;
    uint64_t product = 1;
    for (size_t i = 1; i < k; ++i) {
      // a target beyond the fixed-point range cannot be in any db
      std::optional<Fixed> target =
          Fixed::try_mul_div(pivot_balance, dims[i].alpha, dims[0].alpha);
      ranges[i] = target ? binary_find_range(*dims[i].db, *target) : IndexRange{};
      if (ranges[i].empty()) {
        miss = true;
        break;
      }
      product *= ranges[i].size();
      if (product > params.per_pivot_product_cap) break;
    }
    if (miss) {
      ++result.stats.pivot_misses;
      continue;
    }
    if (product > params.per_pivot_product_cap) {
      ++result.stats.pivot_cap_overflows;
      continue;
    }

    for (size_t i = 0; i < k; ++i) cursor[i] = ranges[i].first;
    for (;;) {
      for (size_t i = 0; i < k; ++i) balances[i] = dims[i].db->accounts[cursor[i]].balance;
      Fixed s = score(alphas, balances);
      ++result.stats.tuples_scored;
      if (s >= params.score_threshold) {
        ++result.stats.tuples_retained;
        AnswerTuple answer;
        answer.score = s;
        answer.accounts.reserve(k);
        for (size_t idx : by_currency) {
          const AccountBalance& acct = dims[idx].db->accounts[cursor[idx]];
          answer.accounts.push_back({dims[idx].currency_id, acct.address, acct.balance});
        }
        if (!result.best || answer_precedes(answer, *result.best)) result.best = answer;
        retained.push(std::move(answer));
        if (params.max_answers && retained.size() > *params.max_answers) retained.pop();
      }
      // odometer over the candidate ranges
      size_t i = k;
      while (i > 0) {
        if (++cursor[i - 1] < ranges[i - 1].last) break;
        cursor[i - 1] = ranges[i - 1].first;
        --i;
      }
      if (i == 0) break;  // every digit wrapped
    }
  }

  result.retained.resize(retained.size());
  for (size_t i = retained.size(); i > 0; --i) {
    result.retained[i - 1] = retained.top();
    retained.pop();
  }
  return result;
}

}  // namespace portfind
