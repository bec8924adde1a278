#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "portfind/finder.hpp"
#include "portfind/rng.hpp"

using namespace portfind;

namespace {

CurrencyDb db_of(int id, std::vector<std::pair<uint64_t, const char*>> entries) {
  CurrencyDb db;
  db.currency_id = id;
  for (auto& [addr, bal] : entries) db.accounts.push_back({addr, Fixed::parse(bal)});
  std::sort(db.accounts.begin(), db.accounts.end(), [](const auto& a, const auto& b) {
    return std::pair(a.balance, a.address) < std::pair(b.balance, b.address);
  });
  return db;
}

// The worked seven-account example: {(1,1.23),(2,3.78),(3,6.0),(4,6.0),
// (5,7.13),(6,8.2),(7,12.6)}.
CurrencyDb seven_accounts() {
  return db_of(1, {{1, "1.23"}, {2, "3.78"}, {3, "6.0"}, {4, "6.0"}, {5, "7.13"}, {6, "8.2"},
                   {7, "12.6"}});
}

std::vector<uint64_t> addresses_of(const std::vector<AccountBalance>& accounts) {
  std::vector<uint64_t> out;
  for (const AccountBalance& a : accounts) out.push_back(a.address);
  return out;
}

// Straight-line restatement of the binary_find contract, used as the
// reference the binary search must agree with.
std::vector<AccountBalance> linear_find(const CurrencyDb& db, Fixed target) {
  const auto& accounts = db.accounts;
  if (accounts.empty()) return {};
  std::vector<AccountBalance> exact;
  for (const AccountBalance& a : accounts) {
    if (a.balance == target) exact.push_back(a);
  }
  if (!exact.empty()) return exact;
  if (target < accounts.front().balance || target > accounts.back().balance) return {};
  Fixed low = accounts.front().balance;
  Fixed high = accounts.back().balance;
  for (const AccountBalance& a : accounts) {
    if (a.balance < target && a.balance > low) low = a.balance;
    if (a.balance > target && a.balance < high) high = a.balance;
  }
  std::vector<AccountBalance> out;
  for (const AccountBalance& a : accounts) {
    if (a.balance == low || a.balance == high) out.push_back(a);
  }
  return out;
}

Portfolio make_portfolio(std::vector<std::pair<int, const char*>> entries) {
  Portfolio p;
  for (auto& [id, alpha] : entries) p.alphas.emplace_back(id, Fixed::parse(alpha));
  return p;
}

Snapshot snapshot_of(std::vector<CurrencyDb> dbs) {
  Snapshot snap;
  snap.time = 1;
  snap.dbs = std::move(dbs);
  std::sort(snap.dbs.begin(), snap.dbs.end(), [](const CurrencyDb& a, const CurrencyDb& b) {
    return std::pair(a.accounts.size(), a.currency_id) <
           std::pair(b.accounts.size(), b.currency_id);
  });
  return snap;
}

}  // namespace

TEST_CASE("binary_find brackets a target between distinct balances") {
  auto got = binary_find(seven_accounts(), Fixed::parse("7.99"));
  CHECK(addresses_of(got) == std::vector<uint64_t>{5, 6});
}

TEST_CASE("binary_find returns every exact match") {
  auto got = binary_find(seven_accounts(), Fixed::parse("6.0"));
  CHECK(addresses_of(got) == std::vector<uint64_t>{3, 4});
  CHECK(addresses_of(binary_find(seven_accounts(), Fixed::parse("12.6"))) ==
        std::vector<uint64_t>{7});
}

TEST_CASE("binary_find rejects targets outside the balance range") {
  CHECK(binary_find(seven_accounts(), Fixed::parse("0.5")).empty());
  CHECK(binary_find(seven_accounts(), Fixed::parse("12.61")).empty());
  CHECK(binary_find(CurrencyDb{}, Fixed::from_int(1)).empty());
}

TEST_CASE("binary_find expands brackets across tied balances") {
  auto got = binary_find(seven_accounts(), Fixed::parse("6.6"));
  CHECK(addresses_of(got) == std::vector<uint64_t>{3, 4, 5});
  CHECK(got == linear_find(seven_accounts(), Fixed::parse("6.6")));
}

TEST_CASE("binary_find agrees with the linear reference on random lists") {
  DetRng rng(2024);
  for (int trial = 0; trial < 4000; ++trial) {
    size_t n = uniform_index(rng, 60);
    CurrencyDb db;
    db.currency_id = 1;
    for (size_t i = 0; i < n; ++i) {
      // coarse grid keeps duplicates common
      Fixed bal = Fixed::from_raw((1 + static_cast<int64_t>(uniform_index(rng, 40))) *
                                  (Fixed::kScale / 2));
      db.accounts.push_back({i + 1, bal});
    }
    std::sort(db.accounts.begin(), db.accounts.end(), [](const auto& a, const auto& b) {
      return std::pair(a.balance, a.address) < std::pair(b.balance, b.address);
    });
    for (int probe = 0; probe < 8; ++probe) {
      // alternate off-grid targets with grid-aligned ones so both the
      // bracket and the exact-match branches get exercised
      Fixed target =
          probe % 2 == 0
              ? Fixed::from_raw(static_cast<int64_t>(uniform_index(rng, 22 * Fixed::kScale)))
              : Fixed::from_raw(static_cast<int64_t>(uniform_index(rng, 44)) * (Fixed::kScale / 2));
      CHECK(binary_find(db, target) == linear_find(db, target));
    }
  }
}

TEST_CASE("score matches the hand-computed examples") {
  const Fixed half = Fixed::parse("0.5");
  std::vector<Fixed> alphas{half, half};
  std::vector<Fixed> balances{Fixed::from_int(5), Fixed::from_int(5)};
  CHECK(score(alphas, balances) == Fixed::from_int(2));

  alphas = {Fixed::parse("0.6"), Fixed::parse("0.4")};
  balances = {Fixed::from_int(3), Fixed::from_int(7)};
  CHECK(score(alphas, balances) == Fixed::parse("1.4"));

  alphas = {Fixed::from_int(1)};
  balances = {Fixed::parse("123.456")};
  CHECK(score(alphas, balances) == Fixed::from_int(1));
}

TEST_CASE("score rejects degenerate inputs") {
  std::vector<Fixed> alphas{Fixed::from_int(1)};
  std::vector<Fixed> zero{Fixed{}};
  CHECK_THROWS_AS(score(alphas, zero), std::invalid_argument);
  std::vector<Fixed> two{Fixed::from_int(1), Fixed::from_int(1)};
  CHECK_THROWS_AS(score(alphas, two), std::invalid_argument);
}

TEST_CASE("score stays within [m-2, m] and ignores scale") {
  DetRng rng(555);
  for (int trial = 0; trial < 10000; ++trial) {
    size_t m = 1 + uniform_index(rng, 5);
    std::vector<Fixed> raw(m), alphas(m), balances(m);
    Fixed total;
    for (size_t i = 0; i < m; ++i) {
      raw[i] = Fixed::from_raw(1 + static_cast<int64_t>(uniform_index(rng, Fixed::kScale)));
      total += raw[i];
    }
    for (size_t i = 0; i < m; ++i) alphas[i] = raw[i] / total;
    bool any_positive = false;
    for (size_t i = 0; i < m; ++i) {
      balances[i] = Fixed::from_raw(static_cast<int64_t>(uniform_index(rng, 1000 * Fixed::kScale)));
      any_positive = any_positive || !balances[i].is_zero();
    }
    if (!any_positive) balances[0] = Fixed::from_int(1);

    Fixed s = score(alphas, balances);
    CHECK(s <= Fixed::from_int(static_cast<int64_t>(m)));
    CHECK(s >= Fixed::from_int(static_cast<int64_t>(m) - 2));

    for (int64_t lam : {2, 10, 1000}) {
      std::vector<Fixed> scaled(m);
      for (size_t i = 0; i < m; ++i) scaled[i] = balances[i] * Fixed::from_int(lam);
      CHECK(score(alphas, scaled) == s);
    }
  }
}

TEST_CASE("target_balance scales the pivot balance by the ratio of alphas") {
  CHECK(target_balance(Fixed::from_int(10), Fixed::parse("0.5"), Fixed::parse("0.25")) ==
        Fixed::from_int(5));
  CHECK(target_balance(Fixed::from_int(10), Fixed::parse("0.5"), Fixed::parse("0.5")) ==
        Fixed::from_int(10));
  CHECK(target_balance(Fixed::parse("7.13"), Fixed::parse("0.2"), Fixed::parse("0.8")) ==
        Fixed::parse("28.52"));
  CHECK_THROWS_AS(target_balance(Fixed::from_int(1), Fixed{}, Fixed::parse("0.5")),
                  std::invalid_argument);
}

TEST_CASE("normalized_score divides by m") {
  CHECK(normalized_score(Fixed::from_int(2), 2) == Fixed::from_int(1));
  CHECK(normalized_score(Fixed::parse("1.4"), 2) == Fixed::parse("0.7"));
  CHECK(normalized_score(Fixed::parse("0.98"), 1) == Fixed::parse("0.98"));
  CHECK_THROWS_AS(normalized_score(Fixed::from_int(1), 0), std::invalid_argument);
}

TEST_CASE("find_accounts recovers a planted tuple with the maximal score") {
  // planted user holds 10/30/60; strangers are >10% away in every ratio
  Snapshot snap = snapshot_of({
      db_of(1, {{1, "10"}, {2, "55"}}),
      db_of(2, {{1, "30"}, {2, "41"}, {3, "90"}}),
      db_of(3, {{1, "60"}, {2, "13"}, {3, "77"}, {4, "200"}}),
  });
  Portfolio p = make_portfolio({{1, "0.1"}, {2, "0.3"}, {3, "0.6"}});
  FinderParams params;
  params.score_threshold = Fixed::parse("2.9");

  FinderResult result = find_accounts(snap, p, params);
  REQUIRE(result.best.has_value());
  CHECK(result.best->score == Fixed::from_int(3));
  REQUIRE(result.best->accounts.size() == 3);
  for (const AnswerAccount& a : result.best->accounts) CHECK(a.address == 1);
  CHECK(result.searched_m == 3);
  CHECK(result.stats.pivots == 2);
}

TEST_CASE("with a single ratio every account matches; ties break to the smallest address") {
  Snapshot snap = snapshot_of({db_of(1, {{4, "6"}, {2, "9"}, {9, "1"}})});
  Portfolio p = make_portfolio({{1, "1"}});
  FinderParams params;  // S_t = 0
  FinderResult result = find_accounts(snap, p, params);
  REQUIRE(result.best.has_value());
  CHECK(result.best->score == Fixed::from_int(1));
  CHECK(result.best->accounts[0].address == 2);
  CHECK(result.retained.size() == 3);
  CHECK(result.stats.tuples_scored == 3);
}

TEST_CASE("zero alphas drop their currency from the search") {
  Snapshot snap = snapshot_of({
      db_of(1, {{1, "10"}}),
      db_of(2, {{1, "30"}, {2, "7"}}),
      db_of(3, {{1, "90"}, {2, "8"}, {3, "9"}}),
  });
  Portfolio p = make_portfolio({{1, "0"}, {2, "0.25"}, {3, "0.75"}});
  FinderParams params;
  params.score_threshold = Fixed::parse("1.99");
  FinderResult result = find_accounts(snap, p, params);
  CHECK(result.searched_m == 2);
  REQUIRE(result.best.has_value());
  CHECK(result.best->score == Fixed::from_int(2));
  REQUIRE(result.best->accounts.size() == 2);
  CHECK(result.best->accounts[0].currency_id == 2);
  CHECK(result.best->accounts[1].currency_id == 3);
}

TEST_CASE("an unmatchable target yields a global miss, not an error") {
  Snapshot snap = snapshot_of({
      db_of(1, {{1, "1"}}),
      db_of(2, {{1, "1000"}, {2, "2000"}}),
  });
  // alpha ratio demands a currency-2 balance of 1, far below the minimum
  Portfolio p = make_portfolio({{1, "0.5"}, {2, "0.5"}});
  FinderResult result = find_accounts(snap, p, FinderParams{});
  CHECK(!result.best.has_value());
  CHECK(result.retained.empty());
  CHECK(result.stats.pivot_misses == 1);
}

TEST_CASE("an empty db under a positive alpha is a global miss") {
  Snapshot snap = snapshot_of({db_of(1, {}), db_of(2, {{1, "5"}})});
  Portfolio p = make_portfolio({{1, "0.5"}, {2, "0.5"}});
  FinderResult result = find_accounts(snap, p, FinderParams{});
  CHECK(!result.best.has_value());
}

TEST_CASE("portfolio validation rejects bad ratio vectors") {
  CHECK_THROWS_AS(validate(make_portfolio({{1, "0.5"}, {2, "0.6"}})), std::invalid_argument);
  CHECK_THROWS_AS(validate(make_portfolio({{1, "1.5"}, {2, "-0.5"}})), std::invalid_argument);
  CHECK_THROWS_AS(validate(make_portfolio({{1, "0.5"}, {1, "0.5"}})), std::invalid_argument);
  CHECK_NOTHROW(validate(make_portfolio({{1, "0.5"}, {2, "0.5"}})));
  // truncated thirds: off by one raw unit per entry is accepted
  Portfolio thirds;
  Fixed third = Fixed::from_int(1) / Fixed::from_int(3);
  for (int id : {1, 2, 3}) thirds.alphas.emplace_back(id, third);
  CHECK_NOTHROW(validate(thirds));
}

TEST_CASE("portfolio / snapshot currency mismatches are errors") {
  Snapshot snap = snapshot_of({db_of(1, {{1, "5"}}), db_of(2, {{1, "5"}})});
  CHECK_THROWS_AS(find_accounts(snap, make_portfolio({{1, "1"}}), FinderParams{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      find_accounts(snap, make_portfolio({{1, "0.5"}, {3, "0.5"}}), FinderParams{}),
      std::invalid_argument);
}

TEST_CASE("max_answers caps the retained list but not the best answer") {
  Snapshot snap = snapshot_of({db_of(1, {{1, "1"}, {2, "2"}, {3, "3"}, {4, "4"}, {5, "5"}})});
  Portfolio p = make_portfolio({{1, "1"}});
  FinderParams params;
  params.max_answers = 2;
  FinderResult result = find_accounts(snap, p, params);
  CHECK(result.retained.size() == 2);
  CHECK(result.stats.tuples_retained == 5);
  REQUIRE(result.best.has_value());
  CHECK(result.best->accounts[0].address == 1);
  CHECK(result.retained[0] == *result.best);
  CHECK(std::is_sorted(result.retained.begin(), result.retained.end(), answer_precedes));
}

TEST_CASE("heavy ties overflowing the per-pivot product cap count as misses") {
  // 40 accounts tied at the target balance in each of two non-pivot dbs:
  // 1600 candidate tuples per pivot
  std::vector<std::pair<uint64_t, const char*>> tied;
  for (uint64_t i = 0; i < 40; ++i) tied.emplace_back(i + 1, "10");
  Snapshot snap = snapshot_of({db_of(1, {{1, "10"}, {2, "17"}}), db_of(2, tied), db_of(3, tied)});
  // equal truncated thirds keep every derived target at exactly 10
  Portfolio p = make_portfolio(
      {{1, "0.333333333333"}, {2, "0.333333333333"}, {3, "0.333333333333"}});

  FinderParams capped;
  capped.per_pivot_product_cap = 1000;
  FinderResult result = find_accounts(snap, p, capped);
  CHECK(result.stats.pivot_cap_overflows == 1);  // the balance-10 pivot
  CHECK(result.stats.pivot_misses == 1);         // the balance-17 pivot finds no partner
  REQUIRE(!result.best.has_value());

  FinderParams roomy;
  roomy.per_pivot_product_cap = 2000;
  FinderResult full = find_accounts(snap, p, roomy);
  CHECK(full.stats.tuples_scored == 1600);
  CHECK(full.best.has_value());
}

TEST_CASE("find_accounts is deterministic") {
  DetRng rng(31);
  Snapshot snap = snapshot_of({
      db_of(1, {{1, "10"}, {2, "20"}, {3, "20"}, {4, "35"}}),
      db_of(2, {{1, "10"}, {2, "10"}, {3, "25"}, {4, "40"}, {5, "40"}}),
  });
  Portfolio p = make_portfolio({{1, "0.5"}, {2, "0.5"}});
  FinderParams params;
  FinderResult a = find_accounts(snap, p, params);
  FinderResult b = find_accounts(snap, p, params);
  REQUIRE(a.best.has_value());
  CHECK(a.best == b.best);
  CHECK(a.retained == b.retained);
  CHECK(a.stats == b.stats);
}
