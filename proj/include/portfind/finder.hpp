#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "portfind/fixed.hpp"
#include "portfind/snapshot.hpp"

namespace portfind {

// Investment ratio vector, keyed by currency id. Each alpha lies in [0,1]
// and the alphas sum to 1 (up to one truncated division per entry).
struct Portfolio {
  std::vector<std::pair<int, Fixed>> alphas;  // ascending currency_id
};

void validate(const Portfolio& portfolio);

struct AnswerAccount {
  int currency_id = 0;
  uint64_t address = 0;
  Fixed balance;
  friend bool operator==(const AnswerAccount&, const AnswerAccount&) = default;
};

// One candidate account per searched currency plus its score.
struct AnswerTuple {
  std::vector<AnswerAccount> accounts;  // ascending currency_id
  Fixed score;
  friend bool operator==(const AnswerTuple&, const AnswerTuple&) = default;
};

struct FinderParams {
  Fixed score_threshold;                 // answers below this are dropped
  std::optional<uint64_t> max_answers;   // cap on the retained list, >= 1
  uint64_t per_pivot_product_cap = 1'000'000;  // candidate-tuple cap per pivot
};

struct FinderStats {
  uint64_t pivots = 0;
  uint64_t pivot_misses = 0;         // some currency had no candidate for this pivot
  uint64_t pivot_cap_overflows = 0;  // candidate product exceeded the per-pivot cap
  uint64_t tuples_scored = 0;
  uint64_t tuples_retained = 0;      // total passing the threshold, before any cap
  friend bool operator==(const FinderStats&, const FinderStats&) = default;
};

struct FinderResult {
  std::optional<AnswerTuple> best;    // absent on a global miss
  std::vector<AnswerTuple> retained;  // descending score, address tie-break
  FinderStats stats;
  int searched_m = 0;  // dimensions actually searched (zero alphas excluded)
};

// m - sum_i |alpha_i - balance_i / sum_j balance_j|, m = |alphas|.
// Maximal value m, reached exactly when the balance fractions equal the
// alphas. Throws on size mismatch or a nonpositive balance total.
Fixed score(std::span<const Fixed> alphas, std::span<const Fixed> balances);

Fixed normalized_score(Fixed s, int m);

// Balance to look for in currency i when the pivot account holds
// a_balance under ratio alpha_1: a_balance * alpha_i / alpha_1.
Fixed target_balance(Fixed a_balance, Fixed alpha_1, Fixed alpha_i);

// Half-open index range into a CurrencyDb's account list; binary_find
// results are always contiguous runs of the sorted list.
struct IndexRange {
  size_t first = 0;
  size_t last = 0;
  bool empty() const { return first == last; }
  size_t size() const { return last - first; }
};

// Binary search for a target balance in accounts sorted by (balance,
// address). Exact hits return every account with that balance; otherwise
// the result brackets the target with the nearest lower and higher
// balances, expanded over ties. Targets outside [min, max] return nothing.
IndexRange binary_find_range(const CurrencyDb& db, Fixed target);
std::vector<AccountBalance> binary_find(const CurrencyDb& db, Fixed target);

// The search: pivot on every account of the smallest db, derive target
// balances for the other currencies from the portfolio ratios, score the
// Cartesian product of the bracketed candidates and keep everything at or
// above the threshold. Ties on score break toward the lexicographically
// smallest address tuple (ascending currency order). Currencies whose
// alpha is zero are excluded from the search.
FinderResult find_accounts(const Snapshot& snapshot, const Portfolio& portfolio,
                           const FinderParams& params);

// Shared with the exhaustive oracle so both searches score identical
// dimensions and break ties identically.
struct SearchDim {
  const CurrencyDb* db = nullptr;
  int currency_id = 0;
  Fixed alpha;
};
std::vector<SearchDim> active_dims(const Snapshot& snapshot, const Portfolio& portfolio);
bool answer_precedes(const AnswerTuple& a, const AnswerTuple& b);  // (score desc, addresses asc)

}  // namespace portfind
