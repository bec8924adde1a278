#pragma once

#include <cstdint>
#include <optional>

#include "portfind/finder.hpp"
#include "portfind/snapshot.hpp"

namespace portfind {

struct OracleResult {
  std::optional<AnswerTuple> best;  // absent when some searched db is empty
  uint64_t tuples_examined = 0;     // product of the searched db sizes
};

inline constexpr uint64_t kDefaultOracleLimit = 10'000'000;

// Exhaustive reference search: enumerates every account tuple, scores each
// with the same formula, zero-alpha exclusion and tie-break as the finder,
// and returns the true maximum. No pruning of any kind. Refuses inputs
// whose tuple count exceeds the limit.
OracleResult exhaustive_best(const Snapshot& snapshot, const Portfolio& portfolio,
                             uint64_t limit = kDefaultOracleLimit);

}  // namespace portfind
