#include "portfind/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace portfind {

OracleResult exhaustive_best(const Snapshot& snapshot, const Portfolio& portfolio,
                             uint64_t limit) {
  std::vector<SearchDim> dims = active_dims(snapshot, portfolio);
  OracleResult result;
  if (dims.empty()) return result;

  const size_t k = dims.size();
  std::string sizes;
  bool oversized = false;
  uint64_t product = 1;
  for (const SearchDim& dim : dims) {
    size_t n = dim.db->accounts.size();
    if (!sizes.empty()) sizes += " x ";
    sizes += std::to_string(n);
    if (n == 0) return result;  // no tuple exists
    if (product > limit / n) oversized = true;
    if (!oversized) product *= n;
  }
  if (oversized || product > limit) {
    throw std::invalid_argument("oracle: searched db sizes " + sizes + " exceed the tuple limit " +
                                std::to_string(limit));
  }

  std::vector<size_t> by_currency(k);
  for (size_t i = 0; i < k; ++i) by_currency[i] = i;
  std::sort(by_currency.begin(), by_currency.end(),
            [&](size_t a, size_t b) { return dims[a].currency_id < dims[b].currency_id; });

  std::vector<Fixed> alphas(k);
  for (size_t i = 0; i < k; ++i) alphas[i] = dims[i].alpha;

  std::vector<size_t> cursor(k, 0);
  std::vector<Fixed> balances(k);
  for (;;) {
    for (size_t i = 0; i < k; ++i) balances[i] = dims[i].db->accounts[cursor[i]].balance;
    Fixed s = score(alphas, balances);
    ++result.tuples_examined;
    if (!result.best || s >= result.best->score) {
      AnswerTuple answer;
      answer.score = s;
      answer.accounts.reserve(k);
      for (size_t idx : by_currency) {
        const AccountBalance& acct = dims[idx].db->accounts[cursor[idx]];
        answer.accounts.push_back({dims[idx].currency_id, acct.address, acct.balance});
      }
      if (!result.best || answer_precedes(answer, *result.best)) result.best = std::move(answer);
    }
    size_t i = k;
    while (i > 0) {
      if (++cursor[i - 1] < dims[i - 1].db->accounts.size()) break;
      cursor[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return result;
}

}  // namespace portfind
