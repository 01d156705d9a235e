#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "uasforge/contract.hpp"

namespace uasforge::detail {

enum class ScalarKind { integer, unsigned16, boolean, floating };

std::vector<const ContractAnnex *> contracts_of(const PackageSet &packages, const ComponentInstance &c);
std::optional<ScalarKind> scalar_kind(const PackageSet &packages, const ResolvedClassifier &rc);

void collect_vars(const Expr &e, std::set<int> &out);
void split_conjuncts(const Expr &e, std::vector<Expr> &out);

/// Evaluates a resolved expression. `next` supplies values for next-step
/// variable copies and may be null when none occur.
std::int64_t eval(const Expr &e, const std::int64_t *cur, const std::int64_t *next = nullptr);

struct Interval {
  std::optional<std::int64_t> lo, hi; // nullopt is unbounded on that side
  bool empty = false;
  static Interval bottom() { return Interval{std::nullopt, std::nullopt, true}; }
  bool finite() const { return !empty && lo && hi; }
  bool operator==(const Interval &) const = default;
};

Interval interval_of(const Expr &e, const std::vector<Interval> &vars);
/// Over-approximation of the values each variable takes on any trace.
std::vector<Interval> variable_intervals(const TransitionSystem &ts);

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  // SMT-LIB div: the remainder is always non-negative.
  std::int64_t q = a / b;
  std::int64_t r = a % b;
  if (r < 0)
    q += b > 0 ? -1 : 1;
  return q;
}

} // namespace uasforge::detail
