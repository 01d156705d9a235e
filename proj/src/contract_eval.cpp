#include <algorithm>

#include "contract_detail.hpp"

namespace uasforge::detail {

std::int64_t eval(const Expr &e, const std::int64_t *cur, const std::int64_t *next) {
  switch (e.op) {
  case ExprOp::const_int:
  case ExprOp::const_bool:
    return e.value;
  case ExprOp::var:
    return e.next ? next[e.var] : cur[e.var];
  case ExprOp::add:
    return eval(e.args[0], cur, next) + eval(e.args[1], cur, next);
  case ExprOp::sub:
    return eval(e.args[0], cur, next) - eval(e.args[1], cur, next);
  case ExprOp::mul:
    return eval(e.args[0], cur, next) * eval(e.args[1], cur, next);
  case ExprOp::div:
    return floor_div(eval(e.args[0], cur, next), eval(e.args[1], cur, next));
  case ExprOp::neg:
    return -eval(e.args[0], cur, next);
  case ExprOp::eq:
    return eval(e.args[0], cur, next) == eval(e.args[1], cur, next);
  case ExprOp::ne:
    return eval(e.args[0], cur, next) != eval(e.args[1], cur, next);
  case ExprOp::lt:
    return eval(e.args[0], cur, next) < eval(e.args[1], cur, next);
  case ExprOp::le:
    return eval(e.args[0], cur, next) <= eval(e.args[1], cur, next);
  case ExprOp::gt:
    return eval(e.args[0], cur, next) > eval(e.args[1], cur, next);
  case ExprOp::ge:
    return eval(e.args[0], cur, next) >= eval(e.args[1], cur, next);
  case ExprOp::and_:
    return eval(e.args[0], cur, next) && eval(e.args[1], cur, next);
  case ExprOp::or_:
    return eval(e.args[0], cur, next) || eval(e.args[1], cur, next);
  case ExprOp::implies:
    return !eval(e.args[0], cur, next) || eval(e.args[1], cur, next);
  case ExprOp::not_:
    return !eval(e.args[0], cur, next);
  case ExprOp::ite:
    return eval(e.args[0], cur, next) ? eval(e.args[1], cur, next) : eval(e.args[2], cur, next);
  case ExprOp::port_ref:
  case ExprOp::prev:
    break;
  }
  return 0;
}

namespace {

Interval hull(const Interval &a, const Interval &b) {
  if (a.empty)
    return b;
  if (b.empty)
    return a;
  Interval r;
  r.lo = (a.lo && b.lo) ? std::optional(std::min(*a.lo, *b.lo)) : std::nullopt;
  r.hi = (a.hi && b.hi) ? std::optional(std::max(*a.hi, *b.hi)) : std::nullopt;
  return r;
}

Interval meet(const Interval &a, std::optional<std::int64_t> lo, std::optional<std::int64_t> hi) {
  if (a.empty)
    return a;
  Interval r = a;
  if (lo && (!r.lo || *r.lo < *lo))
    r.lo = lo;
  if (hi && (!r.hi || *r.hi > *hi))
    r.hi = hi;
  return r;
}

constexpr std::int64_t kLimit = std::int64_t(1) << 40;

std::optional<std::int64_t> clamp(std::optional<std::int64_t> v) {
  if (v && (*v > kLimit || *v < -kLimit))
    return std::nullopt;
  return v;
}

} // namespace

Interval interval_of(const Expr &e, const std::vector<Interval> &vars) {
  auto bool_iv = [] {
    Interval r;
    r.lo = 0;
    r.hi = 1;
    return r;
  };
  switch (e.op) {
  case ExprOp::const_int:
  case ExprOp::const_bool: {
    Interval r;
    r.lo = r.hi = e.value;
    return r;
  }
  case ExprOp::var:
    return vars[e.var];
  case ExprOp::add:
  case ExprOp::sub: {
    auto a = interval_of(e.args[0], vars);
    auto b = interval_of(e.args[1], vars);
    if (a.empty || b.empty)
      return Interval::bottom();
    if (e.op == ExprOp::sub)
      b = Interval{b.hi ? std::optional(-*b.hi) : std::nullopt, b.lo ? std::optional(-*b.lo) : std::nullopt, false};
    Interval r;
    r.lo = clamp((a.lo && b.lo) ? std::optional(*a.lo + *b.lo) : std::nullopt);
    r.hi = clamp((a.hi && b.hi) ? std::optional(*a.hi + *b.hi) : std::nullopt);
    return r;
  }
  case ExprOp::neg: {
    auto a = interval_of(e.args[0], vars);
    if (a.empty)
      return a;
    return Interval{a.hi ? std::optional(-*a.hi) : std::nullopt, a.lo ? std::optional(-*a.lo) : std::nullopt, false};
  }
  case ExprOp::mul:
  case ExprOp::div: {
    auto a = interval_of(e.args[0], vars);
    auto b = interval_of(e.args[1], vars);
    if (a.empty || b.empty)
      return Interval::bottom();
    if (!a.lo || !a.hi || !b.lo || !b.hi)
      return Interval{};
    std::int64_t c[4];
    if (e.op == ExprOp::mul) {
      c[0] = *a.lo * *b.lo, c[1] = *a.lo * *b.hi, c[2] = *a.hi * *b.lo, c[3] = *a.hi * *b.hi;
    } else {
      if (*b.lo != *b.hi || *b.lo == 0)
        return Interval{};
      c[0] = c[1] = floor_div(*a.lo, *b.lo);
      c[2] = c[3] = floor_div(*a.hi, *b.lo);
    }
    Interval r;
    r.lo = clamp(*std::min_element(c, c + 4));
    r.hi = clamp(*std::max_element(c, c + 4));
    return r;
  }
  case ExprOp::ite: {
    auto a = interval_of(e.args[1], vars);
    auto b = interval_of(e.args[2], vars);
    return hull(a, b);
  }
  default:
    return bool_iv();
  }
}

std::vector<Interval> variable_intervals(const TransitionSystem &ts) {
  const std::size_t n = ts.variables.size();
  std::vector<Interval> iv(n);
  auto declared = [&](const Variable &v) {
    Interval r;
    if (v.is_bool) {
      r.lo = 0;
      r.hi = 1;
    } else {
      r.lo = v.low;
      r.hi = v.high;
    }
    return r;
  };
  for (std::size_t i = 0; i < n; ++i)
    iv[i] = ts.variables[i].kind == VarKind::stateful ? Interval::bottom() : declared(ts.variables[i]);

  auto recompute_combinational = [&] {
    // Definitions form a DAG; a few sweeps settle chains of any practical depth.
    for (std::size_t sweep = 0; sweep < n + 1; ++sweep) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const auto &v = ts.variables[i];
        if (v.kind != VarKind::combinational)
          continue;
        auto d = declared(v);
        auto r = meet(interval_of(v.definition, iv), d.lo, d.hi);
        if (!(r == iv[i])) {
          iv[i] = r;
          changed = true;
        }
      }
      if (!changed)
        break;
    }
  };

  for (int round = 0; round < 200; ++round) {
    recompute_combinational();
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto &v = ts.variables[i];
      if (v.kind != VarKind::stateful)
        continue;
      auto d = declared(v);
      auto r = meet(hull(iv[i], hull(interval_of(v.init, iv), interval_of(v.update, iv))), d.lo, d.hi);
      if (!(r == iv[i])) {
        if (round >= 20 && !iv[i].empty) {
          // Widen the moving bound.
          if (r.lo != iv[i].lo)
            r.lo = d.lo;
          if (r.hi != iv[i].hi)
            r.hi = d.hi;
        }
        iv[i] = r;
        changed = true;
      }
    }
    if (!changed)
      break;
  }
  return iv;
}

} // namespace uasforge::detail
