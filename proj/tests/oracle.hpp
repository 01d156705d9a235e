#pragma once

// Evaluators written independently of the engine, used to cross-check
// verdicts, traces and paths.

#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "uasforge/claims.hpp"
#include "uasforge/contract.hpp"

namespace oracle {

using uasforge::Expr;
using uasforge::ExprOp;

using Row = std::vector<std::int64_t>;

inline std::int64_t floordiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

/// `cur` is the step being evaluated; `nxt` backs `next` references.
inline std::int64_t value(const Expr &e, const Row &cur, const Row *nxt = nullptr) {
  auto a = [&](int i) { return value(e.args.at(i), cur, nxt); };
  switch (e.op) {
  case ExprOp::const_int:
  case ExprOp::const_bool:
    return e.value;
  case ExprOp::var:
    if (e.next) {
      if (!nxt)
        throw std::logic_error("next-state reference without a next row");
      return nxt->at(e.var);
    }
    return cur.at(e.var);
  case ExprOp::add: return a(0) + a(1);
  case ExprOp::sub: return a(0) - a(1);
  case ExprOp::mul: return a(0) * a(1);
  case ExprOp::div: return floordiv(a(0), a(1));
  case ExprOp::neg: return -a(0);
  case ExprOp::eq: return a(0) == a(1);
  case ExprOp::ne: return a(0) != a(1);
  case ExprOp::lt: return a(0) < a(1);
  case ExprOp::le: return a(0) <= a(1);
  case ExprOp::gt: return a(0) > a(1);
  case ExprOp::ge: return a(0) >= a(1);
  case ExprOp::and_: return a(0) != 0 && a(1) != 0;
  case ExprOp::or_: return a(0) != 0 || a(1) != 0;
  case ExprOp::not_: return a(0) == 0;
  case ExprOp::implies: return a(0) == 0 || a(1) != 0;
  case ExprOp::ite: return a(0) != 0 ? a(1) : a(2);
  default:
    throw std::logic_error("expression not compiled");
  }
}

struct Replay {
  bool domains = true;     // every value inside its declared domain
  bool definitions = true; // combinational variables match their definitions
  bool init = true;        // stateful variables start at init
  bool trans = true;       // stateful variables follow update
  bool context = true;     // obligation context holds at every step
  bool violated = false;   // obligation false at the final step
  std::string why;

  bool consistent() const { return domains && definitions && init && trans && context; }
};

inline Replay replay(const uasforge::TransitionSystem &ts, const uasforge::CounterExample &cex) {
  Replay r;
  const auto *ob = ts.find_obligation(cex.obligation);
  if (!ob || cex.values.empty()) {
    r.why = "no obligation or empty trace";
    r.domains = false;
    return r;
  }
  auto fail = [&](bool &flag, const std::string &what) {
    if (flag)
      r.why += what + "; ";
    flag = false;
  };
  for (std::size_t t = 0; t < cex.values.size(); ++t) {
    const Row &row = cex.values[t];
    for (std::size_t i = 0; i < ts.variables.size(); ++i) {
      const auto &v = ts.variables[i];
      const auto x = row.at(i);
      if (v.is_bool ? (x != 0 && x != 1) : ((v.low && x < *v.low) || (v.high && x > *v.high)))
        fail(r.domains, "domain " + v.path);
      if (v.kind == uasforge::VarKind::combinational && value(v.definition, row) != x)
        fail(r.definitions, "definition " + v.path);
      if (v.kind == uasforge::VarKind::stateful) {
        if (t == 0 && value(v.init, row) != x)
          fail(r.init, "init " + v.path);
        if (t > 0 && value(v.update, cex.values[t - 1], &row) != x)
          fail(r.trans, "update " + v.path);
      }
    }
    for (int c : ob->context)
      if (!value(ts.constraints.at(c).expr, row))
        fail(r.context, "constraint " + ts.constraints.at(c).name);
  }
  r.violated = value(ob->property, cex.values.back()) == 0;
  return r;
}

/// Breadth-first reachability over the instance connection list.
inline bool reaches(const uasforge::ConnectionGraph &g, const std::string &from, const std::string &to) {
  int s = g.index_of(from), d = g.index_of(to);
  if (s < 0 || d < 0)
    return false;
  std::set<int> seen{s};
  std::queue<int> q;
  q.push(s);
  while (!q.empty()) {
    int n = q.front();
    q.pop();
    if (n == d)
      return true;
    for (int m = 0; m < static_cast<int>(g.nodes.size()); ++m)
      if (g.has_edge(n, m) && seen.insert(m).second)
        q.push(m);
  }
  return false;
}

} // namespace oracle
