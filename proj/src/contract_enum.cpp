#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "contract_detail.hpp"
#include "uasforge/error.hpp"

namespace uasforge {

namespace {

using detail::eval;

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Split {
  std::vector<Expr> constraints;
  std::vector<Expr> props;
};

Split split_obligation(const TransitionSystem &ts, const Obligation &ob) {
  Split s;
  for (int ci : ob.context)
    detail::split_conjuncts(ts.constraints[ci].expr, s.constraints);
  detail::split_conjuncts(ob.property, s.props);
  return s;
}

void unite_all(Dsu &dsu, const std::set<int> &vars) {
  if (vars.empty())
    return;
  int first = *vars.begin();
  for (int v : vars)
    dsu.unite(first, v);
}

Dsu coupling(const TransitionSystem &ts, const Split &s) {
  Dsu dsu(ts.variables.size());
  for (std::size_t i = 0; i < ts.variables.size(); ++i) {
    const auto &v = ts.variables[i];
    std::set<int> deps{static_cast<int>(i)};
    if (v.kind == VarKind::combinational)
      detail::collect_vars(v.definition, deps);
    if (v.kind == VarKind::stateful) {
      detail::collect_vars(v.init, deps);
      detail::collect_vars(v.update, deps);
    }
    unite_all(dsu, deps);
  }
  for (const auto *list : {&s.constraints, &s.props})
    for (const auto &e : *list) {
      std::set<int> vars;
      detail::collect_vars(e, vars);
      unite_all(dsu, vars);
    }
  return dsu;
}

using Values = std::vector<std::int64_t>; // indexed like Group::vars

struct Group {
  std::vector<int> vars;
  std::vector<int> inputs0, inputsT;     // enumerated at step 0 / later steps
  std::vector<int> computed0, computedT; // evaluation order
  std::vector<int> stateful;             // from the previous step when t > 0
  std::vector<const Expr *> constraints;
  std::vector<const Expr *> props;
  std::vector<int> memory; // positions in `vars` read by update expressions
  bool trivial = true;     // nothing restricts the values
};

struct Layer {
  std::vector<Values> nodes;
  std::vector<int> parent;
};

struct Bfs {
  std::vector<Layer> layers; // layers[d]: step-d assignments with the property held through d
  std::map<int, std::pair<Values, int>> violations; // first violating assignment per depth
  int feasible_len = 0; // longest trace found whose property held before its last step
};

class Search {
public:
  Search(const TransitionSystem &ts, const Obligation &ob, bool induction, std::uint64_t budget)
      : ts_(ts), induction_(induction), budget_(budget), split_(split_obligation(ts, ob)) {
    build_groups();
  }

  std::size_t group_count() const { return groups_.size(); }
  bool has_props(std::size_t g) const { return !groups_[g].props.empty(); }

  Bfs bfs(std::size_t gi, int max_depth, bool stop_first) {
    const Group &g = groups_[gi];
    Bfs out;
    for (int d = 0; d <= max_depth; ++d) {
      Layer layer;
      std::set<Values> seen;
      bool stop = false;
      auto visit = [&](int parent, const Values &vals, const std::int64_t *cur) {
        out.feasible_len = d + 1;
        bool holds = std::all_of(g.props.begin(), g.props.end(), [&](const Expr *p) { return eval(*p, cur) != 0; });
        if (!holds) {
          out.violations.try_emplace(d, vals, parent);
          if (stop_first) {
            stop = true;
            return false;
          }
          return true;
        }
        Values key;
        for (int m : g.memory)
          key.push_back(vals[m]);
        if (seen.insert(key).second) {
          layer.nodes.push_back(vals);
          layer.parent.push_back(parent);
        }
        return true;
      };
      if (d == 0) {
        expand(g, 0, nullptr, [&](const Values &v, const std::int64_t *cur) { return visit(-1, v, cur); });
      } else {
        const Layer &prev = out.layers.back();
        for (std::size_t i = 0; i < prev.nodes.size() && !stop; ++i)
          expand(g, d, &prev.nodes[i],
                 [&](const Values &v, const std::int64_t *cur) { return visit(static_cast<int>(i), v, cur); });
      }
      out.layers.push_back(std::move(layer));
      if (stop || out.layers.back().nodes.empty())
        break;
    }
    return out;
  }

  /// Any trace of `len` steps for a group; props must hold before the last step.
  std::optional<std::vector<Values>> fill(std::size_t gi, int len) {
    const Group &g = groups_[gi];
    std::vector<Values> trace(len);
    std::function<bool(int, const Values *)> dfs = [&](int t, const Values *prev) {
      bool found = false;
      expand(g, t, prev, [&](const Values &vals, const std::int64_t *cur) {
        if (t + 1 < len &&
            !std::all_of(g.props.begin(), g.props.end(), [&](const Expr *p) { return eval(*p, cur) != 0; }))
          return true;
        trace[t] = vals;
        if (t + 1 == len || dfs(t + 1, &trace[t])) {
          found = true;
          return false;
        }
        return true;
      });
      return found;
    };
    if (len == 0 || dfs(0, nullptr))
      return trace;
    return std::nullopt;
  }

  static std::vector<Values> path(const Bfs &b, int depth, int index) {
    std::vector<Values> out(depth + 1);
    for (int d = depth; d >= 0; --d) {
      out[d] = b.layers[d].nodes[index];
      index = b.layers[d].parent[index];
    }
    return out;
  }

  static std::vector<Values> violation_path(const Bfs &b, int depth) {
    const auto &[vals, parent] = b.violations.at(depth);
    std::vector<Values> out = depth > 0 ? path(b, depth - 1, parent) : std::vector<Values>{};
    out.push_back(vals);
    return out;
  }

  void place(std::size_t gi, const std::vector<Values> &trace, CounterExample &cex) const {
    const Group &g = groups_[gi];
    for (std::size_t t = 0; t < trace.size(); ++t)
      for (std::size_t i = 0; i < g.vars.size(); ++i)
        cex.values[t][g.vars[i]] = trace[t][i];
  }

private:
  void build_groups() {
    Dsu dsu = coupling(ts_, split_);
    std::map<int, std::size_t> by_root;
    auto group_of_root = [&](int root) {
      auto [it, inserted] = by_root.try_emplace(root, groups_.size());
      if (inserted)
        groups_.emplace_back();
      return it->second;
    };
    for (std::size_t i = 0; i < ts_.variables.size(); ++i)
      groups_[group_of_root(dsu.find(static_cast<int>(i)))].vars.push_back(static_cast<int>(i));

    std::optional<std::size_t> constant_group;
    auto group_of_expr = [&](const Expr &e) -> std::size_t {
      std::set<int> vars;
      detail::collect_vars(e, vars);
      if (vars.empty()) {
        if (!constant_group) {
          constant_group = groups_.size();
          groups_.emplace_back();
        }
        return *constant_group;
      }
      return by_root.at(dsu.find(*vars.begin()));
    };
    for (const auto &e : split_.constraints)
      groups_[group_of_expr(e)].constraints.push_back(&e);
    for (const auto &e : split_.props)
      groups_[group_of_expr(e)].props.push_back(&e);

    for (auto &g : groups_) {
      std::map<int, int> pos;
      for (std::size_t i = 0; i < g.vars.size(); ++i)
        pos[g.vars[i]] = static_cast<int>(i);
      std::set<int> mem;
      for (int v : g.vars) {
        const auto &var = ts_.variables[v];
        switch (var.kind) {
        case VarKind::input:
          g.inputs0.push_back(v);
          g.inputsT.push_back(v);
          break;
        case VarKind::combinational:
          break;
        case VarKind::stateful:
          g.stateful.push_back(v);
          if (induction_)
            g.inputs0.push_back(v);
          detail::collect_vars(var.update, mem);
          break;
        }
        if (var.kind != VarKind::input && !var.is_bool && (var.low || var.high))
          g.trivial = false;
        if (induction_ && var.kind == VarKind::stateful)
          g.trivial = false;
      }
      for (int m : mem)
        g.memory.push_back(pos.at(m));
      if (!g.constraints.empty() || !g.props.empty())
        g.trivial = false;
      g.computedT = order(g, false);
      g.computed0 = order(g, !induction_);
    }
  }

  std::vector<int> order(const Group &g, bool with_init) const {
    std::vector<int> nodes;
    for (int v : g.vars) {
      auto k = ts_.variables[v].kind;
      if (k == VarKind::combinational || (with_init && k == VarKind::stateful))
        nodes.push_back(v);
    }
    std::set<int> in_set(nodes.begin(), nodes.end());
    std::map<int, int> state; // 1 visiting, 2 done
    std::vector<int> out;
    std::function<void(int)> visit = [&](int v) {
      if (state[v] == 2)
        return;
      if (state[v] == 1)
        throw Error("CombinationalCycle", "cyclic definition through '" + ts_.variables[v].path + "'");
      state[v] = 1;
      const auto &var = ts_.variables[v];
      std::set<int> deps;
      detail::collect_vars(var.kind == VarKind::combinational ? var.definition : var.init, deps);
      for (int d : deps)
        if (in_set.count(d))
          visit(d);
      state[v] = 2;
      out.push_back(v);
    };
    for (int v : nodes)
      visit(v);
    return out;
  }

  std::pair<std::int64_t, std::int64_t> domain(const Group &g, int v) const {
    const auto &var = ts_.variables[v];
    if (var.is_bool)
      return {0, 1};
    if (var.low && var.high)
      return {*var.low, *var.high};
    if (g.trivial) {
      std::int64_t d = var.low ? *var.low : var.high ? *var.high : 0;
      return {d, d};
    }
    throw Error("UnboundedVariable", "variable '" + var.path + "' has no finite domain; declare Data::Range");
  }

  bool in_range(int v, std::int64_t x) const {
    const auto &var = ts_.variables[v];
    if (var.is_bool)
      return true;
    return (!var.low || x >= *var.low) && (!var.high || x <= *var.high);
  }

  template <class F> void expand(const Group &g, int t, const Values *prev_vals, F &&visit) {
    const std::size_t n = ts_.variables.size();
    std::vector<std::int64_t> cur(n, 0), prev(n, 0);
    if (prev_vals)
      for (std::size_t i = 0; i < g.vars.size(); ++i)
        prev[g.vars[i]] = (*prev_vals)[i];
    const auto &inputs = t == 0 ? g.inputs0 : g.inputsT;
    const auto &computed = t == 0 ? g.computed0 : g.computedT;

    if (t > 0) {
      for (int s : g.stateful) {
        cur[s] = eval(ts_.variables[s].update, prev.data());
        if (!in_range(s, cur[s]))
          return;
      }
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> dom;
    double combos = 1;
    for (int v : inputs) {
      dom.push_back(domain(g, v));
      combos *= double(dom.back().second - dom.back().first + 1);
    }
    if (evals_ + combos > double(budget_))
      throw Error("BudgetExceeded", "enumeration budget of " + std::to_string(budget_) + " evaluations exceeded");

    std::vector<std::int64_t> val(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i)
      val[i] = dom[i].first;
    Values snapshot(g.vars.size());
    while (true) {
      ++evals_;
      for (std::size_t i = 0; i < inputs.size(); ++i)
        cur[inputs[i]] = val[i];
      bool ok = true;
      for (int v : computed) {
        const auto &var = ts_.variables[v];
        cur[v] = eval(var.kind == VarKind::combinational ? var.definition : var.init, cur.data());
        if (!in_range(v, cur[v])) {
          ok = false;
          break;
        }
      }
      if (ok)
        for (const Expr *c : g.constraints)
          if (!eval(*c, cur.data())) {
            ok = false;
            break;
          }
      if (ok) {
        for (std::size_t i = 0; i < g.vars.size(); ++i)
          snapshot[i] = cur[g.vars[i]];
        if (!visit(static_cast<const Values &>(snapshot), static_cast<const std::int64_t *>(cur.data())))
          return;
      }
      std::size_t i = 0;
      for (; i < inputs.size(); ++i) {
        if (val[i] < dom[i].second) {
          ++val[i];
          break;
        }
        val[i] = dom[i].first;
      }
      if (i == inputs.size())
        return;
    }
  }

  const TransitionSystem &ts_;
  bool induction_;
  std::uint64_t budget_;
  std::uint64_t evals_ = 0;
  Split split_;
  std::vector<Group> groups_;
};

const Obligation &require_obligation(const TransitionSystem &ts, std::string_view name) {
  const auto *ob = ts.find_obligation(name);
  if (!ob)
    throw Error("UnknownObligation", "no obligation named '" + std::string(name) + "'");
  return *ob;
}

struct Violation {
  int depth = -1;
  std::optional<CounterExample> cex;
};

/// A violation of the property at exactly `depth` (or the first one when
/// `first` is set), assembled across independent groups.
class Analysis {
public:
  Analysis(const TransitionSystem &ts, const Obligation &ob, bool induction, int max_depth, bool first,
           std::uint64_t budget)
      : ts_(ts), ob_(ob), search_(ts, ob, induction, budget) {
    for (std::size_t g = 0; g < search_.group_count(); ++g)
      if (search_.has_props(g))
        bfs_.emplace(g, search_.bfs(g, max_depth, first));
  }

  std::optional<int> first_violation() const {
    std::optional<int> best;
    for (const auto &[g, b] : bfs_)
      if (!b.violations.empty()) {
        int d = b.violations.begin()->first;
        if (!best || d < *best)
          best = d;
      }
    return best;
  }

  std::optional<CounterExample> violation_at(int depth) {
    std::optional<std::size_t> culprit;
    for (const auto &[g, b] : bfs_)
      if (b.violations.count(depth)) {
        culprit = g;
        break;
      }
    if (!culprit)
      return std::nullopt;
    for (const auto &[g, b] : bfs_)
      if (b.feasible_len < depth + 1)
        return std::nullopt;
    CounterExample cex;
    cex.obligation = ob_.name;
    cex.values.assign(depth + 1, std::vector<std::int64_t>(ts_.variables.size(), 0));
    for (std::size_t g = 0; g < search_.group_count(); ++g) {
      std::vector<Values> trace;
      auto it = bfs_.find(g);
      if (g == *culprit) {
        trace = Search::violation_path(it->second, depth);
      } else if (it != bfs_.end()) {
        const Bfs &b = it->second;
        if (b.violations.count(depth))
          trace = Search::violation_path(b, depth);
        else
          trace = Search::path(b, depth, 0);
      } else {
        auto filled = search_.fill(g, depth + 1);
        if (!filled)
          return std::nullopt;
        trace = std::move(*filled);
      }
      search_.place(g, trace, cex);
    }
    return cex;
  }

private:
  const TransitionSystem &ts_;
  const Obligation &ob_;
  Search search_;
  std::map<std::size_t, Bfs> bfs_;
};

Verdict make(VerdictStatus s, int k) {
  Verdict v;
  v.status = s;
  v.k = k;
  v.backend = "enumerate";
  return v;
}

} // namespace

Verdict enumerate_check(const TransitionSystem &ts, std::string_view obligation, int k, std::uint64_t budget) {
  const Obligation &ob = require_obligation(ts, obligation);
  if (k <= 0)
    return make(VerdictStatus::valid_bounded, k);
  Analysis a(ts, ob, false, k - 1, true, budget);
  if (auto d = a.first_violation())
    if (auto cex = a.violation_at(*d)) {
      auto v = make(VerdictStatus::falsified, k);
      v.cex = std::move(cex);
      return v;
    }
  return make(VerdictStatus::valid_bounded, k);
}

Verdict enumerate_kinduction(const TransitionSystem &ts, std::string_view obligation, int k,
                             std::uint64_t budget) {
  const Obligation &ob = require_obligation(ts, obligation);
  Analysis base(ts, ob, false, k - 1, true, budget);
  std::optional<int> first;
  std::optional<CounterExample> base_cex;
  if (auto d = base.first_violation())
    if ((base_cex = base.violation_at(*d)))
      first = *d;

  std::optional<Analysis> step;
  std::string unbounded;
  try {
    step.emplace(ts, ob, true, k, false, budget);
  } catch (const Error &e) {
    if (e.code() != "UnboundedVariable")
      throw;
    unbounded = e.what();
  }
  for (int j = 1; j <= k; ++j) {
    if (first && *first == j - 1) {
      auto v = make(VerdictStatus::falsified, j);
      v.cex = std::move(base_cex);
      return v;
    }
    if (step && !step->violation_at(j))
      return make(VerdictStatus::valid_inductive, j);
  }
  auto v = make(VerdictStatus::unknown, k);
  v.reason = unbounded.empty() ? "not k-inductive for k <= " + std::to_string(k)
                               : "induction needs a finite state space: " + unbounded;
  return v;
}

std::vector<int> cone_of_influence(const TransitionSystem &ts, const Obligation &ob) {
  Split s = split_obligation(ts, ob);
  Dsu dsu = coupling(ts, s);
  std::set<int> roots;
  for (const auto &p : s.props) {
    std::set<int> vars;
    detail::collect_vars(p, vars);
    for (int v : vars)
      roots.insert(dsu.find(v));
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < ts.variables.size(); ++i)
    if (roots.count(dsu.find(static_cast<int>(i))))
      out.push_back(static_cast<int>(i));
  return out;
}

} // namespace uasforge
