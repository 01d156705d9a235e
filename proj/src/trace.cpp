#include <set>
#include <sstream>

#include "contract_detail.hpp"

namespace uasforge {

namespace {

std::string relative(const std::string &path, const std::string &base) {
  if (path.size() > base.size() && path.compare(0, base.size(), base) == 0 && path[base.size()] == '.')
    return path.substr(base.size() + 1);
  return path;
}

bool asserted_by_owner(const TransitionSystem &ts, int var) {
  const auto *f = ts.variables[var].feature;
  if (!f || !f->owner)
    return false;
  for (const auto &c : ts.constraints) {
    if (c.kind != ConstraintKind::assertion || c.component_path != f->owner->path)
      continue;
    std::set<int> used;
    detail::collect_vars(c.expr, used);
    if (used.count(var))
      return true;
  }
  return false;
}

int source_of(const Variable &v) {
  const Expr &e = v.kind == VarKind::combinational ? v.definition : v.update;
  return e.op == ExprOp::var ? e.var : -1;
}

/// The component that produces a connection-driven value: the first one up
/// the chain whose assertions constrain it, else the chain's origin.
std::string producer(const TransitionSystem &ts, int var) {
  int cur = source_of(ts.variables[var]);
  int last = cur;
  std::set<int> seen;
  while (cur >= 0 && seen.insert(cur).second) {
    if (asserted_by_owner(ts, cur))
      return ts.variables[cur].feature->owner->path;
    last = cur;
    if (!ts.variables[cur].driver)
      break;
    cur = source_of(ts.variables[cur]);
  }
  if (last >= 0 && ts.variables[last].feature && ts.variables[last].feature->owner)
    return ts.variables[last].feature->owner->path;
  return {};
}

} // namespace

std::string TraceLine::text() const {
  std::string out = label + " = " + (is_bool ? (value ? "true" : "false") : std::to_string(value));
  if (!driven_by.empty())
    out += " (driven by " + driven_by + ")";
  return out;
}

std::string AnnotatedTrace::text() const {
  std::ostringstream out;
  out << "counterexample for " << obligation << " (" << steps.size() << (steps.size() == 1 ? " step" : " steps")
      << ")\n";
  for (std::size_t t = 0; t < steps.size(); ++t) {
    out << "  step " << t << ":\n";
    for (const auto &l : steps[t])
      out << "    " << l.text() << "\n";
  }
  return out.str();
}

AnnotatedTrace trace_counterexample(const CounterExample &cex, const TransitionSystem &ts,
                                    const InstanceModel & /*model*/, bool relevant_only) {
  AnnotatedTrace tr;
  tr.obligation = cex.obligation;
  std::vector<int> vars;
  if (relevant_only) {
    if (const auto *ob = ts.find_obligation(cex.obligation))
      for (int v : cone_of_influence(ts, *ob))
        if (ts.variables[v].feature)
          vars.push_back(v);
  } else {
    for (std::size_t i = 0; i < ts.variables.size(); ++i)
      vars.push_back(static_cast<int>(i));
  }

  std::vector<TraceLine> templ;
  for (int i : vars) {
    const auto &v = ts.variables[i];
    TraceLine line;
    line.path = v.path;
    line.is_bool = v.is_bool;
    if (v.driver) {
      line.label = v.driver->name + (v.field_path.empty() ? "" : "." + v.field_path);
      auto who = producer(ts, i);
      if (!who.empty())
        line.driven_by = relative(who, v.driver->owner->path);
    } else {
      line.label = v.path;
      if (v.feature && v.feature->owner && v.feature->decl &&
          v.feature->decl->direction != Direction::in)
        line.driven_by = v.feature->owner->path;
    }
    templ.push_back(std::move(line));
  }
  for (std::size_t t = 0; t < cex.values.size(); ++t) {
    auto lines = templ;
    for (std::size_t j = 0; j < vars.size(); ++j)
      lines[j].value = cex.values[t][vars[j]];
    tr.steps.push_back(std::move(lines));
  }
  return tr;
}

} // namespace uasforge
