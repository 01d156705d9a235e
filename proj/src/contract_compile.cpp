#include <algorithm>
#include <functional>
#include <set>

#include "contract_detail.hpp"
#include "model_detail.hpp"
#include "uasforge/contract.hpp"
#include "uasforge/lexer.hpp"

namespace uasforge {

int TransitionSystem::find_variable(std::string_view path) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].path == path)
      return static_cast<int>(i);
  return -1;
}

const Obligation *TransitionSystem::find_obligation(std::string_view name) const {
  for (const auto &ob : obligations)
    if (ob.name == name)
      return &ob;
  return nullptr;
}

Expr TransitionSystem::init() const {
  std::vector<Expr> parts;
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].kind == VarKind::stateful)
      parts.push_back(Expr::binary(ExprOp::eq, Expr::variable(static_cast<int>(i)), variables[i].init));
  return Expr::conjunction(std::move(parts));
}

Expr TransitionSystem::trans() const {
  std::vector<Expr> parts;
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].kind == VarKind::stateful)
      parts.push_back(Expr::binary(ExprOp::eq, Expr::variable(static_cast<int>(i), true),
                                   variables[i].update));
  return Expr::conjunction(std::move(parts));
}

Expr TransitionSystem::step(const Obligation &ob) const {
  std::vector<Expr> parts;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto &v = variables[i];
    const auto x = Expr::variable(static_cast<int>(i));
    if (!v.is_bool && v.low)
      parts.push_back(Expr::binary(ExprOp::ge, x, Expr::integer(*v.low)));
    if (!v.is_bool && v.high)
      parts.push_back(Expr::binary(ExprOp::le, x, Expr::integer(*v.high)));
    if (v.kind == VarKind::combinational)
      parts.push_back(Expr::binary(ExprOp::eq, x, v.definition));
  }
  for (int c : ob.context)
    parts.push_back(constraints[c].expr);
  return Expr::conjunction(std::move(parts));
}

namespace detail {

std::vector<const ContractAnnex *> contracts_of(const PackageSet &packages, const ComponentInstance &c) {
  std::vector<const ContractAnnex *> out;
  auto add = [&](const std::vector<AnnexClause> &annexes) {
    for (const auto &a : annexes)
      if (a.contract)
        out.push_back(a.contract.get());
  };
  if (auto base = extended_type(packages, c.classifier); base && base->type != c.classifier.type)
    add(base->type->annexes);
  add(c.classifier.type->annexes);
  if (c.classifier.impl)
    add(c.classifier.impl->annexes);
  return out;
}

std::optional<ScalarKind> scalar_kind(const PackageSet &packages, const ResolvedClassifier &rc) {
  for (const auto &c : data_lineage(packages, rc)) {
    if (c.package->name != "Base")
      continue;
    const auto &n = c.type->name;
    if (n == "Integer")
      return ScalarKind::integer;
    if (n == "Unsigned16")
      return ScalarKind::unsigned16;
    if (n == "Boolean")
      return ScalarKind::boolean;
    if (n == "Float")
      return ScalarKind::floating;
  }
  return std::nullopt;
}

void collect_vars(const Expr &e, std::set<int> &out) {
  if (e.op == ExprOp::var)
    out.insert(e.var);
  for (const auto &a : e.args)
    collect_vars(a, out);
}

void split_conjuncts(const Expr &e, std::vector<Expr> &out) {
  if (e.op == ExprOp::and_) {
    for (const auto &a : e.args)
      split_conjuncts(a, out);
    return;
  }
  out.push_back(e);
}

} // namespace detail

namespace {

using detail::ScalarKind;

class Compiler {
public:
  Compiler(const InstanceModel &model, const CompileOptions &options) : model_(model), options_(options) {
    for (const auto &c : model.connections())
      incoming_[c.dest] = &c;
  }

  TransitionSystem run() {
    struct Pending {
      const ComponentInstance *comp;
      ContractKind kind;
      std::string name;
      Expr expr;
    };
    std::vector<Pending> statements;
    for (const auto *c : model_.components()) {
      for (const auto *annex : detail::contracts_of(model_.packages(), *c)) {
        for (const auto &s : annex->asserts)
          statements.push_back({c, ContractKind::assertion, s.name, resolve_bool(s.expr, *c, false, s.name)});
        for (const auto &s : annex->assumes)
          statements.push_back({c, ContractKind::assume, s.name, resolve_bool(s.expr, *c, true, s.name)});
        for (const auto &s : annex->guarantees)
          statements.push_back({c, ContractKind::guarantee, s.name, resolve_bool(s.expr, *c, false, s.name)});
      }
    }

    for (const auto &st : statements) {
      Constraint con;
      con.name = st.comp->path + "." + st.name;
      con.component_path = st.comp->path;
      con.kind = st.kind == ContractKind::assertion ? ConstraintKind::assertion
                 : st.kind == ContractKind::assume  ? ConstraintKind::assumption
                                                    : ConstraintKind::guarantee;
      con.expr = st.expr;
      ts_.constraints.push_back(std::move(con));
    }

    for (std::size_t i = 0; i < statements.size(); ++i) {
      const auto &st = statements[i];
      if (st.kind == ContractKind::guarantee) {
        add_obligation(*st.comp, st.name, ObligationKind::guarantee, ts_.constraints[i].expr, guarantee_context(*st.comp));
      } else if (st.kind == ContractKind::assume && st.comp->parent) {
        add_obligation(*st.comp, st.name, ObligationKind::assumption, ts_.constraints[i].expr,
                       assume_context(*st.comp));
      }
    }

    for (const auto &extra : options_.extras) {
      const auto *comp = model_.component(extra.component_path);
      if (!comp)
        throw Error("NotFound", "no component instance '" + extra.component_path + "'");
      auto parsed = parse_expr(extra.expr);
      if (!parsed.ok())
        throw Error("TypeError", "obligation '" + extra.name + "': " + format_all(parsed.diagnostics));
      auto e = resolve_bool(*parsed.value, *comp, false, extra.name);
      add_obligation(*comp, extra.name, ObligationKind::extra, e, guarantee_context(*comp));
    }

    std::sort(ts_.obligations.begin(), ts_.obligations.end(),
              [](const Obligation &a, const Obligation &b) { return a.name < b.name; });

    // Sound invariant bounds for state variables, used by both backends.
    auto iv = detail::variable_intervals(ts_);
    for (std::size_t i = 0; i < ts_.variables.size(); ++i) {
      auto &v = ts_.variables[i];
      if (v.kind == VarKind::stateful && !v.is_bool && !v.bounded() && iv[i].finite()) {
        v.low = iv[i].lo;
        v.high = iv[i].hi;
      }
    }

    if (options_.require_finite)
      for (const auto &v : ts_.variables)
        if (v.kind == VarKind::input && !v.bounded())
          throw Error("UnboundedVariable", "variable '" + v.path + "' has no declared Data::Range");
    return std::move(ts_);
  }

private:
  static bool within(const std::string &path, const std::string &root) {
    return path.size() > root.size() && path.compare(0, root.size(), root) == 0 && path[root.size()] == '.';
  }

  std::vector<int> guarantee_context(const ComponentInstance &c) const {
    std::vector<int> ctx;
    for (std::size_t i = 0; i < ts_.constraints.size(); ++i) {
      const auto &con = ts_.constraints[i];
      bool take = false;
      switch (con.kind) {
      case ConstraintKind::assertion:
        take = true;
        break;
      case ConstraintKind::assumption:
        take = con.component_path == c.path || within(c.path, con.component_path);
        break;
      case ConstraintKind::guarantee:
        take = within(con.component_path, c.path);
        break;
      }
      if (take)
        ctx.push_back(static_cast<int>(i));
    }
    return ctx;
  }

  std::vector<int> assume_context(const ComponentInstance &c) const {
    const ComponentInstance &p = *c.parent;
    std::vector<int> ctx;
    for (std::size_t i = 0; i < ts_.constraints.size(); ++i) {
      const auto &con = ts_.constraints[i];
      bool take = false;
      switch (con.kind) {
      case ConstraintKind::assertion:
        take = true;
        break;
      case ConstraintKind::assumption:
        take = con.component_path == p.path || within(p.path, con.component_path);
        break;
      case ConstraintKind::guarantee:
        take = within(con.component_path, p.path) && con.component_path != c.path &&
               !within(con.component_path, c.path);
        break;
      }
      if (take)
        ctx.push_back(static_cast<int>(i));
    }
    return ctx;
  }

  void add_obligation(const ComponentInstance &c, const std::string &name, ObligationKind kind, Expr property,
                      std::vector<int> context) {
    Obligation ob;
    ob.name = c.path + "." + name;
    ob.component_path = c.path;
    ob.kind = kind;
    ob.property = std::move(property);
    ob.context = std::move(context);
    if (ts_.find_obligation(ob.name))
      throw Error("TypeError", "duplicate obligation name '" + ob.name + "'");
    ts_.obligations.push_back(std::move(ob));
  }

  [[noreturn]] void type_error(const std::string &where, const Expr &e, std::string_view expected,
                               std::string_view found) const {
    throw Error("TypeError", "in '" + where + "': expected " + std::string(expected) + ", found " +
                                 std::string(found) + " in '" + print_expr(e) + "'");
  }

  Expr resolve_bool(const Expr &e, const ComponentInstance &owner, bool assume_mode, const std::string &name) {
    where_ = owner.path + "." + name;
    auto [r, is_bool] = resolve(e, owner, assume_mode);
    if (!is_bool)
      type_error(where_, e, "bool", "int");
    return r;
  }

  struct Typed {
    Expr e;
    bool is_bool;
  };

  Typed resolve(const Expr &e, const ComponentInstance &owner, bool assume_mode) {
    switch (e.op) {
    case ExprOp::const_int:
      return {e, false};
    case ExprOp::const_bool:
      return {e, true};
    case ExprOp::var:
      return {e, ts_.variables[e.var].is_bool};
    case ExprOp::port_ref: {
      int v = port_variable(e, owner, assume_mode);
      Expr out = Expr::variable(v);
      out.loc = e.loc;
      return {out, ts_.variables[v].is_bool};
    }
    case ExprOp::prev: {
      auto a = resolve(e.args[0], owner, assume_mode);
      auto i = resolve(e.args[1], owner, assume_mode);
      if (a.is_bool != i.is_bool)
        type_error(where_, e, a.is_bool ? "bool initial value" : "int initial value",
                   i.is_bool ? "bool" : "int");
      return {Expr::variable(prev_variable(owner, a, i)), a.is_bool};
    }
    case ExprOp::add:
    case ExprOp::sub:
    case ExprOp::mul:
    case ExprOp::div: {
      auto a = resolve(e.args[0], owner, assume_mode);
      auto b = resolve(e.args[1], owner, assume_mode);
      if (a.is_bool)
        type_error(where_, e.args[0], "int", "bool");
      if (b.is_bool)
        type_error(where_, e.args[1], "int", "bool");
      if (e.op == ExprOp::div && (b.e.op != ExprOp::const_int || b.e.value == 0))
        type_error(where_, e, "nonzero integer constant divisor", "'" + print_expr(e.args[1]) + "'");
      return {Expr::binary(e.op, std::move(a.e), std::move(b.e)), false};
    }
    case ExprOp::neg: {
      auto a = resolve(e.args[0], owner, assume_mode);
      if (a.is_bool)
        type_error(where_, e.args[0], "int", "bool");
      return {Expr::unary(ExprOp::neg, std::move(a.e)), false};
    }
    case ExprOp::eq:
    case ExprOp::ne: {
      auto a = resolve(e.args[0], owner, assume_mode);
      auto b = resolve(e.args[1], owner, assume_mode);
      if (a.is_bool != b.is_bool)
        type_error(where_, e, a.is_bool ? "bool operands" : "int operands", "mixed bool and int");
      return {Expr::binary(e.op, std::move(a.e), std::move(b.e)), true};
    }
    case ExprOp::lt:
    case ExprOp::le:
    case ExprOp::gt:
    case ExprOp::ge: {
      auto a = resolve(e.args[0], owner, assume_mode);
      auto b = resolve(e.args[1], owner, assume_mode);
      if (a.is_bool)
        type_error(where_, e.args[0], "int", "bool");
      if (b.is_bool)
        type_error(where_, e.args[1], "int", "bool");
      return {Expr::binary(e.op, std::move(a.e), std::move(b.e)), true};
    }
    case ExprOp::and_:
    case ExprOp::or_:
    case ExprOp::implies: {
      auto a = resolve(e.args[0], owner, assume_mode);
      auto b = resolve(e.args[1], owner, assume_mode);
      if (!a.is_bool)
        type_error(where_, e.args[0], "bool", "int");
      if (!b.is_bool)
        type_error(where_, e.args[1], "bool", "int");
      return {Expr::binary(e.op, std::move(a.e), std::move(b.e)), true};
    }
    case ExprOp::not_: {
      auto a = resolve(e.args[0], owner, assume_mode);
      if (!a.is_bool)
        type_error(where_, e.args[0], "bool", "int");
      return {Expr::unary(ExprOp::not_, std::move(a.e)), true};
    }
    case ExprOp::ite: {
      auto c = resolve(e.args[0], owner, assume_mode);
      auto a = resolve(e.args[1], owner, assume_mode);
      auto b = resolve(e.args[2], owner, assume_mode);
      if (!c.is_bool)
        type_error(where_, e.args[0], "bool", "int");
      if (a.is_bool != b.is_bool)
        type_error(where_, e, "branches of one type", "mixed bool and int");
      return {Expr::ite(std::move(c.e), std::move(a.e), std::move(b.e)), a.is_bool};
    }
    }
    type_error(where_, e, "expression", "unknown node");
  }

  int prev_variable(const ComponentInstance &owner, const Typed &e, const Typed &init) {
    Expr node = Expr::binary(ExprOp::prev, e.e, init.e);
    for (std::size_t i = 0; i < prev_nodes_.size(); ++i)
      if (prev_nodes_[i].first == node)
        return prev_nodes_[i].second;
    Variable v;
    v.path = owner.path + ".__prev" + std::to_string(prev_nodes_.size());
    v.is_bool = e.is_bool;
    v.kind = VarKind::stateful;
    v.init = init.e;
    v.update = e.e;
    v.owner_path = owner.path;
    ts_.variables.push_back(std::move(v));
    int idx = static_cast<int>(ts_.variables.size() - 1);
    prev_nodes_.emplace_back(std::move(node), idx);
    return idx;
  }

  static std::vector<std::string> split(const std::string &path) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto dot = path.find('.', start);
      out.push_back(path.substr(start, dot - start));
      if (dot == std::string::npos)
        break;
      start = dot + 1;
    }
    return out;
  }

  int port_variable(const Expr &ref, const ComponentInstance &owner, bool assume_mode) {
    auto segs = split(ref.path);
    const ComponentInstance *c = &owner;
    std::size_t i = 0;
    const FeatureInstance *feature = nullptr;
    while (i < segs.size()) {
      if ((feature = c->feature(segs[i]))) {
        ++i;
        break;
      }
      if (assume_mode)
        type_error(where_, ref, "an in port of " + owner.path, "'" + segs[i] + "'");
      const auto *child = c->child(segs[i]);
      if (!child)
        type_error(where_, ref, "a port of " + c->path, "unknown name '" + segs[i] + "'");
      c = child;
      ++i;
    }
    if (!feature)
      type_error(where_, ref, "a port", "component '" + c->path + "'");
    if (!feature->decl->is_port() || feature->decl->variant == FeatureVariant::parameter)
      type_error(where_, ref, "a port", "non-port feature '" + feature->name + "'");
    if (assume_mode && !feature->decl->is_incoming())
      type_error(where_, ref, "an in port of " + owner.path, "out port '" + feature->name + "'");
    std::vector<std::string> fields(segs.begin() + static_cast<long>(i), segs.end());
    std::string field_path;
    for (const auto &f : fields)
      field_path += (field_path.empty() ? "" : ".") + f;
    return variable_for(*feature, field_path, &ref);
  }

  struct Leaf {
    bool is_bool = false;
    std::optional<std::int64_t> low, high;
  };

  Leaf leaf_type(const FeatureInstance &feature, const std::string &field_path, const Expr *ref) {
    const auto &packages = model_.packages();
    auto fail = [&](const std::string &expected, const std::string &found) -> Leaf {
      if (ref)
        type_error(where_, *ref, expected, found);
      throw Error("TypeError", "'" + feature.path + (field_path.empty() ? "" : "." + field_path) +
                                   "': expected " + expected + ", found " + found);
    };
    if (feature.decl->variant == FeatureVariant::event_port)
      return Leaf{true, {}, {}};
    if (!feature.data_type)
      return fail("a typed data port", "untyped feature '" + feature.name + "'");
    ResolvedClassifier rc = *feature.data_type;
    const Subcomponent *field_decl = nullptr;
    for (const auto &seg : split(field_path)) {
      if (seg.empty())
        break;
      const Subcomponent *found = nullptr;
      for (const auto *f : data_fields(rc))
        if (f->name == seg)
          found = f;
      if (!found)
        return fail("a field of " + rc.qualified_name(), "'" + seg + "'");
      auto next = try_resolve_classifier(packages, found->classifier, rc.package);
      if (!next)
        return fail("a resolvable field classifier", "'" + found->classifier + "'");
      rc = *next;
      field_decl = found;
    }
    if (!data_fields(rc).empty())
      return fail("a scalar", "structured data " + rc.qualified_name());
    auto kind = detail::scalar_kind(packages, rc);
    if (!kind)
      return fail("an integer or boolean classifier", rc.qualified_name());
    if (*kind == ScalarKind::floating)
      return fail("an integer or boolean classifier", "floating-point " + rc.qualified_name());
    Leaf leaf;
    leaf.is_bool = *kind == ScalarKind::boolean;
    if (leaf.is_bool)
      return leaf;
    const PropertyValue *range = field_decl ? find_association(field_decl->properties, "Data::Range") : nullptr;
    std::optional<PropertyValue> from_classifier;
    if (!range) {
      from_classifier = data_property(packages, rc, "Data::Range");
      if (from_classifier)
        range = &*from_classifier;
    }
    if (range && range->as_range()) {
      leaf.low = range->as_range()->low;
      leaf.high = range->as_range()->high;
    } else if (*kind == ScalarKind::unsigned16) {
      leaf.low = 0;
      leaf.high = 65535;
    }
    return leaf;
  }

  std::int64_t initial_value(const FeatureInstance &feature, const std::string &field_path, const Leaf &leaf) {
    if (leaf.is_bool)
      return 0;
    if (feature.data_type) {
      ResolvedClassifier rc = *feature.data_type;
      for (const auto &seg : split(field_path)) {
        if (seg.empty())
          break;
        for (const auto *f : data_fields(rc))
          if (f->name == seg)
            if (auto next = try_resolve_classifier(model_.packages(), f->classifier, rc.package))
              rc = *next;
      }
      if (auto init = data_property(model_.packages(), rc, "Data::Init"); init && init->as_int())
        return init->as_int()->value;
    }
    return leaf.low.value_or(0);
  }

  int variable_for(const FeatureInstance &feature, const std::string &field_path, const Expr *ref) {
    const std::string path = feature.path + (field_path.empty() ? "" : "." + field_path);
    if (auto it = by_path_.find(path); it != by_path_.end()) {
      if (in_progress_.count(it->second))
        throw Error("CombinationalCycle", "instantaneous connection cycle through '" + path + "'");
      return it->second;
    }
    Leaf leaf = leaf_type(feature, field_path, ref);
    Variable v;
    v.path = path;
    v.is_bool = leaf.is_bool;
    v.low = leaf.low;
    v.high = leaf.high;
    v.feature = &feature;
    v.field_path = field_path;
    ts_.variables.push_back(std::move(v));
    const int idx = static_cast<int>(ts_.variables.size() - 1);
    by_path_[path] = idx;

    auto in = incoming_.find(&feature);
    if (in != incoming_.end()) {
      const ConnectionInstance *conn = in->second;
      const bool delayed = [&] {
        const auto *d = find_association(conn->properties, "Comm::Delayed");
        return d && d->as_bool() && *d->as_bool();
      }();
      if (!delayed)
        in_progress_.insert(idx);
      const int src = variable_for(*conn->source, field_path, nullptr);
      in_progress_.erase(idx);
      if (ts_.variables[src].is_bool != leaf.is_bool)
        throw Error("TypeError", "connection '" + conn->path + "' joins bool and int at '" + path + "'");
      auto &var = ts_.variables[idx];
      var.driver = conn;
      if (delayed) {
        var.kind = VarKind::stateful;
        var.update = Expr::variable(src);
        var.init = leaf.is_bool ? Expr::boolean(false) : Expr::integer(initial_value(feature, field_path, leaf));
      } else {
        var.kind = VarKind::combinational;
        var.definition = Expr::variable(src);
      }
    }
    return idx;
  }

  const InstanceModel &model_;
  const CompileOptions &options_;
  TransitionSystem ts_;
  std::map<const FeatureInstance *, const ConnectionInstance *> incoming_;
  std::map<std::string, int> by_path_;
  std::set<int> in_progress_;
  std::vector<std::pair<Expr, int>> prev_nodes_;
  std::string where_;
};

} // namespace

TransitionSystem compile(const InstanceModel &model, const CompileOptions &options) {
  return Compiler(model, options).run();
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
  case VerdictStatus::valid_bounded:
    return "valid_bounded";
  case VerdictStatus::valid_inductive:
    return "valid_inductive";
  case VerdictStatus::falsified:
    return "falsified";
  case VerdictStatus::unknown:
    return "unknown";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view s) {
  if (s == "smt")
    return Backend::smt;
  if (s == "enumerate")
    return Backend::enumerate;
  if (s == "auto")
    return Backend::automatic;
  return std::nullopt;
}

std::map<std::string, std::int64_t> CounterExample::assignments(const TransitionSystem &ts, std::size_t step) const {
  std::map<std::string, std::int64_t> out;
  for (std::size_t i = 0; i < ts.variables.size() && i < values.at(step).size(); ++i)
    out[ts.variables[i].path] = values[step][i];
  return out;
}

} // namespace uasforge
