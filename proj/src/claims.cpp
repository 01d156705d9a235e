#include "uasforge/claims.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "uasforge/error.hpp"
#include "uasforge/lexer.hpp"

namespace uasforge {

std::string_view to_string(ClaimStatus s) { return s == ClaimStatus::proved ? "proved" : "failed"; }

std::string ClaimResult::text(int indent) const {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::string out = pad + "[" + std::string(to_string(status)) + "] " + claim + "(";
  for (std::size_t i = 0; i < args.size(); ++i)
    out += (i ? ", " : "") + args[i];
  out += ")";
  if (!description.empty())
    out += "  -- " + description;
  out += "\n";
  if (!note.empty()) {
    std::istringstream lines(note);
    for (std::string l; std::getline(lines, l);)
      out += pad + "    note: " + l + "\n";
  }
  for (const auto &w : witnesses)
    out += pad + "    witness: " + w + "\n";
  for (const auto &c : children)
    out += c.text(indent + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

ClaimsConfig parse_claims_config(std::string_view json_text) {
  ClaimsConfig cfg;
  try {
    auto j = nlohmann::json::parse(json_text);
    if (!j.is_object())
      throw Error("ConfigError", "claims configuration must be a JSON object");
    if (j.contains("approved_algorithms")) {
      cfg.approved_algorithms.clear();
      for (const auto &a : j.at("approved_algorithms"))
        cfg.approved_algorithms.insert(a.get<std::string>());
    }
    if (j.contains("min_key_bits"))
      cfg.min_key_bits = j.at("min_key_bits").get<std::int64_t>();
    if (j.contains("path_cap"))
      cfg.path_cap = j.at("path_cap").get<std::size_t>();
    if (j.contains("k"))
      cfg.k = j.at("k").get<int>();
  } catch (const nlohmann::json::exception &e) {
    throw Error("ConfigError", std::string("invalid claims configuration: ") + e.what());
  }
  return cfg;
}

ClaimsConfig load_claims_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("ConfigError", "cannot read claims configuration '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_claims_config(ss.str());
}

// ---------------------------------------------------------------------------
// Paths

std::string Path::text() const {
  std::string out;
  for (std::size_t i = 0; i < features.size(); ++i)
    out += (i ? " -> " : "") + features[i]->path;
  return out;
}

std::vector<Path> all_paths(const ConnectionGraph &graph, const std::vector<const FeatureInstance *> &sources,
                            const std::vector<const FeatureInstance *> &sinks, std::size_t cap) {
  std::set<int> starts, ends;
  for (const auto *f : sources)
    if (int i = graph.index_of(f->path); i >= 0)
      starts.insert(i);
  for (const auto *f : sinks)
    if (int i = graph.index_of(f->path); i >= 0)
      ends.insert(i);

  std::vector<Path> out;
  std::vector<int> stack;
  std::vector<char> on_path(graph.nodes.size(), 0);
  std::function<void(int)> walk = [&](int n) {
    stack.push_back(n);
    on_path[n] = 1;
    if (stack.size() > 1 && ends.count(n)) {
      if (out.size() >= cap)
        throw Error("PathBudgetExceeded", "more than " + std::to_string(cap) + " simple paths");
      Path p;
      for (int i : stack)
        p.features.push_back(graph.nodes[i]);
      out.push_back(std::move(p));
    } else {
      for (int s : graph.successors[n])
        if (!on_path[s])
          walk(s);
    }
    on_path[n] = 0;
    stack.pop_back();
  };
  for (int s : starts)
    walk(s);
  std::sort(out.begin(), out.end(), [](const Path &a, const Path &b) {
    return std::lexicographical_compare(
        a.features.begin(), a.features.end(), b.features.begin(), b.features.end(),
        [](const FeatureInstance *x, const FeatureInstance *y) { return x->path < y->path; });
  });
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Value {
  enum class Kind { none, boolean, integer, string, component, feature, connection, path, data, set };
  Kind kind = Kind::none;
  bool b = false;
  std::int64_t i = 0;
  std::string s;
  const ComponentInstance *comp = nullptr;
  const FeatureInstance *feat = nullptr;
  const ConnectionInstance *conn = nullptr;
  const Path *path = nullptr;
  std::optional<ResolvedClassifier> data;
  std::shared_ptr<const std::vector<Value>> set;

  static Value none() { return {}; }
  static Value boolean(bool v) {
    Value x;
    x.kind = Kind::boolean;
    x.b = v;
    return x;
  }
  static Value integer(std::int64_t v) {
    Value x;
    x.kind = Kind::integer;
    x.i = v;
    return x;
  }
  static Value string(std::string v) {
    Value x;
    x.kind = Kind::string;
    x.s = std::move(v);
    return x;
  }
  static Value component(const ComponentInstance *c) {
    Value x;
    x.kind = Kind::component;
    x.comp = c;
    return x;
  }
  static Value feature(const FeatureInstance *f) {
    Value x;
    x.kind = Kind::feature;
    x.feat = f;
    return x;
  }
  static Value connection(const ConnectionInstance *c) {
    Value x;
    x.kind = Kind::connection;
    x.conn = c;
    return x;
  }
  static Value of_path(const Path *p) {
    Value x;
    x.kind = Kind::path;
    x.path = p;
    return x;
  }
  static Value of_data(std::optional<ResolvedClassifier> d) {
    if (!d)
      return none();
    Value x;
    x.kind = Kind::data;
    x.data = std::move(d);
    return x;
  }
  static Value of_set(std::vector<Value> v) {
    Value x;
    x.kind = Kind::set;
    x.set = std::make_shared<const std::vector<Value>>(std::move(v));
    return x;
  }

  std::string render() const {
    switch (kind) {
    case Kind::none:
      return "none";
    case Kind::boolean:
      return b ? "true" : "false";
    case Kind::integer:
      return std::to_string(i);
    case Kind::string:
      return "\"" + s + "\"";
    case Kind::component:
      return comp->path;
    case Kind::feature:
      return feat->path;
    case Kind::connection:
      return conn->path;
    case Kind::path:
      return path->text();
    case Kind::data:
      return data->qualified_name();
    case Kind::set: {
      std::string out = "{";
      for (std::size_t k = 0; k < set->size(); ++k)
        out += (k ? ", " : "") + (*set)[k].render();
      return out + "}";
    }
    }
    return "none";
  }
};

bool same(const Value &a, const Value &b) {
  if (a.kind != b.kind)
    return false;
  switch (a.kind) {
  case Value::Kind::none:
    return true;
  case Value::Kind::boolean:
    return a.b == b.b;
  case Value::Kind::integer:
    return a.i == b.i;
  case Value::Kind::string:
    return a.s == b.s;
  case Value::Kind::component:
    return a.comp == b.comp;
  case Value::Kind::feature:
    return a.feat == b.feat;
  case Value::Kind::connection:
    return a.conn == b.conn;
  case Value::Kind::path:
    return *a.path == *b.path;
  case Value::Kind::data:
    return a.data->qualified_name() == b.data->qualified_name();
  case Value::Kind::set:
    return a.set->size() == b.set->size() &&
           std::equal(a.set->begin(), a.set->end(), b.set->begin(), same);
  }
  return false;
}

Value from_property(const PropertyValue &p) {
  if (const auto *b = p.as_bool())
    return Value::boolean(*b);
  if (const auto *i = p.as_int())
    return Value::integer(i->value);
  if (const auto *s = p.as_string())
    return Value::string(s->value);
  if (const auto *e = p.as_enum())
    return Value::string(e->token);
  if (const auto *l = p.as_list()) {
    std::vector<Value> out;
    for (const auto &x : *l)
      out.push_back(from_property(x));
    return Value::of_set(std::move(out));
  }
  return Value::none();
}

struct Frame {
  std::vector<ClaimResult> children;
  std::vector<std::string> witnesses;
  std::vector<std::string> notes;
  int depth = 0; // quantifier nesting
};

using Env = std::vector<std::pair<std::string, Value>>;

class Evaluator {
public:
  Evaluator(const InstanceModel &model, const ClaimsConfig &config, const ClaimAnnex *local)
      : model_(model), config_(config), local_(local), graph_(connection_graph(model)) {}

  const ClaimDef &find(std::string_view name) const {
    if (local_)
      if (const auto *c = local_->find(name))
        return *c;
    if (const auto *c = claim_library().find(name))
      return *c;
    throw Error("UnresolvedPredicate", "no claim or builtin named '" + std::string(name) + "'");
  }

  Value parse_arg(const ClaimParam &p, const std::string &text) const {
    if (p.type == "component") {
      if (const auto *c = model_.component(text))
        return Value::component(c);
      throw Error("NotFound", "no component instance '" + text + "'");
    }
    if (p.type == "feature") {
      if (const auto *f = model_.feature(text))
        return Value::feature(f);
      throw Error("NotFound", "no feature instance '" + text + "'");
    }
    if (p.type == "connection") {
      for (const auto &c : model_.connections())
        if (c.path == text)
          return Value::connection(&c);
      throw Error("NotFound", "no connection instance '" + text + "'");
    }
    if (p.type == "int")
      return Value::integer(std::stoll(text));
    if (p.type == "bool")
      return Value::boolean(iequals(text, "true"));
    return Value::string(text);
  }

  ClaimResult call(const ClaimDef &def, const std::vector<Value> &args) {
    if (args.size() != def.params.size())
      throw Error("ArityMismatch", "claim '" + def.name + "' expects " + std::to_string(def.params.size()) +
                                       " argument(s), got " + std::to_string(args.size()));
    if (std::find(stack_.begin(), stack_.end(), def.name) != stack_.end())
      throw Error("CyclicClaim", "claim '" + def.name + "' calls itself");
    stack_.push_back(def.name);
    Env env;
    for (std::size_t i = 0; i < args.size(); ++i)
      env.emplace_back(def.params[i].name, args[i]);
    Frame frame;
    const bool ok = truth(def.body, env, frame);
    stack_.pop_back();

    ClaimResult r;
    r.claim = def.name;
    r.description = def.description;
    for (const auto &a : args)
      r.args.push_back(a.render());
    r.status = ok ? ClaimStatus::proved : ClaimStatus::failed;
    r.children = std::move(frame.children);
    for (const auto &n : frame.notes)
      r.note += (r.note.empty() ? "" : "\n") + n;
    if (!ok) {
      r.witnesses = std::move(frame.witnesses);
      if (r.witnesses.empty())
        for (const auto &c : r.children)
          if (!c.proved())
            r.witnesses.insert(r.witnesses.end(), c.witnesses.begin(), c.witnesses.end());
      if (r.witnesses.empty()) {
        std::string w = def.name + "(";
        for (std::size_t i = 0; i < r.args.size(); ++i)
          w += (i ? ", " : "") + r.args[i];
        r.witnesses.push_back(w + ")");
      }
    }
    return r;
  }

  Value eval_term(const Formula &f, Env &env, Frame &frame) {
    switch (f.op) {
    case FormulaOp::int_lit:
      return Value::integer(f.value);
    case FormulaOp::string_lit:
      return Value::string(f.name);
    case FormulaOp::bool_lit:
      return Value::boolean(f.value != 0);
    case FormulaOp::property_name:
      return Value::string(f.name);
    case FormulaOp::var:
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == f.name)
          return it->second;
      throw Error("UnresolvedPredicate", "unbound identifier '" + f.name + "'");
    case FormulaOp::call:
      return call_value(f, env, frame);
    default:
      return Value::boolean(truth(f, env, frame));
    }
  }

  bool truth(const Formula &f, Env &env, Frame &frame) {
    switch (f.op) {
    case FormulaOp::and_: {
      bool a = truth(f.args[0], env, frame);
      bool b = truth(f.args[1], env, frame);
      return a && b;
    }
    case FormulaOp::or_: {
      bool a = truth(f.args[0], env, frame);
      bool b = truth(f.args[1], env, frame);
      return a || b;
    }
    case FormulaOp::implies: {
      if (!truth(f.args[0], env, frame))
        return true;
      return truth(f.args[1], env, frame);
    }
    case FormulaOp::not_: {
      Frame scratch;
      scratch.depth = frame.depth + 1;
      bool v = truth(f.args[0], env, scratch);
      frame.children.insert(frame.children.end(), scratch.children.begin(), scratch.children.end());
      return !v;
    }
    case FormulaOp::forall:
    case FormulaOp::exists: {
      Value dom = eval_term(f.args[0], env, frame);
      std::vector<Value> items;
      if (dom.kind == Value::Kind::set)
        items = *dom.set;
      else if (dom.kind != Value::Kind::none)
        items.push_back(dom);
      const bool universal = f.op == FormulaOp::forall;
      bool result = universal;
      ++frame.depth;
      for (const auto &item : items) {
        env.emplace_back(f.name, item);
        bool v = truth(f.args[1], env, frame);
        env.pop_back();
        if (universal && !v) {
          result = false;
          if (frame.depth == 1)
            frame.witnesses.push_back(item.render());
        }
        if (!universal && v)
          result = true;
      }
      --frame.depth;
      if (!universal && !result && frame.depth == 0)
        frame.witnesses.push_back("no element of " + dom.render() + " satisfies " + print_formula(f.args[1]));
      return result;
    }
    case FormulaOp::compare: {
      Value a = eval_term(f.args[0], env, frame);
      Value b = eval_term(f.args[1], env, frame);
      if (f.name == "=")
        return same(a, b);
      if (f.name == "<>")
        return !same(a, b);
      if (a.kind != Value::Kind::integer || b.kind != Value::Kind::integer)
        return false;
      if (f.name == "<")
        return a.i < b.i;
      if (f.name == "<=")
        return a.i <= b.i;
      if (f.name == ">")
        return a.i > b.i;
      return a.i >= b.i;
    }
    default: {
      Value v = eval_term(f, env, frame);
      return v.kind == Value::Kind::boolean && v.b;
    }
    }
  }

private:
  std::vector<const ComponentInstance *> components_of(const Value &v) const {
    std::vector<const ComponentInstance *> out;
    if (v.kind == Value::Kind::component)
      out.push_back(v.comp);
    else if (v.kind == Value::Kind::set)
      for (const auto &x : *v.set)
        if (x.kind == Value::Kind::component)
          out.push_back(x.comp);
    return out;
  }

  std::vector<const FeatureInstance *> features_of(const Value &v) const {
    std::vector<const FeatureInstance *> out;
    if (v.kind == Value::Kind::feature)
      out.push_back(v.feat);
    else if (v.kind == Value::Kind::set)
      for (const auto &x : *v.set)
        if (x.kind == Value::Kind::feature)
          out.push_back(x.feat);
    return out;
  }

  static bool is_port(const FeatureInstance &f) {
    auto k = f.decl->variant;
    return k == FeatureVariant::data_port || k == FeatureVariant::event_port || k == FeatureVariant::event_data_port;
  }

  Value port_set(const Value &v, int which) const {
    std::vector<Value> out;
    for (const auto *c : components_of(v))
      for (const auto &f : c->features) {
        if (!is_port(f))
          continue;
        if ((which == 1 && !f.decl->is_incoming()) || (which == 2 && !f.decl->is_outgoing()))
          continue;
        out.push_back(Value::feature(&f));
      }
    return Value::of_set(std::move(out));
  }

  std::optional<PropertyValue> property_of(const Value &x, const std::string &name) const {
    switch (x.kind) {
    case Value::Kind::component:
      return lookup_property(*x.comp, name);
    case Value::Kind::data:
      if (auto p = data_property(model_.packages(), *x.data, name))
        return *p;
      return std::nullopt;
    case Value::Kind::connection:
      if (const auto *p = find_association(x.conn->properties, name))
        return *p;
      return std::nullopt;
    default:
      return std::nullopt;
    }
  }

  bool is_encrypted(const Value &d) const {
    if (d.kind != Value::Kind::data)
      return false;
    auto p = data_property(model_.packages(), *d.data, "Security::Encrypted");
    return p && p->as_bool() && *p->as_bool();
  }

  Value call_value(const Formula &f, Env &env, Frame &frame) {
    const auto *builtin = find_claim_builtin(f.name);
    if (!builtin) {
      const ClaimDef &def = find(f.name);
      std::vector<Value> args;
      for (const auto &a : f.args)
        args.push_back(eval_term(a, env, frame));
      frame.children.push_back(call(def, args));
      return Value::boolean(frame.children.back().proved());
    }
    if (static_cast<int>(f.args.size()) != builtin->arity)
      throw Error("ArityMismatch", "'" + f.name + "' expects " + std::to_string(builtin->arity) + " argument(s)");
    std::vector<Value> a;
    for (const auto &x : f.args)
      a.push_back(eval_term(x, env, frame));
    const std::string &n = f.name;

    if (n == "components") {
      std::vector<Value> out;
      for (const auto *c : model_.components())
        out.push_back(Value::component(c));
      return Value::of_set(std::move(out));
    }
    if (n == "connections") {
      std::vector<Value> out;
      for (const auto &c : model_.connections())
        out.push_back(Value::connection(&c));
      return Value::of_set(std::move(out));
    }
    if (n == "with_role") {
      std::string role = a[0].s;
      if (role.find("::") == std::string::npos)
        role = "Role::" + role;
      std::vector<Value> out;
      for (const auto *c : model_.components())
        if (property_is_true(*c, role))
          out.push_back(Value::component(c));
      return Value::of_set(std::move(out));
    }
    if (n == "subcomponents") {
      std::vector<Value> out;
      for (const auto *c : components_of(a[0]))
        for (const auto &child : c->children)
          out.push_back(Value::component(child.get()));
      return Value::of_set(std::move(out));
    }
    if (n == "kind_is")
      return Value::boolean(a[0].kind == Value::Kind::component && iequals(to_string(a[0].comp->kind), a[1].s));
    if (n == "has_property") {
      auto p = property_of(a[0], a[1].s);
      return Value::boolean(p && same(from_property(*p), a[2]));
    }
    if (n == "property") {
      auto p = property_of(a[0], a[1].s);
      return p ? from_property(*p) : Value::none();
    }
    if (n == "features")
      return port_set(a[0], 0);
    if (n == "in_features")
      return port_set(a[0], 1);
    if (n == "out_features")
      return port_set(a[0], 2);
    if (n == "connected") {
      for (const auto &c : model_.connections())
        if (c.source == a[0].feat && c.dest == a[1].feat)
          return Value::boolean(true);
      return Value::boolean(false);
    }
    if (n == "all_paths") {
      auto found = all_paths(graph_, features_of(a[0]), features_of(a[1]), config_.path_cap);
      std::vector<Value> out;
      for (auto &p : found) {
        paths_.push_back(std::move(p));
        out.push_back(Value::of_path(&paths_.back()));
      }
      return Value::of_set(std::move(out));
    }
    if (n == "path_components") {
      std::vector<Value> out;
      if (a[0].kind == Value::Kind::path)
        for (const auto *f : a[0].path->features)
          if (out.empty() || out.back().comp != f->owner)
            out.push_back(Value::component(f->owner));
      return Value::of_set(std::move(out));
    }
    if (n == "path_features") {
      std::vector<Value> out;
      if (a[0].kind == Value::Kind::path)
        for (const auto *f : a[0].path->features)
          out.push_back(Value::feature(f));
      return Value::of_set(std::move(out));
    }
    if (n == "first" || n == "last") {
      if (a[0].kind != Value::Kind::path || a[0].path->features.empty())
        return Value::none();
      return Value::feature(n == "first" ? a[0].path->features.front() : a[0].path->features.back());
    }
    if (n == "source" || n == "destination") {
      if (a[0].kind != Value::Kind::connection)
        return Value::none();
      return Value::feature(n == "source" ? a[0].conn->source : a[0].conn->dest);
    }
    if (n == "owner")
      return a[0].kind == Value::Kind::feature ? Value::component(a[0].feat->owner) : Value::none();
    if (n == "data_type_of") {
      if (a[0].kind == Value::Kind::feature)
        return Value::of_data(a[0].feat->data_type);
      if (a[0].kind == Value::Kind::connection)
        return Value::of_data(a[0].conn->data_type);
      return Value::none();
    }
    if (n == "marked_encrypts")
      return Value::boolean(a[0].kind == Value::Kind::component && property_is_true(*a[0].comp, "Security::Encrypts"));
    if (n == "encrypted")
      return Value::boolean(is_encrypted(a[0]));
    if (n == "member") {
      if (a[1].kind != Value::Kind::set)
        return Value::boolean(false);
      for (const auto &x : *a[1].set)
        if (same(x, a[0]))
          return Value::boolean(true);
      return Value::boolean(false);
    }
    if (n == "size")
      return Value::integer(a[0].kind == Value::Kind::set ? static_cast<std::int64_t>(a[0].set->size()) : 0);
    if (n == "approved_algorithms") {
      std::vector<Value> out;
      for (const auto &s : config_.approved_algorithms)
        out.push_back(Value::string(s));
      return Value::of_set(std::move(out));
    }
    if (n == "min_key_bits")
      return Value::integer(config_.min_key_bits);
    if (n == "trajectory_linear") {
      if (a[0].kind != Value::Kind::component)
        return Value::boolean(false);
      frame.children.push_back(trajectory_linear(*a[0].comp));
      return Value::boolean(frame.children.back().proved());
    }
    throw Error("UnresolvedPredicate", "builtin '" + n + "' has no evaluator");
  }

  ClaimResult trajectory_linear(const ComponentInstance &g) {
    ClaimResult r;
    r.claim = "trajectory_linear";
    r.args.push_back(g.path);
    r.description = "|pos - prev(pos)| <= Gps::MaxStep, checked by the contract engine";
    auto traj = lookup_property(g, "Gps::Trajectory");
    auto step = lookup_property(g, "Gps::MaxStep");
    if (!traj || !traj->as_list() || !step || !step->as_int()) {
      r.status = ClaimStatus::failed;
      r.witnesses.push_back(g.path + " lacks Gps::Trajectory or Gps::MaxStep");
      return r;
    }
    const std::string m = std::to_string(step->as_int()->value);
    CompileOptions opts;
    std::vector<std::string> names;
    for (const auto &p : *traj->as_list()) {
      if (!p.as_string())
        continue;
      const std::string pos = p.as_string()->value;
      const std::string prev = "prev(" + pos + ", " + pos + ")";
      std::string name = "linear_" + pos;
      std::replace(name.begin(), name.end(), '.', '_');
      opts.extras.push_back({g.path, name, pos + " - " + prev + " <= " + m + " and " + prev + " - " + pos + " <= " + m});
      names.push_back(g.path + "." + name);
    }
    try {
      auto ts = compile(model_, opts);
      for (const auto &name : names) {
        Verdict v = check_kinduction(ts, name, config_.k, config_.check);
        if (v.status == VerdictStatus::unknown)
          v = check_bmc(ts, name, config_.k, config_.check);
        std::string line = name + ": " + std::string(to_string(v.status)) + " (k=" + std::to_string(v.k) + ")";
        r.note += (r.note.empty() ? "" : "\n") + line;
        if (v.status == VerdictStatus::falsified) {
          r.status = ClaimStatus::failed;
          r.witnesses.push_back(name);
          if (v.cex)
            r.note += "\n" + trace_counterexample(*v.cex, ts, model_, true).text();
        }
      }
    } catch (const Error &e) {
      r.status = ClaimStatus::failed;
      r.note += (r.note.empty() ? "" : "\n") + std::string(e.code()) + ": " + e.what();
      r.witnesses.push_back(g.path);
    }
    return r;
  }

  const InstanceModel &model_;
  const ClaimsConfig &config_;
  const ClaimAnnex *local_;
  ConnectionGraph graph_;
  std::deque<Path> paths_;
  std::vector<std::string> stack_;
};

void require_role(const InstanceModel &model, std::string_view role) {
  for (const auto *c : model.components())
    if (property_is_true(*c, role))
      return;
  throw Error("MissingRoleAnnotation", "no component carries " + std::string(role) + " => true");
}

std::vector<const ClaimAnnex *> annexes_of(const ComponentInstance &c) {
  std::vector<const ClaimAnnex *> out;
  auto take = [&](const std::vector<AnnexClause> &list) {
    for (const auto &a : list)
      if (a.claims)
        out.push_back(a.claims.get());
  };
  if (c.classifier.type)
    take(c.classifier.type->annexes);
  if (c.classifier.impl)
    take(c.classifier.impl->annexes);
  return out;
}

} // namespace

ClaimResult evaluate_claim(const InstanceModel &model, std::string_view claim, const std::vector<std::string> &args,
                           const ClaimsConfig &config, const ClaimAnnex *local) {
  Evaluator ev(model, config, local);
  const ClaimDef &def = ev.find(claim);
  if (args.size() != def.params.size())
    throw Error("ArityMismatch", "claim '" + def.name + "' expects " + std::to_string(def.params.size()) +
                                     " argument(s), got " + std::to_string(args.size()));
  std::vector<Value> values;
  for (std::size_t i = 0; i < args.size(); ++i)
    values.push_back(ev.parse_arg(def.params[i], args[i]));
  return ev.call(def, values);
}

std::vector<ClaimResult> prove_goals(const InstanceModel &model, const ClaimsConfig &config) {
  std::vector<ClaimResult> out;
  for (const auto *c : model.components())
    for (const auto *annex : annexes_of(*c)) {
      Evaluator ev(model, config, annex);
      for (const auto &goal : annex->proves) {
        Env env{{"this", Value::component(c)}};
        Frame frame;
        ev.truth(goal, env, frame);
        for (auto &r : frame.children)
          out.push_back(std::move(r));
      }
    }
  return out;
}

ClaimResult check_instruction_encryption(const InstanceModel &model, const ClaimsConfig &config) {
  require_role(model, "Role::GroundStation");
  require_role(model, "Role::Motor");
  return evaluate_claim(model, "check_instruction_encryption", {model.root().path}, config);
}

ClaimResult check_gps_data_security(const InstanceModel &model, const ClaimsConfig &config) {
  require_role(model, "Role::GpsDevice");
  require_role(model, "Role::SoftwareCore");
  return evaluate_claim(model, "check_gps_data_security", {model.root().path}, config);
}

} // namespace uasforge
