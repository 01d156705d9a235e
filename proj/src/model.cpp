#include "uasforge/model.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "model_detail.hpp"
#include "uasforge/claim_lang.hpp"
#include "uasforge/contract_lang.hpp"
#include "uasforge/lexer.hpp"
#include "uasforge/parser.hpp"

namespace uasforge {

namespace {

constexpr std::string_view kStandardProperties = R"(property set Standard_Properties is
  Period: aadlinteger units ms;
  Priority: aadlinteger;
  Stack_Size: aadlinteger units bytes;
  scheduling_protocol: enumeration (rms, edf, fifo, round_robin);
  Dispatch_Protocol: enumeration (periodic, sporadic, aperiodic, background);
end Standard_Properties;
)";

void parse_annexes(std::vector<AnnexClause> &annexes, const SourceUnit *unit, Diagnostics &diags) {
  for (auto &a : annexes) {
    if (iequals(a.language, "agree")) {
      auto r = parse_contract_annex(a.body, a.body_offset, unit);
      diags.insert(diags.end(), r.diagnostics.begin(), r.diagnostics.end());
      if (r.value)
        a.contract = std::make_shared<const ContractAnnex>(std::move(*r.value));
    } else if (iequals(a.language, "resolute")) {
      auto r = parse_claim_annex(a.body, a.body_offset, unit, library_claim_signatures());
      diags.insert(diags.end(), r.diagnostics.begin(), r.diagnostics.end());
      if (r.value)
        a.claims = std::make_shared<const ClaimAnnex>(std::move(*r.value));
    } else {
      Diagnostic d;
      d.severity = Severity::warning;
      d.message = "annex language '" + a.language + "' is not analysed";
      d.span = a.loc;
      if (unit)
        d.file = unit->path();
      diags.push_back(std::move(d));
    }
  }
}

struct SplitName {
  std::string package; // empty when unqualified
  std::string type;
  std::string impl; // empty for a type reference
};

SplitName split_name(std::string_view name) {
  SplitName out;
  auto sep = name.rfind("::");
  std::string_view local = name;
  if (sep != std::string_view::npos) {
    out.package = std::string(name.substr(0, sep));
    local = name.substr(sep + 2);
  }
  auto dot = local.find('.');
  out.type = std::string(local.substr(0, dot));
  if (dot != std::string_view::npos)
    out.impl = std::string(local.substr(dot + 1));
  return out;
}

std::optional<ResolvedClassifier> lookup_in(const Package &pkg, const SplitName &n) {
  const ComponentType *type = pkg.find_type(n.type);
  if (!type)
    return std::nullopt;
  ResolvedClassifier rc{&pkg, type, nullptr};
  if (!n.impl.empty()) {
    rc.impl = pkg.find_implementation(n.type + "." + n.impl);
    if (!rc.impl)
      return std::nullopt;
  }
  return rc;
}

} // namespace

std::string_view standard_property_set_text() { return kStandardProperties; }

// ---------------------------------------------------------------------------
// PackageSet

PackageSet::PackageSet() {
  auto parsed = parse_model_text(kStandardProperties, "<standard>");
  standard_ = std::get<PropertySet>(parsed.value->units.front());
}

Diagnostics PackageSet::add_file(const std::string &path) { return add_source(SourceUnit::from_file(path)); }

Diagnostics PackageSet::add_text(std::string path, std::string text) {
  return add_source(std::make_shared<const SourceUnit>(std::move(path), std::move(text)));
}

Diagnostics PackageSet::add_source(std::shared_ptr<const SourceUnit> unit) {
  auto parsed = parse_model(*unit);
  Diagnostics diags = std::move(parsed.diagnostics);
  if (!parsed.value || has_errors(diags))
    return diags;
  sources_.push_back(unit);
  for (auto &u : parsed.value->units) {
    if (auto *pkg = std::get_if<Package>(&u)) {
      pkg->file = unit->path();
      for (auto &decl : pkg->declarations) {
        if (auto *t = std::get_if<ComponentType>(&decl))
          parse_annexes(t->annexes, unit.get(), diags);
        else
          parse_annexes(std::get<ComponentImplementation>(decl).annexes, unit.get(), diags);
      }
      packages_.push_back(std::move(*pkg));
    } else {
      auto &set = std::get<PropertySet>(u);
      set.file = unit->path();
      property_sets_.push_back(std::move(set));
    }
  }
  return diags;
}

const Package *PackageSet::find_package(std::string_view name) const {
  for (const auto &p : packages_)
    if (p.name == name)
      return &p;
  return nullptr;
}

const PropertyDefinition *PackageSet::find_property(std::string_view name) const {
  auto sep = name.find("::");
  if (sep == std::string_view::npos) {
    for (const auto &d : standard_.definitions)
      if (iequals(d.name, name))
        return &d;
    return nullptr;
  }
  auto set_name = name.substr(0, sep);
  auto prop = name.substr(sep + 2);
  for (const auto &s : property_sets_)
    if (iequals(s.name, set_name))
      for (const auto &d : s.definitions)
        if (iequals(d.name, prop))
          return &d;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Classifier resolution

std::string ResolvedClassifier::qualified_name() const {
  std::string out = package->name + "::" + type->name;
  if (impl)
    out += "." + impl->impl_name;
  return out;
}

std::optional<ResolvedClassifier> try_resolve_classifier(const PackageSet &packages, std::string_view name,
                                                         const Package *context, std::string *error) {
  SplitName n = split_name(name);
  if (n.type.empty()) {
    if (error)
      *error = "empty classifier reference";
    return std::nullopt;
  }
  if (!n.package.empty()) {
    const Package *pkg = packages.find_package(n.package);
    if (!pkg) {
      if (error)
        *error = "unknown package '" + n.package + "' in '" + std::string(name) + "'";
      return std::nullopt;
    }
    auto rc = lookup_in(*pkg, n);
    if (!rc && error)
      *error = "no classifier '" + std::string(name) + "'";
    return rc;
  }
  if (context) {
    if (auto rc = lookup_in(*context, n))
      return rc;
  }
  std::optional<ResolvedClassifier> found;
  std::vector<std::string> where;
  for (const auto &pkg : packages.packages()) {
    if (auto rc = lookup_in(pkg, n)) {
      if (!found)
        found = rc;
      where.push_back(pkg.name);
    }
  }
  if (where.size() > 1) {
    if (error) {
      *error = "ambiguous classifier '" + std::string(name) + "' (declared in";
      for (const auto &w : where)
        *error += " " + w;
      *error += ")";
    }
    return std::nullopt;
  }
  if (!found && error)
    *error = "no classifier '" + std::string(name) + "'";
  return found;
}

ResolvedClassifier resolve_classifier(const PackageSet &packages, std::string_view name, const Package *context) {
  std::string err;
  auto rc = try_resolve_classifier(packages, name, context, &err);
  if (!rc)
    throw Error(err.rfind("ambiguous", 0) == 0 ? "Ambiguous" : "NotFound", err);
  return *rc;
}

namespace detail {

std::optional<ResolvedClassifier> extended_type(const PackageSet &packages, const ResolvedClassifier &rc) {
  if (rc.type->extends.empty())
    return std::nullopt;
  auto base = try_resolve_classifier(packages, rc.type->extends, rc.package);
  if (!base)
    return std::nullopt;
  base->impl = nullptr;
  return base;
}

std::vector<std::pair<const Feature *, const Package *>> all_features(const PackageSet &packages,
                                                                      const ResolvedClassifier &rc) {
  std::vector<std::pair<const Feature *, const Package *>> out;
  std::set<const ComponentType *> seen;
  std::function<void(const ResolvedClassifier &)> walk = [&](const ResolvedClassifier &c) {
    if (!seen.insert(c.type).second)
      return;
    if (auto base = extended_type(packages, c))
      walk(*base);
    for (const auto &f : c.type->features) {
      auto it = std::find_if(out.begin(), out.end(), [&](auto &p) { return p.first->name == f.name; });
      if (it != out.end())
        *it = {&f, c.package};
      else
        out.emplace_back(&f, c.package);
    }
  };
  walk(rc);
  return out;
}

std::vector<const FlowSpec *> all_flows(const PackageSet &packages, const ResolvedClassifier &rc) {
  std::vector<const FlowSpec *> out;
  if (auto base = extended_type(packages, rc); base && base->type != rc.type)
    for (const auto &f : base->type->flows)
      out.push_back(&f);
  for (const auto &f : rc.type->flows)
    out.push_back(&f);
  return out;
}

void merge_properties(std::vector<PropertyAssociation> &into, const std::vector<PropertyAssociation> &from) {
  for (const auto &p : from) {
    auto it = std::find_if(into.begin(), into.end(), [&](auto &q) { return iequals(q.name, p.name); });
    if (it != into.end())
      *it = p;
    else
      into.push_back(p);
  }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Data classifiers

std::vector<ResolvedClassifier> data_lineage(const PackageSet &packages, const ResolvedClassifier &data) {
  std::vector<ResolvedClassifier> out{data};
  if (auto base = detail::extended_type(packages, data); base && base->type != data.type)
    out.push_back(*base);
  return out;
}

std::optional<PropertyValue> data_property(const PackageSet &packages, const ResolvedClassifier &data,
                                           std::string_view name) {
  for (const auto &rc : data_lineage(packages, data)) {
    if (rc.impl)
      if (const auto *v = find_association(rc.impl->properties, name))
        return *v;
    if (const auto *v = find_association(rc.type->properties, name))
      return *v;
  }
  return std::nullopt;
}

std::vector<const Subcomponent *> data_fields(const ResolvedClassifier &data) {
  std::vector<const Subcomponent *> out;
  if (data.impl)
    for (const auto &s : data.impl->subcomponents)
      if (s.kind == ComponentKind::data)
        out.push_back(&s);
  return out;
}

// ---------------------------------------------------------------------------
// Instances

const PropertyValue *find_association(const std::vector<PropertyAssociation> &props, std::string_view name) {
  for (const auto &p : props)
    if (iequals(p.name, name))
      return &p.value;
  return nullptr;
}

std::optional<PropertyValue> lookup_property(const ComponentInstance &instance, std::string_view name) {
  if (const auto *v = find_association(instance.properties, name))
    return *v;
  return std::nullopt;
}

bool property_is_true(const ComponentInstance &instance, std::string_view name) {
  const auto *v = find_association(instance.properties, name);
  return v && v->as_bool() && *v->as_bool();
}

const FeatureInstance *ComponentInstance::feature(std::string_view n) const {
  for (const auto &f : features)
    if (f.name == n)
      return &f;
  return nullptr;
}

const ComponentInstance *ComponentInstance::child(std::string_view n) const {
  for (const auto &c : children)
    if (c->name == n)
      return c.get();
  return nullptr;
}

bool ComponentInstance::routes_internally() const { return !classifier.impl || classifier.impl->connections.empty(); }

const ComponentInstance *InstanceModel::component(std::string_view path) const {
  auto it = by_path_.find(path);
  return it == by_path_.end() ? nullptr : it->second;
}

const FeatureInstance *InstanceModel::feature(std::string_view path) const {
  auto it = features_by_path_.find(path);
  return it == features_by_path_.end() ? nullptr : it->second;
}

std::vector<const ComponentInstance *> InstanceModel::components() const {
  std::vector<const ComponentInstance *> out;
  std::function<void(const ComponentInstance &)> walk = [&](const ComponentInstance &c) {
    out.push_back(&c);
    for (const auto &ch : c.children)
      walk(*ch);
  };
  walk(*root_);
  return out;
}

std::string InstanceModel::describe() const {
  std::ostringstream out;
  for (const auto *c : components()) {
    out << c->path << " : " << to_string(c->kind) << " " << c->classifier.qualified_name() << "\n";
    for (const auto &p : c->properties)
      out << "  " << p.name << " => " << p.value.to_text() << "\n";
    for (const auto &f : c->features)
      out << "  feature " << f.name << (f.data_type ? " : " + f.data_type->qualified_name() : "") << "\n";
  }
  for (const auto &conn : connections_) {
    out << "connection " << conn.path << " : " << conn.source->path << " -> " << conn.dest->path << "\n";
    for (const auto &p : conn.properties)
      out << "  " << p.name << " => " << p.value.to_text() << "\n";
  }
  return out.str();
}

namespace {

class Instantiator {
public:
  explicit Instantiator(const PackageSet &packages) : packages_(packages) {}

  std::unique_ptr<ComponentInstance> build(const ResolvedClassifier &rc, const std::string &name,
                                           const std::string &path, const Subcomponent *decl,
                                           const ComponentInstance *parent) {
    auto inst = std::make_unique<ComponentInstance>();
    inst->name = name;
    inst->path = path;
    inst->kind = rc.kind();
    inst->classifier = rc;
    inst->decl = decl;
    inst->parent = parent;

    if (auto base = detail::extended_type(packages_, rc))
      detail::merge_properties(inst->properties, base->type->properties);
    detail::merge_properties(inst->properties, rc.type->properties);
    if (rc.impl)
      detail::merge_properties(inst->properties, rc.impl->properties);
    if (decl)
      detail::merge_properties(inst->properties, decl->properties);

    for (auto [f, pkg] : detail::all_features(packages_, rc)) {
      FeatureInstance fi;
      fi.name = f->name;
      fi.path = path + "." + f->name;
      fi.decl = f;
      fi.owner = inst.get();
      if (!f->data_type.empty())
        fi.data_type = try_resolve_classifier(packages_, f->data_type, pkg);
      inst->features.push_back(std::move(fi));
    }

    if (rc.impl) {
      const std::string key = rc.qualified_name();
      if (std::find(stack_.begin(), stack_.end(), key) != stack_.end()) {
        std::string chain;
        for (const auto &s : stack_)
          chain += s + " -> ";
        throw Error("RecursiveClassifier", "recursive containment: " + chain + key);
      }
      stack_.push_back(key);
      for (const auto &sub : rc.impl->subcomponents) {
        auto child_rc = resolve_classifier(packages_, sub.classifier, rc.package);
        inst->children.push_back(build(child_rc, sub.name, path + "." + sub.name, &sub, inst.get()));
      }
      stack_.pop_back();
    }
    return inst;
  }

private:
  const PackageSet &packages_;
  std::vector<std::string> stack_;
};

const FeatureInstance *endpoint(const ComponentInstance &owner, const std::string &ref) {
  auto dot = ref.find('.');
  if (dot == std::string::npos)
    return owner.feature(ref);
  const auto *child = owner.child(ref.substr(0, dot));
  return child ? child->feature(ref.substr(dot + 1)) : nullptr;
}

} // namespace

InstanceModel instantiate(const PackageSet &packages, std::string_view root) {
  auto diags = validate(packages);
  if (has_errors(diags))
    throw DiagnosticError("ValidationFailed", std::move(diags));

  auto rc = resolve_classifier(packages, root);
  if (rc.kind() != ComponentKind::system || !rc.impl)
    throw Error("NotASystemImplementation", "'" + std::string(root) + "' is not a system implementation");

  InstanceModel model;
  model.packages_ = &packages;
  Instantiator builder(packages);
  model.root_ = builder.build(rc, rc.type->name, rc.type->name, nullptr, nullptr);

  for (const auto *c : model.components()) {
    model.by_path_.emplace(c->path, c);
    for (const auto &f : c->features)
      model.features_by_path_.emplace(f.path, &f);
    if (!c->classifier.impl)
      continue;
    for (const auto &conn : c->classifier.impl->connections) {
      ConnectionInstance ci;
      ci.name = conn.name;
      ci.path = c->path + "." + conn.name;
      ci.owner = c;
      ci.source = endpoint(*c, conn.source);
      ci.dest = endpoint(*c, conn.dest);
      ci.decl = &conn;
      ci.properties = conn.properties;
      ci.data_type = ci.source->data_type ? ci.source->data_type : ci.dest->data_type;
      model.connections_.push_back(std::move(ci));
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Connection graph

int ConnectionGraph::index_of(std::string_view feature_path) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), feature_path,
                             [](const FeatureInstance *f, std::string_view p) { return f->path < p; });
  if (it == nodes.end() || (*it)->path != feature_path)
    return -1;
  return static_cast<int>(it - nodes.begin());
}

bool ConnectionGraph::has_edge(int from, int to) const {
  if (from < 0 || static_cast<std::size_t>(from) >= successors.size())
    return false;
  const auto &s = successors[from];
  return std::binary_search(s.begin(), s.end(), to);
}

ConnectionGraph connection_graph(const InstanceModel &model) {
  ConnectionGraph g;
  const auto comps = model.components();
  for (const auto *c : comps)
    for (const auto &f : c->features)
      if (f.decl->is_port())
        g.nodes.push_back(&f);
  std::sort(g.nodes.begin(), g.nodes.end(), [](auto *a, auto *b) { return a->path < b->path; });
  g.successors.resize(g.nodes.size());

  auto add = [&](int from, int to, EdgeKind kind, const ConnectionInstance *conn) {
    if (from < 0 || to < 0 || from == to)
      return;
    g.edges.push_back({from, to, kind, conn});
    g.successors[from].push_back(to);
  };

  for (const auto &conn : model.connections())
    add(g.index_of(conn.source->path), g.index_of(conn.dest->path), EdgeKind::connection, &conn);

  for (const auto *c : comps) {
    if (!c->routes_internally())
      continue;
    auto flows = detail::all_flows(model.packages(), c->classifier);
    if (!flows.empty()) {
      for (const auto *fl : flows) {
        if (fl->kind != FlowKind::path)
          continue;
        const auto *in = c->feature(fl->in_feature);
        const auto *out = c->feature(fl->out_feature);
        if (in && out)
          add(g.index_of(in->path), g.index_of(out->path), EdgeKind::internal, nullptr);
      }
      continue;
    }
    for (const auto &in : c->features) {
      if (!in.decl->is_port() || !in.decl->is_incoming())
        continue;
      for (const auto &out : c->features)
        if (out.decl->is_port() && out.decl->is_outgoing())
          add(g.index_of(in.path), g.index_of(out.path), EdgeKind::internal, nullptr);
    }
  }

  for (auto &s : g.successors) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return g;
}

} // namespace uasforge
