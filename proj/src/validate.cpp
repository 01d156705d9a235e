#include <map>
#include <set>

#include "model_detail.hpp"
#include "uasforge/lexer.hpp"
#include "uasforge/model.hpp"

namespace uasforge {

bool feature_legal_for(ComponentKind kind, FeatureVariant v) {
  const bool port =
      v == FeatureVariant::data_port || v == FeatureVariant::event_port || v == FeatureVariant::event_data_port;
  switch (kind) {
  case ComponentKind::system:
    return port || v == FeatureVariant::bus_access || v == FeatureVariant::data_access;
  case ComponentKind::process:
  case ComponentKind::thread:
    return port || v == FeatureVariant::data_access;
  case ComponentKind::device:
  case ComponentKind::processor:
    return port || v == FeatureVariant::bus_access;
  case ComponentKind::bus:
  case ComponentKind::memory:
    return v == FeatureVariant::bus_access;
  case ComponentKind::data:
    return v == FeatureVariant::data_access;
  case ComponentKind::subprogram:
    return v == FeatureVariant::parameter || v == FeatureVariant::data_access;
  }
  return false;
}

bool subcomponent_legal_for(ComponentKind parent, ComponentKind child) {
  using K = ComponentKind;
  switch (parent) {
  case K::system:
    return child == K::system || child == K::process || child == K::device || child == K::processor ||
           child == K::bus || child == K::memory || child == K::data;
  case K::process:
    return child == K::thread || child == K::data || child == K::subprogram;
  case K::thread:
    return child == K::data || child == K::subprogram;
  case K::processor:
    return child == K::memory || child == K::bus;
  case K::memory:
    return child == K::memory;
  case K::data:
    return child == K::data || child == K::subprogram;
  case K::subprogram:
    return child == K::data;
  case K::device:
  case K::bus:
    return false;
  }
  return false;
}

namespace {

std::string_view variant_word(FeatureVariant v) {
  switch (v) {
  case FeatureVariant::data_port:
    return "data port";
  case FeatureVariant::event_port:
    return "event port";
  case FeatureVariant::event_data_port:
    return "event data port";
  case FeatureVariant::parameter:
    return "parameter";
  case FeatureVariant::bus_access:
    return "bus access";
  case FeatureVariant::data_access:
    return "data access";
  }
  return "feature";
}

class Validator {
public:
  explicit Validator(const PackageSet &packages) : ps_(packages) {}

  Diagnostics run() {
    std::map<std::string, int> pkg_names, set_names;
    for (const auto &pkg : ps_.packages())
      if (++pkg_names[to_lower(pkg.name)] == 2)
        error(pkg.file, pkg.loc, "duplicate package '" + pkg.name + "'");
    for (const auto &set : ps_.property_sets()) {
      if (++set_names[to_lower(set.name)] == 2)
        error(set.file, set.loc, "duplicate property set '" + set.name + "'");
      std::set<std::string> defs;
      for (const auto &d : set.definitions)
        if (!defs.insert(to_lower(d.name)).second)
          error(set.file, d.loc, "duplicate property '" + set.name + "::" + d.name + "'");
    }
    for (const auto &pkg : ps_.packages())
      check_package(pkg);
    return std::move(diags_);
  }

private:
  void error(const std::string &file, const SourceLoc &loc, std::string msg) {
    Diagnostic d;
    d.message = std::move(msg);
    d.span = loc;
    d.file = file;
    diags_.push_back(std::move(d));
  }

  void check_package(const Package &pkg) {
    file_ = pkg.file;
    pkg_ = &pkg;
    std::set<std::string> names;
    for (const auto &decl : pkg.declarations) {
      if (const auto *t = std::get_if<ComponentType>(&decl)) {
        if (!names.insert(to_lower(t->name)).second)
          error(file_, t->loc, "duplicate classifier '" + t->name + "' in package " + pkg.name);
        check_type(*t);
      } else {
        const auto &impl = std::get<ComponentImplementation>(decl);
        if (!names.insert(to_lower(impl.full_name())).second)
          error(file_, impl.loc, "duplicate classifier '" + impl.full_name() + "' in package " + pkg.name);
        check_impl(impl);
      }
    }
  }

  void check_properties(const std::vector<PropertyAssociation> &props) {
    std::set<std::string> seen;
    for (const auto &p : props) {
      if (!seen.insert(to_lower(p.name)).second)
        error(file_, p.loc, "property '" + p.name + "' associated twice");
      const auto *def = ps_.find_property(p.name);
      if (!def) {
        error(file_, p.loc, "unknown property '" + p.name + "'");
        continue;
      }
      if (!value_matches_type(p.value, def->type))
        error(file_, p.loc, "value " + p.value.to_text() + " does not match the type of '" + p.name + "'");
    }
  }

  std::optional<ResolvedClassifier> resolve(const std::string &ref, const SourceLoc &loc) {
    std::string err;
    auto rc = try_resolve_classifier(ps_, ref, pkg_, &err);
    if (!rc)
      error(file_, loc, err);
    return rc;
  }

  void check_type(const ComponentType &t) {
    ResolvedClassifier self{pkg_, &t, nullptr};
    if (!t.extends.empty()) {
      if (auto base = resolve(t.extends, t.loc)) {
        if (base->impl)
          error(file_, t.loc, "'" + t.name + "' extends an implementation");
        else if (base->kind() != t.kind)
          error(file_, t.loc,
                "'" + t.name + "' (" + std::string(to_string(t.kind)) + ") extends a " +
                    std::string(to_string(base->kind())));
        else if (base->type == &t)
          error(file_, t.loc, "'" + t.name + "' extends itself");
      }
    }
    std::set<std::string> names;
    for (const auto &f : t.features) {
      if (!names.insert(f.name).second)
        error(file_, f.loc, "duplicate feature '" + f.name + "' in " + t.name);
      if (!feature_legal_for(t.kind, f.variant))
        error(file_, f.loc,
              std::string(variant_word(f.variant)) + " '" + f.name + "' is not legal on a " +
                  std::string(to_string(t.kind)));
      if (!f.data_type.empty()) {
        if (f.variant == FeatureVariant::bus_access) {
          if (auto rc = resolve(f.data_type, f.loc); rc && rc->kind() != ComponentKind::bus)
            error(file_, f.loc, "bus access '" + f.name + "' names a non-bus classifier");
        } else if (auto rc = resolve(f.data_type, f.loc); rc && rc->kind() != ComponentKind::data) {
          error(file_, f.loc, "feature '" + f.name + "' names non-data classifier '" + f.data_type + "'");
        }
      } else if (f.variant == FeatureVariant::data_port || f.variant == FeatureVariant::event_data_port ||
                 f.variant == FeatureVariant::parameter) {
        error(file_, f.loc, "feature '" + f.name + "' needs a data classifier");
      }
    }
    auto features = detail::all_features(ps_, self);
    auto find = [&](const std::string &n) -> const Feature * {
      for (auto &[f, p] : features)
        if (f->name == n)
          return f;
      return nullptr;
    };
    for (const auto &fl : t.flows) {
      if (fl.kind != FlowKind::source) {
        const auto *in = find(fl.in_feature);
        if (!in)
          error(file_, fl.loc, "flow '" + fl.name + "' names unknown feature '" + fl.in_feature + "'");
        else if (!in->is_incoming())
          error(file_, fl.loc, "flow '" + fl.name + "' enters through non-incoming '" + fl.in_feature + "'");
      }
      if (fl.kind != FlowKind::sink) {
        const auto *out = find(fl.out_feature);
        if (!out)
          error(file_, fl.loc, "flow '" + fl.name + "' names unknown feature '" + fl.out_feature + "'");
        else if (!out->is_outgoing())
          error(file_, fl.loc, "flow '" + fl.name + "' leaves through non-outgoing '" + fl.out_feature + "'");
      }
    }
    check_properties(t.properties);
  }

  struct End {
    const Feature *feature = nullptr;
    const Package *scope = nullptr;
    bool own = false; // feature of the enclosing component rather than a subcomponent
  };

  std::optional<End> endpoint(const ResolvedClassifier &self,
                              const std::map<std::string, std::optional<ResolvedClassifier>> &subs,
                              const std::string &ref, const SourceLoc &loc, const std::string &conn) {
    auto dot = ref.find('.');
    std::optional<ResolvedClassifier> holder = self;
    std::string fname = ref;
    bool own = true;
    if (dot != std::string::npos) {
      auto it = subs.find(ref.substr(0, dot));
      if (it == subs.end()) {
        error(file_, loc, "connection '" + conn + "' names unknown subcomponent '" + ref.substr(0, dot) + "'");
        return std::nullopt;
      }
      if (!it->second)
        return std::nullopt;
      holder = it->second;
      fname = ref.substr(dot + 1);
      own = false;
    }
    for (auto [f, p] : detail::all_features(ps_, *holder))
      if (f->name == fname)
        return End{f, p, own};
    error(file_, loc, "connection '" + conn + "' names unknown feature '" + ref + "'");
    return std::nullopt;
  }

  void check_impl(const ComponentImplementation &impl) {
    const ComponentType *type = pkg_->find_type(impl.type_name);
    if (!type) {
      error(file_, impl.loc, "implementation '" + impl.full_name() + "' has no type '" + impl.type_name + "'");
      return;
    }
    if (type->kind != impl.kind)
      error(file_, impl.loc,
            "implementation '" + impl.full_name() + "' is a " + std::string(to_string(impl.kind)) +
                " but its type is a " + std::string(to_string(type->kind)));
    ResolvedClassifier self{pkg_, type, &impl};

    std::map<std::string, std::optional<ResolvedClassifier>> subs;
    for (const auto &s : impl.subcomponents) {
      if (subs.count(s.name))
        error(file_, s.loc, "duplicate subcomponent '" + s.name + "' in " + impl.full_name());
      if (!subcomponent_legal_for(impl.kind, s.kind))
        error(file_, s.loc,
              "a " + std::string(to_string(impl.kind)) + " cannot contain " + std::string(to_string(s.kind)) +
                  " '" + s.name + "'");
      auto rc = resolve(s.classifier, s.loc);
      if (rc && rc->kind() != s.kind) {
        error(file_, s.loc,
              "subcomponent '" + s.name + "' is declared " + std::string(to_string(s.kind)) + " but '" +
                  s.classifier + "' is a " + std::string(to_string(rc->kind())));
        rc.reset();
      }
      subs[s.name] = rc;
      check_properties(s.properties);
    }

    std::set<std::string> conn_names;
    std::map<std::string, std::string> driven;
    for (const auto &c : impl.connections) {
      if (!conn_names.insert(c.name).second)
        error(file_, c.loc, "duplicate connection '" + c.name + "' in " + impl.full_name());
      check_properties(c.properties);
      auto src = endpoint(self, subs, c.source, c.loc, c.name);
      auto dst = endpoint(self, subs, c.dest, c.loc, c.name);
      if (!src || !dst)
        continue;
      if (!src->feature->is_port() || !dst->feature->is_port()) {
        error(file_, c.loc, "port connection '" + c.name + "' joins a non-port feature");
        continue;
      }
      if (src->own ? !src->feature->is_incoming() : !src->feature->is_outgoing())
        error(file_, c.loc, "connection '" + c.name + "' reads from '" + c.source + "', which is not a source");
      if (dst->own ? !dst->feature->is_outgoing() : !dst->feature->is_incoming())
        error(file_, c.loc, "connection '" + c.name + "' writes to '" + c.dest + "', which is not a destination");
      if ((src->feature->variant == FeatureVariant::event_port) != (dst->feature->variant == FeatureVariant::event_port))
        error(file_, c.loc, "connection '" + c.name + "' joins an event port to a data-carrying port");
      if (!src->feature->data_type.empty() && !dst->feature->data_type.empty()) {
        auto a = try_resolve_classifier(ps_, src->feature->data_type, src->scope);
        auto b = try_resolve_classifier(ps_, dst->feature->data_type, dst->scope);
        if (a && b && a->qualified_name() != b->qualified_name())
          error(file_, c.loc,
                "connection '" + c.name + "' carries " + a->qualified_name() + " into " + b->qualified_name());
      }
      if (dst->feature->variant == FeatureVariant::data_port) {
        auto [it, fresh] = driven.emplace(c.dest, c.name);
        if (!fresh)
          error(file_, c.loc,
                "data port '" + c.dest + "' is driven by both '" + it->second + "' and '" + c.name + "'");
      }
    }

    for (const auto &f : impl.flows) {
      for (std::size_t i = 0; i < f.segments.size(); ++i) {
        const auto &seg = f.segments[i];
        if (i % 2 == 1) {
          if (!conn_names.count(seg))
            error(file_, f.loc, "end-to-end flow '" + f.name + "' names unknown connection '" + seg + "'");
          continue;
        }
        auto dot = seg.find('.');
        auto it = subs.find(seg.substr(0, dot));
        if (dot == std::string::npos || it == subs.end()) {
          error(file_, f.loc, "end-to-end flow '" + f.name + "' names unknown segment '" + seg + "'");
          continue;
        }
        if (!it->second)
          continue;
        bool found = false;
        for (const auto *spec : detail::all_flows(ps_, *it->second))
          found = found || spec->name == seg.substr(dot + 1);
        if (!found)
          error(file_, f.loc, "end-to-end flow '" + f.name + "' names unknown flow '" + seg + "'");
      }
    }
    check_properties(impl.properties);
  }

  const PackageSet &ps_;
  const Package *pkg_ = nullptr;
  std::string file_;
  Diagnostics diags_;
};

} // namespace

Diagnostics validate(const PackageSet &packages) { return Validator(packages).run(); }

} // namespace uasforge
