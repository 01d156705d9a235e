#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/ast.hpp"
#include "uasforge/error.hpp"
#include "uasforge/source.hpp"

namespace uasforge {

/// All packages and property sets loaded for one analysis run. Annex bodies
/// are sub-parsed when a file is added. Element addresses are stable.
class PackageSet {
public:
  PackageSet();

  Diagnostics add_file(const std::string &path);
  Diagnostics add_text(std::string path, std::string text);
  Diagnostics add_source(std::shared_ptr<const SourceUnit> unit);

  const std::deque<Package> &packages() const { return packages_; }
  const std::deque<PropertySet> &property_sets() const { return property_sets_; }
  const std::vector<std::shared_ptr<const SourceUnit>> &sources() const { return sources_; }

  const Package *find_package(std::string_view name) const;
  /// `Set::Name` looks in the named property set; a bare name looks in the
  /// predeclared standard set (case-insensitive).
  const PropertyDefinition *find_property(std::string_view name) const;

private:
  std::deque<Package> packages_;
  std::deque<PropertySet> property_sets_;
  PropertySet standard_;
  std::vector<std::shared_ptr<const SourceUnit>> sources_;
};

/// Text of the predeclared property set providing Period, Priority,
/// Stack_Size, scheduling_protocol and Dispatch_Protocol.
std::string_view standard_property_set_text();

struct ResolvedClassifier {
  const Package *package = nullptr;
  const ComponentType *type = nullptr;
  const ComponentImplementation *impl = nullptr;

  bool valid() const { return type != nullptr; }
  ComponentKind kind() const { return type->kind; }
  /// `Pkg::Type` or `Pkg::Type.impl`.
  std::string qualified_name() const;
  /// The type identifier used for generated names (no package, no `.impl`).
  const std::string &type_name() const { return type->name; }
};

/// Looks up `Pkg::Type`, `Pkg::Type.impl`, or an unqualified name. For
/// unqualified names the `context` package is searched first, then every
/// package; more than one global match is ambiguous.
/// Throws Error("NotFound") or Error("Ambiguous").
ResolvedClassifier resolve_classifier(const PackageSet &packages, std::string_view name,
                                      const Package *context = nullptr);

/// Non-throwing variant used by validation.
std::optional<ResolvedClassifier> try_resolve_classifier(const PackageSet &packages, std::string_view name,
                                                         const Package *context, std::string *error = nullptr);

/// Every legality violation across the loaded packages; empty means legal.
Diagnostics validate(const PackageSet &packages);

bool feature_legal_for(ComponentKind kind, FeatureVariant variant);
bool subcomponent_legal_for(ComponentKind parent, ComponentKind child);

// ---------------------------------------------------------------------------
// Data classifiers

/// Property on a data classifier: implementation, then type, then the
/// type it extends (one level).
std::optional<PropertyValue> data_property(const PackageSet &packages, const ResolvedClassifier &data,
                                           std::string_view name);
/// Data subcomponents of a data implementation, i.e. struct fields.
std::vector<const Subcomponent *> data_fields(const ResolvedClassifier &data);
/// The classifier itself or, one level up, the classifier it extends.
std::vector<ResolvedClassifier> data_lineage(const PackageSet &packages, const ResolvedClassifier &data);

// ---------------------------------------------------------------------------
// Instance model

struct ComponentInstance;

struct FeatureInstance {
  std::string name;
  std::string path;
  const Feature *decl = nullptr;
  const ComponentInstance *owner = nullptr;
  std::optional<ResolvedClassifier> data_type;
};

struct ComponentInstance {
  std::string name;
  std::string path;
  ComponentKind kind = ComponentKind::system;
  ResolvedClassifier classifier;
  const Subcomponent *decl = nullptr; // null for the root
  const ComponentInstance *parent = nullptr;
  std::vector<PropertyAssociation> properties; // resolved, nearest wins
  std::vector<FeatureInstance> features;
  std::vector<std::unique_ptr<ComponentInstance>> children;

  const FeatureInstance *feature(std::string_view name) const;
  const ComponentInstance *child(std::string_view name) const;
  /// Implementation connections absent: data passes through the component
  /// itself rather than through modeled internals.
  bool routes_internally() const;
};

struct ConnectionInstance {
  std::string name;
  std::string path; // owner path + "." + name
  const ComponentInstance *owner = nullptr;
  const FeatureInstance *source = nullptr;
  const FeatureInstance *dest = nullptr;
  std::optional<ResolvedClassifier> data_type;
  std::vector<PropertyAssociation> properties;
  const Connection *decl = nullptr;
};

/// Flattened instance tree. Immutable once built; it keeps a pointer to the
/// package set, which must outlive it.
class InstanceModel {
public:
  const ComponentInstance &root() const { return *root_; }
  const std::vector<ConnectionInstance> &connections() const { return connections_; }
  const PackageSet &packages() const { return *packages_; }

  const ComponentInstance *component(std::string_view path) const;
  const FeatureInstance *feature(std::string_view path) const;
  /// Pre-order, declaration order.
  std::vector<const ComponentInstance *> components() const;

  /// Canonical dump used for structural comparison.
  std::string describe() const;

private:
  friend InstanceModel instantiate(const PackageSet &, std::string_view);
  const PackageSet *packages_ = nullptr;
  std::unique_ptr<ComponentInstance> root_;
  std::vector<ConnectionInstance> connections_;
  std::map<std::string, const ComponentInstance *, std::less<>> by_path_;
  std::map<std::string, const FeatureInstance *, std::less<>> features_by_path_;
};

/// Builds the instance tree for a system implementation. Throws
/// DiagnosticError("ValidationFailed"), Error("RecursiveClassifier"),
/// Error("NotFound"/"Ambiguous"), or Error("NotASystemImplementation").
InstanceModel instantiate(const PackageSet &packages, std::string_view root);

/// Resolved value or nullopt. Property names compare case-insensitively.
std::optional<PropertyValue> lookup_property(const ComponentInstance &instance, std::string_view name);
const PropertyValue *find_association(const std::vector<PropertyAssociation> &props, std::string_view name);

/// Boolean property helper: true only if present and `true`.
bool property_is_true(const ComponentInstance &instance, std::string_view name);

// ---------------------------------------------------------------------------
// Connection graph

enum class EdgeKind { connection, internal };

struct GraphEdge {
  int from = -1;
  int to = -1;
  EdgeKind kind = EdgeKind::connection;
  const ConnectionInstance *connection = nullptr;
};

/// Directed graph over instance port features. Nodes are sorted by path;
/// successor lists are sorted by node index.
struct ConnectionGraph {
  std::vector<const FeatureInstance *> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<int>> successors;

  int index_of(std::string_view feature_path) const;
  bool has_edge(int from, int to) const;
};

/// Connection instances plus, for each component that routes internally,
/// edges from incoming to outgoing ports (restricted to declared flow paths
/// when the component type declares flow specs).
ConnectionGraph connection_graph(const InstanceModel &model);

} // namespace uasforge
