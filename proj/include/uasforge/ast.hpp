#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uasforge/source.hpp"

namespace uasforge {

struct ContractAnnex;
struct ClaimAnnex;

enum class ComponentKind { system, process, thread, device, processor, bus, memory, data, subprogram };

std::string_view to_string(ComponentKind kind);
std::optional<ComponentKind> parse_component_kind(std::string_view word);

// ---------------------------------------------------------------------------
// Properties

struct PropertyValue;

struct IntValue {
  std::int64_t value = 0;
  std::string unit; // empty when unitless
  bool operator==(const IntValue &) const = default;
};

struct RangeValue {
  std::int64_t low = 0;
  std::int64_t high = 0;
  bool operator==(const RangeValue &) const = default;
};

struct StringValue {
  std::string value;
  bool operator==(const StringValue &) const = default;
};

struct EnumValue {
  std::string token;
  bool operator==(const EnumValue &) const = default;
};

struct PropertyValue {
  std::variant<IntValue, RangeValue, StringValue, bool, EnumValue, std::vector<PropertyValue>> value;

  const IntValue *as_int() const { return std::get_if<IntValue>(&value); }
  const RangeValue *as_range() const { return std::get_if<RangeValue>(&value); }
  const StringValue *as_string() const { return std::get_if<StringValue>(&value); }
  const bool *as_bool() const { return std::get_if<bool>(&value); }
  const EnumValue *as_enum() const { return std::get_if<EnumValue>(&value); }
  const std::vector<PropertyValue> *as_list() const {
    return std::get_if<std::vector<PropertyValue>>(&value);
  }

  std::string to_text() const;
  friend bool operator==(const PropertyValue &a, const PropertyValue &b);
};

struct PropertyAssociation {
  std::string name; // `Security::Encrypted`, or bare `Period`
  PropertyValue value;
  SourceLoc loc;
  bool operator==(const PropertyAssociation &) const = default;
};

// ---------------------------------------------------------------------------
// Features, flows, connections

enum class FeatureVariant { data_port, event_port, event_data_port, parameter, bus_access, data_access };
enum class Direction { none, in, out, in_out };
enum class AccessKind { none, provides, required };

std::string_view to_string(Direction d);

struct Feature {
  std::string name;
  FeatureVariant variant = FeatureVariant::data_port;
  Direction direction = Direction::none;
  AccessKind access = AccessKind::none;
  std::string data_type; // classifier reference, may be empty for event ports / access
  SourceLoc loc;

  bool is_port() const { return variant != FeatureVariant::bus_access && variant != FeatureVariant::data_access; }
  bool is_incoming() const { return direction == Direction::in || direction == Direction::in_out; }
  bool is_outgoing() const { return direction == Direction::out || direction == Direction::in_out; }
  bool operator==(const Feature &) const = default;
};

enum class FlowKind { source, sink, path };

struct FlowSpec {
  std::string name;
  FlowKind kind = FlowKind::path;
  std::string in_feature;  // sink, path
  std::string out_feature; // source, path
  SourceLoc loc;
  bool operator==(const FlowSpec &) const = default;
};

struct EndToEndFlow {
  std::string name;
  std::vector<std::string> segments; // alternating subcomponent flow refs and connections
  SourceLoc loc;
  bool operator==(const EndToEndFlow &) const = default;
};

struct Subcomponent {
  std::string name;
  ComponentKind kind = ComponentKind::system;
  std::string classifier;
  std::vector<PropertyAssociation> properties;
  SourceLoc loc;
  bool operator==(const Subcomponent &) const = default;
};

struct Connection {
  std::string name;
  std::string source; // `feature` or `sub.feature`
  std::string dest;
  std::vector<PropertyAssociation> properties;
  SourceLoc loc;
  bool operator==(const Connection &) const = default;
};

/// An `annex <language> {** ... **};` clause. The body is kept verbatim;
/// sub-parsers fill in `contract` / `claims` when a package set is loaded.
struct AnnexClause {
  std::string language;
  std::string body;
  SourceLoc loc;
  std::uint32_t body_offset = 0; // file offset of the first body byte
  std::shared_ptr<const ContractAnnex> contract;
  std::shared_ptr<const ClaimAnnex> claims;

  friend bool operator==(const AnnexClause &a, const AnnexClause &b) {
    return a.language == b.language && a.body == b.body;
  }
};

// ---------------------------------------------------------------------------
// Classifiers

struct ComponentType {
  ComponentKind kind = ComponentKind::system;
  std::string name;
  std::string extends;
  std::vector<Feature> features;
  std::vector<FlowSpec> flows;
  std::vector<PropertyAssociation> properties;
  std::vector<AnnexClause> annexes;
  SourceLoc loc;
  bool operator==(const ComponentType &) const = default;
};

struct ComponentImplementation {
  ComponentKind kind = ComponentKind::system;
  std::string type_name;
  std::string impl_name;
  std::vector<Subcomponent> subcomponents;
  std::vector<Connection> connections;
  std::vector<EndToEndFlow> flows;
  std::vector<PropertyAssociation> properties;
  std::vector<AnnexClause> annexes;
  SourceLoc loc;

  std::string full_name() const { return type_name + "." + impl_name; }
  bool operator==(const ComponentImplementation &) const = default;
};

using Declaration = std::variant<ComponentType, ComponentImplementation>;

struct Package {
  std::string name;
  bool is_public = true;
  std::vector<std::string> with_clauses;
  std::vector<Declaration> declarations; // declaration order preserved
  SourceLoc loc;
  std::string file;

  const ComponentType *find_type(std::string_view name) const;
  const ComponentImplementation *find_implementation(std::string_view full_name) const;

  friend bool operator==(const Package &a, const Package &b) {
    return a.name == b.name && a.is_public == b.is_public && a.with_clauses == b.with_clauses &&
           a.declarations == b.declarations;
  }
};

// ---------------------------------------------------------------------------
// Property sets

enum class PropertyBaseType { aadlboolean, aadlinteger, aadlstring, enumeration, range };

struct PropertyType {
  PropertyBaseType base = PropertyBaseType::aadlinteger;
  bool is_list = false;
  std::vector<std::string> enumerators;
  std::string units; // `aadlinteger units ms`
  bool operator==(const PropertyType &) const = default;
};

struct PropertyDefinition {
  std::string name;
  PropertyType type;
  SourceLoc loc;
  bool operator==(const PropertyDefinition &) const = default;
};

struct PropertySet {
  std::string name;
  std::vector<PropertyDefinition> definitions;
  SourceLoc loc;
  std::string file;

  const PropertyDefinition *find(std::string_view name) const;
  friend bool operator==(const PropertySet &a, const PropertySet &b) {
    return a.name == b.name && a.definitions == b.definitions;
  }
};

using ModelUnit = std::variant<Package, PropertySet>;

struct ModelFile {
  std::vector<ModelUnit> units;
  bool operator==(const ModelFile &) const = default;
};

/// True when `value` has the shape `type` declares.
bool value_matches_type(const PropertyValue &value, const PropertyType &type);

} // namespace uasforge
