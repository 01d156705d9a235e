#include "uasforge/ast.hpp"

#include <array>
#include <sstream>

#include "uasforge/lexer.hpp"

namespace uasforge {

namespace {
constexpr std::array<std::string_view, 9> kKindNames = {
    "system", "process", "thread", "device", "processor", "bus", "memory", "data", "subprogram"};
}

std::string_view to_string(ComponentKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<ComponentKind> parse_component_kind(std::string_view word) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (iequals(kKindNames[i], word))
      return static_cast<ComponentKind>(i);
  return std::nullopt;
}

std::string_view to_string(Direction d) {
  switch (d) {
  case Direction::in: return "in";
  case Direction::out: return "out";
  case Direction::in_out: return "in out";
  case Direction::none: break;
  }
  return "";
}

std::string PropertyValue::to_text() const {
  struct Printer {
    std::string operator()(const IntValue &v) const {
      return v.unit.empty() ? std::to_string(v.value) : std::to_string(v.value) + " " + v.unit;
    }
    std::string operator()(const RangeValue &v) const {
      return std::to_string(v.low) + " .. " + std::to_string(v.high);
    }
    std::string operator()(const StringValue &v) const {
      std::string out = "\"";
      for (char c : v.value) {
        if (c == '"' || c == '\\')
          out += '\\';
        out += c;
      }
      return out + "\"";
    }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const EnumValue &v) const { return v.token; }
    std::string operator()(const std::vector<PropertyValue> &items) const {
      std::string out = "(";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
          out += ", ";
        out += items[i].to_text();
      }
      return out + ")";
    }
  };
  return std::visit(Printer{}, value);
}

bool operator==(const PropertyValue &a, const PropertyValue &b) {
  if (a.value.index() != b.value.index())
    return false;
  if (auto la = a.as_list()) {
    const auto &lb = *b.as_list();
    if (la->size() != lb.size())
      return false;
    for (std::size_t i = 0; i < la->size(); ++i)
      if (!((*la)[i] == lb[i]))
        return false;
    return true;
  }
  return std::visit(
      [&](const auto &x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::vector<PropertyValue>>)
          return false;
        else
          return x == std::get<T>(b.value);
      },
      a.value);
}

const ComponentType *Package::find_type(std::string_view n) const {
  for (const auto &d : declarations)
    if (auto t = std::get_if<ComponentType>(&d); t && t->name == n)
      return t;
  return nullptr;
}

const ComponentImplementation *Package::find_implementation(std::string_view full) const {
  for (const auto &d : declarations)
    if (auto i = std::get_if<ComponentImplementation>(&d); i && i->full_name() == full)
      return i;
  return nullptr;
}

const PropertyDefinition *PropertySet::find(std::string_view n) const {
  for (const auto &d : definitions)
    if (d.name == n)
      return &d;
  return nullptr;
}

namespace {
bool scalar_matches(const PropertyValue &value, const PropertyType &type) {
  switch (type.base) {
  case PropertyBaseType::aadlboolean:
    return value.as_bool() != nullptr;
  case PropertyBaseType::aadlinteger: {
    const auto *i = value.as_int();
    if (!i)
      return false;
    return i->unit.empty() || i->unit == type.units;
  }
  case PropertyBaseType::aadlstring:
    return value.as_string() != nullptr;
  case PropertyBaseType::enumeration: {
    const auto *e = value.as_enum();
    if (!e)
      return false;
    for (const auto &lit : type.enumerators)
      if (iequals(lit, e->token))
        return true;
    return false;
  }
  case PropertyBaseType::range: {
    const auto *r = value.as_range();
    return r && r->low <= r->high;
  }
  }
  return false;
}
} // namespace

bool value_matches_type(const PropertyValue &value, const PropertyType &type) {
  if (type.is_list) {
    const auto *items = value.as_list();
    if (!items)
      return false;
    for (const auto &item : *items)
      if (!scalar_matches(item, type))
        return false;
    return true;
  }
  return scalar_matches(value, type);
}

} // namespace uasforge
