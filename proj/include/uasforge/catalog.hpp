#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/contract.hpp"

namespace uasforge {

/// Parameterised safety property. `expr` uses `{param}` placeholders.
struct PropertyTemplate {
  std::string name;
  std::string description;
  std::vector<std::string> params;
  std::string expr;

  /// Throws Error("ConfigError") on a missing or unknown argument.
  std::string instantiate(const std::map<std::string, std::string> &args) const;
};

/// A template applied to one component.
struct PropertyCheck {
  std::string name;
  std::string template_name;
  std::string component_path;
  std::map<std::string, std::string> args;
};

struct PropertyCatalog {
  std::vector<PropertyTemplate> templates;
  std::vector<PropertyCheck> checks;

  const PropertyTemplate *find(std::string_view name) const;
  /// One extra obligation per check. Throws Error("ConfigError").
  std::vector<CompileOptions::Extra> extras() const;
};

/// Throws Error("ConfigError").
PropertyCatalog parse_property_catalog(std::string_view json_text);
PropertyCatalog load_property_catalog(const std::string &path);

} // namespace uasforge
