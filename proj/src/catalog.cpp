#include "uasforge/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "uasforge/error.hpp"

namespace uasforge {

std::string PropertyTemplate::instantiate(const std::map<std::string, std::string> &args) const {
  for (const auto &[k, v] : args)
    if (std::find(params.begin(), params.end(), k) == params.end())
      throw Error("ConfigError", "template '" + name + "' has no parameter '" + k + "'");
  std::string out;
  for (std::size_t i = 0; i < expr.size();) {
    if (expr[i] != '{') {
      out += expr[i++];
      continue;
    }
    auto end = expr.find('}', i);
    if (end == std::string::npos)
      throw Error("ConfigError", "template '" + name + "': unterminated placeholder");
    const std::string key = expr.substr(i + 1, end - i - 1);
    auto it = args.find(key);
    if (it == args.end())
      throw Error("ConfigError", "template '" + name + "': no value for '" + key + "'");
    out += it->second;
    i = end + 1;
  }
  return out;
}

const PropertyTemplate *PropertyCatalog::find(std::string_view name) const {
  for (const auto &t : templates)
    if (t.name == name)
      return &t;
  return nullptr;
}

std::vector<CompileOptions::Extra> PropertyCatalog::extras() const {
  std::vector<CompileOptions::Extra> out;
  for (const auto &c : checks) {
    const auto *t = find(c.template_name);
    if (!t)
      throw Error("ConfigError", "property check '" + c.name + "' uses unknown template '" + c.template_name + "'");
    out.push_back({c.component_path, c.name, t->instantiate(c.args)});
  }
  return out;
}

PropertyCatalog parse_property_catalog(std::string_view json_text) {
  using nlohmann::json;
  PropertyCatalog cat;
  try {
    const json j = json::parse(json_text);
    std::set<std::string> seen;
    for (const auto &t : j.value("templates", json::array())) {
      PropertyTemplate pt;
      pt.name = t.at("name").get<std::string>();
      pt.description = t.value("description", "");
      pt.params = t.value("params", std::vector<std::string>{});
      pt.expr = t.at("expr").get<std::string>();
      if (!seen.insert(pt.name).second)
        throw Error("ConfigError", "duplicate template '" + pt.name + "'");
      cat.templates.push_back(std::move(pt));
    }
    for (const auto &c : j.value("checks", json::array())) {
      PropertyCheck pc;
      pc.template_name = c.at("template").get<std::string>();
      pc.component_path = c.at("component").get<std::string>();
      pc.name = c.value("name", pc.template_name + "_" + std::to_string(cat.checks.size()));
      pc.args = c.value("args", std::map<std::string, std::string>{});
      cat.checks.push_back(std::move(pc));
    }
  } catch (const json::exception &e) {
    throw Error("ConfigError", std::string("invalid property catalog: ") + e.what());
  }
  return cat;
}

PropertyCatalog load_property_catalog(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("ConfigError", "cannot read property catalog '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_property_catalog(s.str());
}

} // namespace uasforge
