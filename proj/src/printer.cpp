#include <sstream>

#include "uasforge/parser.hpp"

namespace uasforge {

namespace {

void print_props(std::ostream &out, const std::vector<PropertyAssociation> &props, const char *indent) {
  for (const auto &p : props)
    out << indent << p.name << " => " << p.value.to_text() << ";\n";
}

std::string inline_props(const std::vector<PropertyAssociation> &props) {
  if (props.empty())
    return "";
  std::string out = " {";
  for (const auto &p : props)
    out += " " + p.name + " => " + p.value.to_text() + ";";
  return out + " }";
}

void print_feature(std::ostream &out, const Feature &f) {
  out << "      " << f.name << ": ";
  switch (f.variant) {
  case FeatureVariant::bus_access:
  case FeatureVariant::data_access:
    out << (f.access == AccessKind::provides ? "provides " : "requires ")
        << (f.variant == FeatureVariant::bus_access ? "bus access" : "data access");
    if (!f.data_type.empty())
      out << ' ' << f.data_type;
    break;
  case FeatureVariant::data_port:
    out << to_string(f.direction) << " data port " << f.data_type;
    break;
  case FeatureVariant::event_port:
    out << to_string(f.direction) << " event port";
    break;
  case FeatureVariant::event_data_port:
    out << to_string(f.direction) << " event data port " << f.data_type;
    break;
  case FeatureVariant::parameter:
    out << to_string(f.direction) << " parameter " << f.data_type;
    break;
  }
  out << ";\n";
}

void print_flow(std::ostream &out, const FlowSpec &fs) {
  out << "      " << fs.name << ": flow ";
  switch (fs.kind) {
  case FlowKind::source: out << "source " << fs.out_feature; break;
  case FlowKind::sink: out << "sink " << fs.in_feature; break;
  case FlowKind::path: out << "path " << fs.in_feature << " -> " << fs.out_feature; break;
  }
  out << ";\n";
}

void print_annexes(std::ostream &out, const std::vector<AnnexClause> &annexes) {
  for (const auto &a : annexes)
    out << "    annex " << a.language << " {**" << a.body << "**};\n";
}

void print_type(std::ostream &out, const ComponentType &t) {
  out << "  " << to_string(t.kind) << ' ' << t.name;
  if (!t.extends.empty())
    out << " extends " << t.extends;
  out << '\n';
  if (!t.features.empty()) {
    out << "    features\n";
    for (const auto &f : t.features)
      print_feature(out, f);
  }
  if (!t.flows.empty()) {
    out << "    flows\n";
    for (const auto &f : t.flows)
      print_flow(out, f);
  }
  if (!t.properties.empty()) {
    out << "    properties\n";
    print_props(out, t.properties, "      ");
  }
  print_annexes(out, t.annexes);
  out << "  end " << t.name << ";\n";
}

void print_impl(std::ostream &out, const ComponentImplementation &impl) {
  out << "  " << to_string(impl.kind) << " implementation " << impl.full_name() << '\n';
  if (!impl.subcomponents.empty()) {
    out << "    subcomponents\n";
    for (const auto &s : impl.subcomponents)
      out << "      " << s.name << ": " << to_string(s.kind) << ' ' << s.classifier << inline_props(s.properties)
          << ";\n";
  }
  if (!impl.connections.empty()) {
    out << "    connections\n";
    for (const auto &c : impl.connections)
      out << "      " << c.name << ": port " << c.source << " -> " << c.dest << inline_props(c.properties) << ";\n";
  }
  if (!impl.flows.empty()) {
    out << "    flows\n";
    for (const auto &f : impl.flows) {
      out << "      " << f.name << ": end to end flow ";
      for (std::size_t i = 0; i < f.segments.size(); ++i)
        out << (i ? " -> " : "") << f.segments[i];
      out << ";\n";
    }
  }
  if (!impl.properties.empty()) {
    out << "    properties\n";
    print_props(out, impl.properties, "      ");
  }
  print_annexes(out, impl.annexes);
  out << "  end " << impl.full_name() << ";\n";
}

std::string type_text(const PropertyType &t) {
  std::string out = t.is_list ? "list of " : "";
  switch (t.base) {
  case PropertyBaseType::aadlboolean: out += "aadlboolean"; break;
  case PropertyBaseType::aadlinteger:
    out += "aadlinteger";
    if (!t.units.empty())
      out += " units " + t.units;
    break;
  case PropertyBaseType::aadlstring: out += "aadlstring"; break;
  case PropertyBaseType::range: out += "range of aadlinteger"; break;
  case PropertyBaseType::enumeration:
    out += "enumeration (";
    for (std::size_t i = 0; i < t.enumerators.size(); ++i)
      out += (i ? ", " : "") + t.enumerators[i];
    out += ")";
    break;
  }
  return out;
}

} // namespace

std::string pretty_print(const Package &pkg) {
  std::ostringstream out;
  out << "package " << pkg.name << (pkg.is_public ? " public" : "") << '\n';
  if (!pkg.with_clauses.empty()) {
    out << "  with ";
    for (std::size_t i = 0; i < pkg.with_clauses.size(); ++i)
      out << (i ? ", " : "") << pkg.with_clauses[i];
    out << ";\n";
  }
  for (const auto &decl : pkg.declarations) {
    out << '\n';
    if (const auto *t = std::get_if<ComponentType>(&decl))
      print_type(out, *t);
    else
      print_impl(out, std::get<ComponentImplementation>(decl));
  }
  if (!pkg.declarations.empty())
    out << '\n';
  out << "end " << pkg.name << ";\n";
  return out.str();
}

std::string pretty_print(const PropertySet &set) {
  std::ostringstream out;
  out << "property set " << set.name << " is\n";
  for (const auto &d : set.definitions)
    out << "  " << d.name << ": " << type_text(d.type) << ";\n";
  out << "end " << set.name << ";\n";
  return out.str();
}

std::string pretty_print(const ModelFile &file) {
  std::string out;
  for (const auto &unit : file.units) {
    if (!out.empty())
      out += '\n';
    out += std::visit([](const auto &u) { return pretty_print(u); }, unit);
  }
  return out;
}

} // namespace uasforge
