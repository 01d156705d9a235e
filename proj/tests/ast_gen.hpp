#pragma once

#include <random>

#include "uasforge/ast.hpp"
#include "uasforge/lexer.hpp"

namespace support {

using namespace uasforge;

// Random well-formed ASTs.
struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool coin() { return pick(2) == 0; }

  std::string ident() {
    static const std::string first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    static const std::string rest = "abcdefghijklmnopqrstuvwxyz0123456789_";
    for (;;) {
      std::string s(1, first[pick(static_cast<int>(first.size()))]);
      for (int n = pick(7); n > 0; --n)
        s += rest[pick(static_cast<int>(rest.size()))];
      if (!is_reserved_word(s))
        return s;
    }
  }
  std::string qualified() { return coin() ? ident() : ident() + "::" + ident(); }
  std::string classifier() { return qualified() + (coin() ? "." + ident() : ""); }
  std::string dotted() { return coin() ? ident() : ident() + "." + ident(); }

  PropertyValue value(int depth = 0) {
    PropertyValue v;
    switch (pick(depth < 2 ? 6 : 5)) {
    case 0: v.value = IntValue{pick(2000001) - 1000000, coin() ? "" : ident()}; break;
    case 1: {
      std::int64_t lo = pick(1000) - 500;
      v.value = RangeValue{lo, lo + pick(1000)};
      break;
    }
    case 2: {
      std::string s;
      static const std::string chars = "ab c\"\\-*/x9";
      for (int n = pick(8); n > 0; --n)
        s += chars[pick(static_cast<int>(chars.size()))];
      v.value = StringValue{s};
      break;
    }
    case 3: v.value = coin(); break;
    case 4: v.value = EnumValue{ident()}; break;
    default: {
      std::vector<PropertyValue> items;
      for (int n = pick(4); n > 0; --n)
        items.push_back(value(depth + 1));
      v.value = std::move(items);
    }
    }
    return v;
  }

  std::vector<PropertyAssociation> props() {
    std::vector<PropertyAssociation> out;
    for (int n = pick(3); n > 0; --n)
      out.push_back({qualified(), value(), {}});
    return out;
  }

  Feature feature() {
    Feature f;
    f.name = ident();
    f.variant = static_cast<FeatureVariant>(pick(6));
    if (f.variant == FeatureVariant::bus_access || f.variant == FeatureVariant::data_access) {
      f.access = coin() ? AccessKind::provides : AccessKind::required;
      if (coin())
        f.data_type = classifier();
    } else {
      f.direction = static_cast<Direction>(1 + pick(3));
      if (f.variant != FeatureVariant::event_port)
        f.data_type = classifier();
    }
    return f;
  }

  std::vector<AnnexClause> annexes() {
    std::vector<AnnexClause> out;
    for (int n = pick(2); n > 0; --n) {
      AnnexClause a;
      a.language = ident();
      a.body = " " + ident() + " * " + ident() + "; ";
      out.push_back(a);
    }
    return out;
  }

  ComponentType type() {
    ComponentType t;
    t.kind = static_cast<ComponentKind>(pick(9));
    t.name = ident();
    if (coin())
      t.extends = classifier();
    for (int n = pick(4); n > 0; --n)
      t.features.push_back(feature());
    for (int n = pick(3); n > 0; --n) {
      FlowSpec f;
      f.name = ident();
      f.kind = static_cast<FlowKind>(pick(3));
      if (f.kind != FlowKind::source)
        f.in_feature = ident();
      if (f.kind != FlowKind::sink)
        f.out_feature = ident();
      t.flows.push_back(f);
    }
    t.properties = props();
    t.annexes = annexes();
    return t;
  }

  ComponentImplementation impl() {
    ComponentImplementation i;
    i.kind = static_cast<ComponentKind>(pick(9));
    i.type_name = ident();
    i.impl_name = ident();
    for (int n = pick(4); n > 0; --n)
      i.subcomponents.push_back({ident(), static_cast<ComponentKind>(pick(9)), classifier(), props(), {}});
    for (int n = pick(4); n > 0; --n)
      i.connections.push_back({ident(), dotted(), dotted(), props(), {}});
    for (int n = pick(2); n > 0; --n) {
      EndToEndFlow f;
      f.name = ident();
      for (int s = 1 + pick(4); s > 0; --s)
        f.segments.push_back(dotted());
      i.flows.push_back(f);
    }
    i.properties = props();
    i.annexes = annexes();
    return i;
  }

  PropertySet property_set() {
    PropertySet s;
    s.name = ident();
    for (int n = pick(4); n > 0; --n) {
      PropertyDefinition d;
      d.name = ident();
      d.type.base = static_cast<PropertyBaseType>(pick(5));
      d.type.is_list = coin();
      if (d.type.base == PropertyBaseType::enumeration)
        for (int e = 1 + pick(3); e > 0; --e)
          d.type.enumerators.push_back(ident());
      if (d.type.base == PropertyBaseType::aadlinteger && coin())
        d.type.units = ident();
      s.definitions.push_back(d);
    }
    return s;
  }

  ModelFile file() {
    ModelFile f;
    for (int n = 1 + pick(3); n > 0; --n) {
      if (pick(4) == 0) {
        f.units.push_back(property_set());
        continue;
      }
      Package p;
      p.name = qualified();
      p.is_public = coin();
      for (int w = pick(3); w > 0; --w)
        p.with_clauses.push_back(qualified());
      for (int d = pick(5); d > 0; --d) {
        if (coin())
          p.declarations.push_back(type());
        else
          p.declarations.push_back(impl());
      }
      f.units.push_back(std::move(p));
    }
    return f;
  }
};


} // namespace support
