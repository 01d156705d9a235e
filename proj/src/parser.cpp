#include "uasforge/parser.hpp"

#include <charconv>
#include <memory>

namespace uasforge {

namespace {

struct SyntaxError {};

class Parser {
public:
  Parser(const std::vector<Token> &tokens, const SourceUnit *unit) : toks_(tokens), unit_(unit) {}

  Diagnostics take_diagnostics() { return std::move(diags_); }

  ModelFile parse_file() {
    ModelFile file;
    while (!at_eof()) {
      if (peek().is_keyword("package")) {
        if (auto pkg = parse_package_unit())
          file.units.emplace_back(std::move(*pkg));
      } else if (peek().is_keyword("property")) {
        if (auto set = parse_property_set())
          file.units.emplace_back(std::move(*set));
      } else {
        error_here("expected 'package' or 'property set'");
        do
          advance();
        while (!at_eof() && !peek().is_keyword("package") && !peek().is_keyword("property"));
      }
    }
    return file;
  }

  std::optional<Package> parse_package_unit() {
    try {
      return parse_package_body();
    } catch (const SyntaxError &) {
      // Skip to the next top-level unit.
      while (!at_eof() && !peek().is_keyword("package") && !peek().is_keyword("property"))
        advance();
      return std::nullopt;
    }
  }

  bool at_eof() const { return peek().kind == TokenKind::end_of_file; }

private:
  // -- token helpers --------------------------------------------------------

  const Token &peek(std::size_t ahead = 0) const {
    const auto i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token &advance() {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return t;
  }

  void error_at(const Token &tok, std::string msg) {
    Diagnostic d;
    d.message = std::move(msg);
    d.span = tok.loc;
    if (unit_)
      d.file = unit_->path();
    diags_.push_back(std::move(d));
  }

  void error_here(std::string msg) {
    const Token &t = peek();
    std::string found = t.kind == TokenKind::end_of_file ? "end of file" : "'" + t.lexeme + "'";
    error_at(t, msg + ", found " + found);
  }

  [[noreturn]] void fail(std::string expected) {
    error_here("expected " + expected);
    throw SyntaxError{};
  }

  bool accept_symbol(std::string_view s) {
    if (peek().is_symbol(s)) {
      advance();
      return true;
    }
    return false;
  }

  bool accept_keyword(std::string_view k) {
    if (peek().is_keyword(k)) {
      advance();
      return true;
    }
    return false;
  }

  const Token &expect_symbol(std::string_view s) {
    if (!peek().is_symbol(s))
      fail("'" + std::string(s) + "'");
    return advance();
  }

  const Token &expect_keyword(std::string_view k) {
    if (!peek().is_keyword(k))
      fail("'" + std::string(k) + "'");
    return advance();
  }

  std::string expect_ident(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::identifier)
      fail(std::string(what));
    return advance().lexeme;
  }

  /// ident { '::' ident }
  /// Reserved words may act as qualifiers (`Data::Range`).
  std::string expect_qualifier_or_ident() {
    if (peek().kind == TokenKind::keyword && peek(1).is_symbol("::"))
      return advance().lexeme;
    return expect_ident();
  }

  std::string expect_set_name() {
    if (peek().kind == TokenKind::keyword)
      return advance().lexeme;
    return expect_ident("property set name");
  }

  std::string parse_qualified() {
    std::string name = expect_qualifier_or_ident();
    while (peek().is_symbol("::")) {
      advance();
      name += "::" + expect_ident();
    }
    return name;
  }

  /// qualified [ '.' ident ]
  std::string parse_classifier_ref() {
    std::string name = parse_qualified();
    if (peek().is_symbol(".") && peek(1).kind == TokenKind::identifier) {
      advance();
      name += "." + advance().lexeme;
    }
    return name;
  }

  /// Skip to just past the next ';' (statement-level resynchronization).
  void resync() {
    while (!at_eof()) {
      if (peek().is_symbol(";")) {
        advance();
        return;
      }
      if (is_section_start() || peek().is_keyword("end"))
        return;
      advance();
    }
  }

  bool is_section_start() const {
    const Token &t = peek();
    return t.is_keyword("features") || t.is_keyword("flows") || t.is_keyword("properties") ||
           t.is_keyword("subcomponents") || t.is_keyword("connections") || t.is_keyword("annex");
  }

  template <class F> void parse_items(F &&item) {
    while (peek().kind == TokenKind::identifier ||
           (peek().kind == TokenKind::keyword && peek(1).is_symbol("::"))) {
      const auto before = pos_;
      try {
        item();
      } catch (const SyntaxError &) {
        resync();
        if (pos_ == before)
          advance();
      }
    }
  }

  // -- packages -------------------------------------------------------------

  Package parse_package_body() {
    Package pkg;
    pkg.loc = expect_keyword("package").loc;
    if (unit_)
      pkg.file = unit_->path();
    pkg.name = parse_qualified();
    pkg.is_public = false;
    if (accept_keyword("public"))
      pkg.is_public = true;
    else
      accept_symbol(";");

    while (peek().is_keyword("with")) {
      advance();
      pkg.with_clauses.push_back(parse_qualified());
      while (accept_symbol(","))
        pkg.with_clauses.push_back(parse_qualified());
      expect_symbol(";");
    }

    while (!peek().is_keyword("end")) {
      if (at_eof())
        fail("'end " + pkg.name + ";'");
      const auto kind = parse_component_kind(peek().lexeme);
      if (peek().kind != TokenKind::keyword || !kind) {
        error_here("expected component declaration");
        // Skip to the next declaration or the package end.
        advance();
        while (!at_eof() && !peek().is_keyword("end") &&
               !(peek().kind == TokenKind::keyword && parse_component_kind(peek().lexeme)))
          advance();
        continue;
      }
      const auto before = pos_;
      try {
        pkg.declarations.push_back(parse_declaration(*kind));
      } catch (const SyntaxError &) {
        recover_declaration();
        if (pos_ == before)
          advance();
      }
    }
    expect_keyword("end");
    const Token &end_name = peek();
    const auto closing = parse_qualified();
    if (closing != pkg.name)
      error_at(end_name, "package end name '" + closing + "' does not match '" + pkg.name + "'");
    expect_symbol(";");
    return pkg;
  }

  void recover_declaration() {
    // Advance to the `end X;` closing the broken declaration.
    while (!at_eof()) {
      if (peek().is_keyword("end") && peek(1).kind == TokenKind::identifier) {
        std::size_t i = 2;
        while (peek(i).is_symbol(".") || peek(i).is_symbol("::") || peek(i).kind == TokenKind::identifier)
          ++i;
        if (peek(i).is_symbol(";") && !peek(i + 1).is(TokenKind::end_of_file)) {
          // Only treat it as a declaration end if more package content follows.
          pos_ += i + 1;
          return;
        }
        return;
      }
      advance();
    }
  }

  Declaration parse_declaration(ComponentKind kind) {
    const Token &kw = advance();
    if (accept_keyword("implementation"))
      return parse_implementation(kind, kw.loc);
    return parse_type(kind, kw.loc);
  }

  ComponentType parse_type(ComponentKind kind, SourceLoc loc) {
    ComponentType t;
    t.kind = kind;
    t.loc = loc;
    t.name = expect_ident("classifier name");
    if (accept_keyword("extends"))
      t.extends = parse_classifier_ref();

    while (!peek().is_keyword("end")) {
      if (accept_keyword("features")) {
        if (accept_keyword("none")) {
          expect_symbol(";");
          continue;
        }
        parse_items([&] { t.features.push_back(parse_feature()); });
      } else if (accept_keyword("flows")) {
        parse_items([&] { t.flows.push_back(parse_flow_spec()); });
      } else if (accept_keyword("properties")) {
        parse_items([&] { t.properties.push_back(parse_association()); });
      } else if (peek().is_keyword("annex")) {
        t.annexes.push_back(parse_annex());
      } else {
        fail("section keyword or 'end " + t.name + ";'");
      }
    }
    expect_keyword("end");
    const Token &end_tok = peek();
    const auto closing = expect_ident();
    if (closing != t.name)
      error_at(end_tok, "end name '" + closing + "' does not match '" + t.name + "'");
    expect_symbol(";");
    return t;
  }

  ComponentImplementation parse_implementation(ComponentKind kind, SourceLoc loc) {
    ComponentImplementation impl;
    impl.kind = kind;
    impl.loc = loc;
    impl.type_name = expect_ident("type name");
    expect_symbol(".");
    impl.impl_name = expect_ident("implementation name");

    while (!peek().is_keyword("end") || peek(1).is_keyword("to")) {
      if (accept_keyword("subcomponents")) {
        parse_items([&] { impl.subcomponents.push_back(parse_subcomponent()); });
      } else if (accept_keyword("connections")) {
        parse_items([&] { impl.connections.push_back(parse_connection()); });
      } else if (accept_keyword("flows")) {
        parse_items([&] { impl.flows.push_back(parse_end_to_end()); });
      } else if (accept_keyword("properties")) {
        parse_items([&] { impl.properties.push_back(parse_association()); });
      } else if (peek().is_keyword("annex")) {
        impl.annexes.push_back(parse_annex());
      } else {
        fail("section keyword or 'end " + impl.full_name() + ";'");
      }
    }
    expect_keyword("end");
    const Token &end_tok = peek();
    auto closing = expect_ident();
    expect_symbol(".");
    closing += "." + expect_ident();
    if (closing != impl.full_name())
      error_at(end_tok, "end name '" + closing + "' does not match '" + impl.full_name() + "'");
    expect_symbol(";");
    return impl;
  }

  Direction parse_direction() {
    if (accept_keyword("in")) {
      if (accept_keyword("out"))
        return Direction::in_out;
      return Direction::in;
    }
    if (accept_keyword("out"))
      return Direction::out;
    return Direction::none;
  }

  Feature parse_feature() {
    Feature f;
    f.loc = peek().loc;
    f.name = expect_ident();
    expect_symbol(":");
    if (peek().is_keyword("provides") || peek().is_keyword("requires")) {
      f.access = advance().is_keyword("provides") ? AccessKind::provides : AccessKind::required;
      if (accept_keyword("bus"))
        f.variant = FeatureVariant::bus_access;
      else if (accept_keyword("data"))
        f.variant = FeatureVariant::data_access;
      else
        fail("'bus' or 'data'");
      expect_keyword("access");
      if (peek().kind == TokenKind::identifier)
        f.data_type = parse_classifier_ref();
      expect_symbol(";");
      return f;
    }
    f.direction = parse_direction();
    if (f.direction == Direction::none)
      fail("'in', 'out', 'provides' or 'requires'");
    if (accept_keyword("parameter")) {
      f.variant = FeatureVariant::parameter;
      f.data_type = parse_classifier_ref();
    } else if (accept_keyword("event")) {
      if (accept_keyword("data")) {
        expect_keyword("port");
        f.variant = FeatureVariant::event_data_port;
        f.data_type = parse_classifier_ref();
      } else {
        expect_keyword("port");
        f.variant = FeatureVariant::event_port;
      }
    } else if (accept_keyword("data")) {
      expect_keyword("port");
      f.variant = FeatureVariant::data_port;
      f.data_type = parse_classifier_ref();
    } else {
      fail("'data port', 'event port', 'event data port' or 'parameter'");
    }
    expect_symbol(";");
    return f;
  }

  FlowSpec parse_flow_spec() {
    FlowSpec fs;
    fs.loc = peek().loc;
    fs.name = expect_ident();
    expect_symbol(":");
    expect_keyword("flow");
    if (accept_keyword("source")) {
      fs.kind = FlowKind::source;
      fs.out_feature = expect_ident();
    } else if (accept_keyword("sink")) {
      fs.kind = FlowKind::sink;
      fs.in_feature = expect_ident();
    } else if (accept_keyword("path")) {
      fs.kind = FlowKind::path;
      fs.in_feature = expect_ident();
      expect_symbol("->");
      fs.out_feature = expect_ident();
    } else {
      fail("'source', 'sink' or 'path'");
    }
    expect_symbol(";");
    return fs;
  }

  std::string parse_endpoint() {
    std::string ep = expect_ident();
    if (accept_symbol("."))
      ep += "." + expect_ident();
    return ep;
  }

  EndToEndFlow parse_end_to_end() {
    EndToEndFlow flow;
    flow.loc = peek().loc;
    flow.name = expect_ident();
    expect_symbol(":");
    expect_keyword("end");
    expect_keyword("to");
    expect_keyword("end");
    expect_keyword("flow");
    flow.segments.push_back(parse_endpoint());
    while (accept_symbol("->"))
      flow.segments.push_back(parse_endpoint());
    expect_symbol(";");
    return flow;
  }

  std::vector<PropertyAssociation> parse_property_block() {
    std::vector<PropertyAssociation> props;
    if (!accept_symbol("{"))
      return props;
    while (!peek().is_symbol("}")) {
      if (at_eof())
        fail("'}'");
      props.push_back(parse_association());
    }
    advance();
    return props;
  }

  Subcomponent parse_subcomponent() {
    Subcomponent s;
    s.loc = peek().loc;
    s.name = expect_ident();
    expect_symbol(":");
    const Token &kw = peek();
    auto kind = parse_component_kind(kw.lexeme);
    if (kw.kind != TokenKind::keyword || !kind)
      fail("component category");
    advance();
    s.kind = *kind;
    s.classifier = parse_classifier_ref();
    s.properties = parse_property_block();
    expect_symbol(";");
    return s;
  }

  Connection parse_connection() {
    Connection c;
    c.loc = peek().loc;
    c.name = expect_ident();
    expect_symbol(":");
    expect_keyword("port");
    c.source = parse_endpoint();
    expect_symbol("->");
    c.dest = parse_endpoint();
    c.properties = parse_property_block();
    expect_symbol(";");
    return c;
  }

  PropertyAssociation parse_association() {
    PropertyAssociation pa;
    pa.loc = peek().loc;
    pa.name = parse_qualified();
    expect_symbol("=>");
    pa.value = parse_value();
    expect_symbol(";");
    return pa;
  }

  std::int64_t parse_signed_int() {
    const bool neg = accept_symbol("-");
    if (peek().kind != TokenKind::integer)
      fail("integer");
    const Token &t = advance();
    std::int64_t v = 0;
    std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
    return neg ? -v : v;
  }

  PropertyValue parse_value() {
    PropertyValue pv;
    const Token &t = peek();
    if (t.is_symbol("-") || t.kind == TokenKind::integer) {
      const auto v = parse_signed_int();
      if (accept_symbol("..")) {
        pv.value = RangeValue{v, parse_signed_int()};
      } else {
        IntValue iv{v, {}};
        if (peek().kind == TokenKind::identifier)
          iv.unit = advance().lexeme;
        pv.value = iv;
      }
    } else if (t.kind == TokenKind::string) {
      pv.value = StringValue{unescape(advance().lexeme)};
    } else if (t.is_keyword("true") || t.is_keyword("false")) {
      pv.value = advance().is_keyword("true");
    } else if (t.kind == TokenKind::identifier) {
      pv.value = EnumValue{advance().lexeme};
    } else if (accept_symbol("(")) {
      std::vector<PropertyValue> items;
      if (!peek().is_symbol(")")) {
        items.push_back(parse_value());
        while (accept_symbol(","))
          items.push_back(parse_value());
      }
      expect_symbol(")");
      pv.value = std::move(items);
    } else {
      fail("property value");
    }
    return pv;
  }

  static std::string unescape(std::string_view lit) {
    std::string out;
    for (std::size_t i = 1; i + 1 < lit.size(); ++i) {
      if (lit[i] == '\\' && i + 2 < lit.size())
        ++i;
      out += lit[i];
    }
    return out;
  }

  AnnexClause parse_annex() {
    AnnexClause a;
    a.loc = expect_keyword("annex").loc;
    a.language = expect_ident("annex language");
    if (peek().kind != TokenKind::annex_blob)
      fail("'{** ... **}'");
    const Token &blob = advance();
    a.body = std::string(blob.annex_body());
    a.body_offset = blob.loc.offset + 3;
    expect_symbol(";");
    return a;
  }

  // -- property sets --------------------------------------------------------

  std::optional<PropertySet> parse_property_set() {
    try {
      PropertySet set;
      set.loc = expect_keyword("property").loc;
      if (unit_)
        set.file = unit_->path();
      expect_keyword("set");
      set.name = expect_set_name();
      expect_keyword("is");
      while (peek().kind == TokenKind::identifier) {
        const auto before = pos_;
        try {
          set.definitions.push_back(parse_property_definition());
        } catch (const SyntaxError &) {
          resync();
          if (pos_ == before)
            advance();
        }
      }
      expect_keyword("end");
      const Token &end_tok = peek();
      const auto closing = expect_set_name();
      if (closing != set.name)
        error_at(end_tok, "end name '" + closing + "' does not match '" + set.name + "'");
      expect_symbol(";");
      return set;
    } catch (const SyntaxError &) {
      while (!at_eof() && !peek().is_keyword("package") && !peek().is_keyword("property"))
        advance();
      return std::nullopt;
    }
  }

  PropertyDefinition parse_property_definition() {
    PropertyDefinition def;
    def.loc = peek().loc;
    def.name = expect_ident();
    expect_symbol(":");
    if (accept_keyword("list")) {
      expect_keyword("of");
      def.type.is_list = true;
    }
    const Token &t = peek();
    if (t.is_keyword("aadlboolean")) {
      advance();
      def.type.base = PropertyBaseType::aadlboolean;
    } else if (t.is_keyword("aadlinteger")) {
      advance();
      def.type.base = PropertyBaseType::aadlinteger;
      if (accept_keyword("units"))
        def.type.units = expect_ident("unit name");
    } else if (t.is_keyword("aadlstring")) {
      advance();
      def.type.base = PropertyBaseType::aadlstring;
    } else if (t.is_keyword("enumeration")) {
      advance();
      def.type.base = PropertyBaseType::enumeration;
      expect_symbol("(");
      def.type.enumerators.push_back(expect_ident());
      while (accept_symbol(","))
        def.type.enumerators.push_back(expect_ident());
      expect_symbol(")");
    } else if (t.is_keyword("range")) {
      advance();
      expect_keyword("of");
      expect_keyword("aadlinteger");
      def.type.base = PropertyBaseType::range;
    } else {
      fail("property type");
    }
    expect_symbol(";");
    return def;
  }

  const std::vector<Token> &toks_;
  const SourceUnit *unit_;
  std::size_t pos_ = 0;
  Diagnostics diags_;
};

} // namespace

ParseResult<ModelFile> parse_model(const SourceUnit &unit) {
  auto lexed = lex(unit);
  Parser p(lexed.tokens, &unit);
  ParseResult<ModelFile> result;
  result.value = p.parse_file();
  result.diagnostics = std::move(lexed.diagnostics);
  for (auto &d : p.take_diagnostics())
    result.diagnostics.push_back(std::move(d));
  return result;
}

ParseResult<ModelFile> parse_model_text(std::string_view text, std::string path) {
  SourceUnit unit(std::move(path), std::string(text));
  return parse_model(unit);
}

ParseResult<Package> parse_package(const std::vector<Token> &tokens, const SourceUnit *unit) {
  ParseResult<Package> result;
  if (tokens.empty() || tokens.back().kind != TokenKind::end_of_file) {
    std::vector<Token> terminated = tokens;
    terminated.push_back(Token{});
    return parse_package(terminated, unit);
  }
  Parser p(tokens, unit);
  result.value = p.parse_package_unit();
  auto diags = p.take_diagnostics();
  if (result.value && !p.at_eof()) {
    Diagnostic d;
    d.message = "unexpected content after package end";
    if (unit)
      d.file = unit->path();
    diags.push_back(std::move(d));
  }
  result.diagnostics = std::move(diags);
  return result;
}

} // namespace uasforge
