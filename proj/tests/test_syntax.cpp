#include <doctest.h>

#include <random>

#include "ast_gen.hpp"
#include "support.hpp"
#include "uasforge/claim_lang.hpp"
#include "uasforge/contract_lang.hpp"
#include "uasforge/lexer.hpp"
#include "uasforge/parser.hpp"

using namespace uasforge;

TEST_CASE("lexer classifies tokens and keeps positions") {
  auto r = lex("system UAV\n  features x: in data port T; -- note\nend UAV;");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.tokens.size() > 4);
  CHECK(r.tokens[0].is_keyword("system"));
  CHECK(r.tokens[1].kind == TokenKind::identifier);
  CHECK(r.tokens[1].lexeme == "UAV");
  CHECK(r.tokens[2].loc.line == 2);
  CHECK(r.tokens[2].loc.col == 3);
  CHECK(r.tokens.back().kind == TokenKind::end_of_file);
}

TEST_CASE("lexer keywords are case-insensitive") {
  auto r = lex("SYSTEM System");
  CHECK(r.tokens[0].is_keyword("system"));
  CHECK(r.tokens[1].is_keyword("system"));
}

TEST_CASE("lexer keeps annex bodies verbatim") {
  auto r = lex("annex agree {** guarantee g: x <= 3 ; **};");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.tokens[2].kind == TokenKind::annex_blob);
  CHECK(r.tokens[2].annex_body() == " guarantee g: x <= 3 ; ");
}

TEST_CASE("lexer reports malformed input and resumes") {
  CHECK(lex("\"open").diagnostics.size() == 1);
  CHECK(lex("annex a {** never closed").diagnostics.size() == 1);
  auto r = lex("a @ b");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message.find("illegal character") != std::string::npos);
  CHECK(r.tokens.size() == 3);
}

TEST_CASE("parser reports a located diagnostic on a syntax error") {
  auto r = parse_model_text("package P public\n  system S\n    features\n      x: in data;\n  end S;\nend P;\n");
  CHECK_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics[0].span.line == 4);
}

TEST_CASE("parser reads a small package") {
  auto r = parse_model_text(R"(package P public
  with Base;
  data T
  end T;
  system S
    features
      x: in data port T;
      e: out event port;
    properties
      Period => 10 ms;
  end S;
  system implementation S.impl
    subcomponents
      a: process A.impl { Priority => 3; };
    connections
      c1: port x -> a.x;
  end S.impl;
end P;
)");
  REQUIRE(r.ok());
  const auto &pkg = std::get<Package>(r.value->units.at(0));
  CHECK(pkg.name == "P");
  CHECK(pkg.with_clauses == std::vector<std::string>{"Base"});
  REQUIRE(pkg.declarations.size() == 3);
  const auto &s = std::get<ComponentType>(pkg.declarations[1]);
  CHECK(s.features.size() == 2);
  CHECK(s.features[1].variant == FeatureVariant::event_port);
  CHECK(s.properties.at(0).value.as_int()->unit == "ms");
  const auto &impl = std::get<ComponentImplementation>(pkg.declarations[2]);
  CHECK(impl.subcomponents.at(0).properties.at(0).value.as_int()->value == 3);
  CHECK(impl.connections.at(0).dest == "a.x");
}

TEST_CASE("every corpus file round-trips through the printer") {
  int files = 0;
  for (const auto &name : corpus_names()) {
    auto e = load_corpus(name);
    for (const auto &path : e.files) {
      auto first = parse_model_text(support::read(path), path);
      REQUIRE_MESSAGE(first.ok(), format_all(first.diagnostics));
      auto text = pretty_print(*first.value);
      auto second = parse_model_text(text, path);
      REQUIRE_MESSAGE(second.ok(), format_all(second.diagnostics));
      CHECK_MESSAGE(*first.value == *second.value, path);
      CHECK(pretty_print(*second.value) == text);
      ++files;
    }
  }
  CHECK(files == 40);
}


TEST_CASE("1000 random ASTs round-trip through the printer") {
  int failures = 0;
  for (unsigned seed = 0; seed < 1000; ++seed) {
    support::Gen g(seed);
    ModelFile ast = g.file();
    auto text = pretty_print(ast);
    auto back = parse_model_text(text);
    if (!back.ok() || !(*back.value == ast)) {
      if (++failures <= 3)
        MESSAGE("seed " << seed << "\n" << text << format_all(back.diagnostics));
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("contract expressions print and parse back") {
  for (const char *src : {"a + b * c <= 10", "not (x = 1) or y.z > -3", "prev(p, 0) - p <= 5 and p - prev(p, 0) <= 5",
                          "if a then b else c", "a => b => c", "(a - b) - c = a - (b - c)", "x div 2 >= -(y)"}) {
    auto e = parse_expr(src);
    REQUIRE_MESSAGE(e.ok(), src << ": " << format_all(e.diagnostics));
    auto again = parse_expr(print_expr(*e.value));
    REQUIRE(again.ok());
    CHECK_MESSAGE(*again.value == *e.value, src);
  }
}

TEST_CASE("contract annex parsing sorts statements by kind") {
  auto r = parse_contract_annex("assume \"a1\": x > 0; guarantee \"g1\": y < 3; assert \"s1\": y = x;");
  REQUIRE(r.ok());
  CHECK(r.value->assumes.size() == 1);
  CHECK(r.value->guarantees.at(0).name == "g1");
  CHECK(r.value->asserts.at(0).name == "s1");
  CHECK_FALSE(parse_contract_annex("guarantee \"g\" x;").ok());
}

TEST_CASE("claim annexes print and parse back") {
  const char *src = R"(claim c(s: component) "desc" :
  forall m in with_role(Role::Motor) : exists f in in_features(m) : encrypted(data_type_of(f)) and size(components()) >= 1;
claim d(x: int) : x <> 3 => not (x < 0);
prove c(this);)";
  auto r = parse_claim_annex(src);
  REQUIRE_MESSAGE(r.ok(), format_all(r.diagnostics));
  auto again = parse_claim_annex(print_claim_annex(*r.value));
  REQUIRE_MESSAGE(again.ok(), format_all(again.diagnostics));
  CHECK(*again.value == *r.value);
  CHECK(r.value->claims.at(0).description == "desc");
}

TEST_CASE("claim annex rejects unknown callees") {
  CHECK_FALSE(parse_claim_annex("claim c(s: component) : nonexistent(s);").ok());
}
