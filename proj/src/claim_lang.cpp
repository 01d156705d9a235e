#include "uasforge/claim_lang.hpp"

#include <array>
#include <set>

#include "annex_stream.hpp"

namespace uasforge {

using detail::AnnexStream;
using detail::AnnexSyntaxError;

const std::vector<BuiltinInfo> &claim_builtins() {
  static const std::vector<BuiltinInfo> table = {
      {"components", 0, "every component instance"},
      {"connections", 0, "every connection instance"},
      {"with_role", 1, "components whose Role::<name> property is true"},
      {"subcomponents", 1, "direct children of a component"},
      {"kind_is", 2, "component category test"},
      {"has_property", 3, "property equals the given value"},
      {"property", 2, "resolved property value, or none"},
      {"features", 1, "port features of a component or component set"},
      {"in_features", 1, "incoming port features"},
      {"out_features", 1, "outgoing port features"},
      {"connected", 2, "a connection instance links the two features"},
      {"all_paths", 2, "simple connection-graph paths from a feature set to a feature set"},
      {"path_components", 1, "components owning the features of a path, in order"},
      {"path_features", 1, "features of a path, in order"},
      {"first", 1, "first feature of a path"},
      {"last", 1, "last feature of a path"},
      {"source", 1, "source feature of a connection"},
      {"destination", 1, "destination feature of a connection"},
      {"owner", 1, "component owning a feature"},
      {"data_type_of", 1, "data classifier of a feature or connection"},
      {"marked_encrypts", 1, "Security::Encrypts is true"},
      {"encrypted", 1, "data classifier has Security::Encrypted true"},
      {"member", 2, "set membership"},
      {"size", 1, "set cardinality"},
      {"approved_algorithms", 0, "configured approved cipher names"},
      {"min_key_bits", 0, "configured minimum key length"},
      {"trajectory_linear", 1, "bounded first-difference check delegated to the contract engine"},
  };
  return table;
}

const BuiltinInfo *find_claim_builtin(std::string_view name) {
  for (const auto &b : claim_builtins())
    if (b.name == name)
      return &b;
  return nullptr;
}

const ClaimDef *ClaimAnnex::find(std::string_view name) const {
  for (const auto &c : claims)
    if (c.name == name)
      return &c;
  return nullptr;
}

namespace {

constexpr std::array<std::string_view, 10> kClaimWords = {"forall", "exists", "in",    "and",   "or",
                                                          "not",    "true",   "false", "claim", "prove"};

bool is_claim_word(std::string_view w) {
  for (auto k : kClaimWords)
    if (iequals(k, w))
      return true;
  return false;
}

const std::set<std::string> kParamTypes = {"component", "feature", "connection", "path",
                                           "data",      "string",  "int",        "bool"};

class FormulaParser {
public:
  FormulaParser(AnnexStream &s, std::vector<std::string> scope) : s_(s), scope_(std::move(scope)) {}

  Formula parse() { return implies(); }

  std::vector<Formula *> calls; // call nodes for the post-parse arity check

private:
  Formula make(FormulaOp op, SourceLoc loc) {
    Formula f;
    f.op = op;
    f.loc = loc;
    return f;
  }

  Formula implies() {
    Formula lhs = disjunction();
    if (s_.peek().is_symbol("=>")) {
      Formula f = make(FormulaOp::implies, s_.advance().loc);
      f.args.push_back(std::move(lhs));
      f.args.push_back(implies());
      return f;
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (s_.at_word("or")) {
      Formula f = make(FormulaOp::or_, s_.advance().loc);
      f.args.push_back(std::move(lhs));
      f.args.push_back(conjunction());
      lhs = std::move(f);
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (s_.at_word("and")) {
      Formula f = make(FormulaOp::and_, s_.advance().loc);
      f.args.push_back(std::move(lhs));
      f.args.push_back(unary());
      lhs = std::move(f);
    }
    return lhs;
  }

  Formula unary() {
    if (s_.at_word("not")) {
      Formula f = make(FormulaOp::not_, s_.advance().loc);
      f.args.push_back(unary());
      return f;
    }
    if (s_.at_word("forall") || s_.at_word("exists")) {
      const Token &q = s_.advance();
      Formula f = make(iequals(q.lexeme, "forall") ? FormulaOp::forall : FormulaOp::exists, q.loc);
      if (s_.peek().kind != TokenKind::identifier || is_claim_word(s_.peek().lexeme))
        s_.fail("quantified variable");
      f.name = s_.advance().lexeme;
      s_.expect_word("in");
      f.args.push_back(term());
      s_.expect_symbol(":");
      scope_.push_back(f.name);
      f.args.push_back(parse());
      scope_.pop_back();
      return f;
    }
    return comparison();
  }

  Formula comparison() {
    Formula lhs = term();
    static constexpr std::array<std::string_view, 6> ops = {"=", "<>", "<", "<=", ">", ">="};
    for (auto op : ops) {
      if (s_.peek().is_symbol(op)) {
        Formula f = make(FormulaOp::compare, s_.advance().loc);
        f.name = std::string(op);
        f.args.push_back(std::move(lhs));
        f.args.push_back(term());
        return f;
      }
    }
    return lhs;
  }

  Formula term() {
    const Token &t = s_.peek();
    const auto loc = t.loc;
    if (t.kind == TokenKind::integer || t.is_symbol("-")) {
      const bool neg = s_.accept_symbol("-");
      Formula f = make(FormulaOp::int_lit, loc);
      f.value = s_.expect_int();
      if (neg)
        f.value = -f.value;
      return f;
    }
    if (t.kind == TokenKind::string) {
      Formula f = make(FormulaOp::string_lit, loc);
      f.name = s_.expect_string();
      return f;
    }
    if (s_.at_word("true") || s_.at_word("false")) {
      Formula f = make(FormulaOp::bool_lit, loc);
      f.value = iequals(s_.advance().lexeme, "true") ? 1 : 0;
      return f;
    }
    if (s_.accept_symbol("(")) {
      Formula f = parse();
      s_.expect_symbol(")");
      return f;
    }
    if (t.kind == TokenKind::identifier && !is_claim_word(t.lexeme)) {
      std::string name = s_.advance().lexeme;
      if (s_.accept_symbol("::")) {
        Formula f = make(FormulaOp::property_name, loc);
        f.name = name + "::" + s_.expect_ident("property name");
        return f;
      }
      if (s_.accept_symbol("(")) {
        Formula f = make(FormulaOp::call, loc);
        f.name = std::move(name);
        if (!s_.peek().is_symbol(")")) {
          f.args.push_back(parse());
          while (s_.accept_symbol(","))
            f.args.push_back(parse());
        }
        s_.expect_symbol(")");
        return f;
      }
      Formula f = make(FormulaOp::var, loc);
      f.name = std::move(name);
      bool bound = false;
      for (const auto &v : scope_)
        bound = bound || v == f.name;
      if (!bound)
        s_.error_at(loc, "unbound identifier '" + f.name + "'");
      return f;
    }
    s_.fail("claim term");
  }

  AnnexStream &s_;
  std::vector<std::string> scope_;
};

void check_calls(const Formula &f, const std::map<std::string, int> &claims, AnnexStream &s) {
  if (f.op == FormulaOp::call) {
    const int arity = static_cast<int>(f.args.size());
    if (const auto *b = find_claim_builtin(f.name)) {
      if (b->arity != arity)
        s.error_at(f.loc, "'" + f.name + "' expects " + std::to_string(b->arity) + " argument(s), got " +
                              std::to_string(arity));
    } else if (auto it = claims.find(f.name); it != claims.end()) {
      if (it->second != arity)
        s.error_at(f.loc, "claim '" + f.name + "' expects " + std::to_string(it->second) + " argument(s), got " +
                              std::to_string(arity));
    } else {
      s.error_at(f.loc, "undefined predicate or claim '" + f.name + "'");
    }
  }
  for (const auto &a : f.args)
    check_calls(a, claims, s);
}

int precedence(const Formula &f) {
  switch (f.op) {
  case FormulaOp::forall:
  case FormulaOp::exists: return 0;
  case FormulaOp::implies: return 1;
  case FormulaOp::or_: return 2;
  case FormulaOp::and_: return 3;
  case FormulaOp::not_: return 4;
  case FormulaOp::compare: return 5;
  default: return 9;
  }
}

void print(std::string &out, const Formula &f);

void print_wrapped(std::string &out, const Formula &f, bool parens) {
  if (parens)
    out += '(';
  print(out, f);
  if (parens)
    out += ')';
}

void print(std::string &out, const Formula &f) {
  const int p = precedence(f);
  switch (f.op) {
  case FormulaOp::forall:
  case FormulaOp::exists:
    out += f.op == FormulaOp::forall ? "forall " : "exists ";
    out += f.name + " in ";
    print_wrapped(out, f.args[0], precedence(f.args[0]) < 9);
    out += " : ";
    print(out, f.args[1]);
    return;
  case FormulaOp::not_:
    out += "not ";
    print_wrapped(out, f.args[0], precedence(f.args[0]) < 4);
    return;
  case FormulaOp::implies:
  case FormulaOp::or_:
  case FormulaOp::and_:
  case FormulaOp::compare: {
    const auto &l = f.args[0];
    const auto &r = f.args[1];
    bool lp, rp;
    if (f.op == FormulaOp::implies) {
      lp = precedence(l) <= p;
      rp = precedence(r) < p || precedence(r) == 0;
    } else if (f.op == FormulaOp::compare) {
      lp = precedence(l) < 9;
      rp = precedence(r) < 9;
    } else {
      lp = precedence(l) < p;
      rp = precedence(r) <= p;
    }
    print_wrapped(out, l, lp);
    out += ' ';
    out += f.op == FormulaOp::implies ? "=>" : f.op == FormulaOp::or_ ? "or" : f.op == FormulaOp::and_ ? "and" : f.name;
    out += ' ';
    print_wrapped(out, r, rp);
    return;
  }
  case FormulaOp::call:
    out += f.name + "(";
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      if (i)
        out += ", ";
      print(out, f.args[i]);
    }
    out += ")";
    return;
  case FormulaOp::var:
  case FormulaOp::property_name: out += f.name; return;
  case FormulaOp::int_lit: out += std::to_string(f.value); return;
  case FormulaOp::string_lit: out += AnnexStream::quote(f.name); return;
  case FormulaOp::bool_lit: out += f.value ? "true" : "false"; return;
  }
}

} // namespace

ParseResult<ClaimAnnex> parse_claim_annex(std::string_view body, std::size_t base_offset, const SourceUnit *unit,
                                          const std::map<std::string, int> &external_claims) {
  AnnexStream s(body, base_offset, unit);
  ClaimAnnex annex;
  while (!s.at_eof()) {
    try {
      if (s.accept_word("claim")) {
        ClaimDef def;
        def.loc = s.peek().loc;
        def.name = s.expect_ident("claim name");
        if (find_claim_builtin(def.name))
          s.error_at(def.loc, "claim '" + def.name + "' shadows a builtin");
        s.expect_symbol("(");
        std::vector<std::string> scope;
        if (!s.peek().is_symbol(")")) {
          do {
            ClaimParam p;
            p.name = s.expect_ident("parameter name");
            s.expect_symbol(":");
            const auto loc = s.peek().loc;
            p.type = s.expect_ident("parameter type");
            if (!kParamTypes.count(p.type))
              s.error_at(loc, "unknown parameter type '" + p.type + "'");
            scope.push_back(p.name);
            def.params.push_back(std::move(p));
          } while (s.accept_symbol(","));
        }
        s.expect_symbol(")");
        if (s.peek().kind == TokenKind::string)
          def.description = s.expect_string();
        s.expect_symbol(":");
        FormulaParser fp(s, scope);
        def.body = fp.parse();
        s.expect_symbol(";");
        if (annex.find(def.name))
          s.error_at(def.loc, "duplicate claim '" + def.name + "'");
        annex.claims.push_back(std::move(def));
      } else if (s.accept_word("prove")) {
        FormulaParser fp(s, {"this"});
        Formula goal = fp.parse();
        s.expect_symbol(";");
        if (goal.op != FormulaOp::call)
          s.error_at(goal.loc, "prove expects a claim call");
        annex.proves.push_back(std::move(goal));
      } else {
        s.fail("'claim' or 'prove'");
      }
    } catch (const AnnexSyntaxError &) {
      s.resync_after(";");
    }
  }

  std::map<std::string, int> known = external_claims;
  for (const auto &c : annex.claims)
    known[c.name] = static_cast<int>(c.params.size());
  for (const auto &c : annex.claims)
    check_calls(c.body, known, s);
  for (const auto &g : annex.proves) {
    check_calls(g, known, s);
    if (g.op == FormulaOp::call && find_claim_builtin(g.name))
      s.error_at(g.loc, "prove expects a claim, not builtin '" + g.name + "'");
  }

  ParseResult<ClaimAnnex> result;
  result.value = std::move(annex);
  result.diagnostics = std::move(s.diagnostics());
  return result;
}

std::string print_formula(const Formula &f) {
  std::string out;
  print(out, f);
  return out;
}

std::string print_claim_annex(const ClaimAnnex &annex) {
  std::string out = "\n";
  for (const auto &c : annex.claims) {
    out += "  claim " + c.name + "(";
    for (std::size_t i = 0; i < c.params.size(); ++i)
      out += (i ? ", " : "") + c.params[i].name + ": " + c.params[i].type;
    out += ")";
    if (!c.description.empty())
      out += " " + AnnexStream::quote(c.description);
    out += " :\n    " + print_formula(c.body) + ";\n";
  }
  for (const auto &g : annex.proves)
    out += "  prove " + print_formula(g) + ";\n";
  return out;
}

} // namespace uasforge
