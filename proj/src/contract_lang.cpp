#include "uasforge/contract_lang.hpp"

#include <array>

#include "annex_stream.hpp"

namespace uasforge {

using detail::AnnexStream;
using detail::AnnexSyntaxError;

Expr Expr::integer(std::int64_t v) {
  Expr e;
  e.op = ExprOp::const_int;
  e.value = v;
  return e;
}

Expr Expr::boolean(bool b) {
  Expr e;
  e.op = ExprOp::const_bool;
  e.value = b ? 1 : 0;
  return e;
}

Expr Expr::port(std::string path) {
  Expr e;
  e.op = ExprOp::port_ref;
  e.path = std::move(path);
  return e;
}

Expr Expr::variable(int index, bool next) {
  Expr e;
  e.op = ExprOp::var;
  e.var = index;
  e.next = next;
  return e;
}

Expr Expr::unary(ExprOp op, Expr a) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(a));
  return e;
}

Expr Expr::binary(ExprOp op, Expr a, Expr b) {
  Expr e;
  e.op = op;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

Expr Expr::ite(Expr c, Expr a, Expr b) {
  Expr e;
  e.op = ExprOp::ite;
  e.args = {std::move(c), std::move(a), std::move(b)};
  return e;
}

Expr Expr::conjunction(std::vector<Expr> parts) {
  if (parts.empty())
    return boolean(true);
  Expr acc = std::move(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i)
    acc = binary(ExprOp::and_, std::move(acc), std::move(parts[i]));
  return acc;
}

bool is_arith(ExprOp op) {
  return op == ExprOp::add || op == ExprOp::sub || op == ExprOp::mul || op == ExprOp::div || op == ExprOp::neg;
}

bool is_compare(ExprOp op) {
  return op == ExprOp::eq || op == ExprOp::ne || op == ExprOp::lt || op == ExprOp::le || op == ExprOp::gt ||
         op == ExprOp::ge;
}

bool is_logical(ExprOp op) {
  return op == ExprOp::and_ || op == ExprOp::or_ || op == ExprOp::not_ || op == ExprOp::implies;
}

namespace {

constexpr std::array<std::string_view, 10> kExprWords = {"and", "or",   "not",  "prev", "if",
                                                         "then", "else", "true", "false", "div"};

bool is_expr_word(std::string_view w) {
  for (auto k : kExprWords)
    if (iequals(k, w))
      return true;
  return false;
}

class ExprParser {
public:
  explicit ExprParser(AnnexStream &s) : s_(s) {}

  Expr parse() { return implies(); }

private:
  Expr implies() {
    Expr lhs = disjunction();
    if (s_.peek().is_symbol("=>")) {
      auto loc = s_.advance().loc;
      Expr e = Expr::binary(ExprOp::implies, std::move(lhs), implies());
      e.loc = loc;
      return e;
    }
    return lhs;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (s_.at_word("or")) {
      auto loc = s_.advance().loc;
      lhs = Expr::binary(ExprOp::or_, std::move(lhs), conjunction());
      lhs.loc = loc;
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = negation();
    while (s_.at_word("and")) {
      auto loc = s_.advance().loc;
      lhs = Expr::binary(ExprOp::and_, std::move(lhs), negation());
      lhs.loc = loc;
    }
    return lhs;
  }

  Expr negation() {
    if (s_.at_word("not")) {
      auto loc = s_.advance().loc;
      Expr e = Expr::unary(ExprOp::not_, negation());
      e.loc = loc;
      return e;
    }
    return comparison();
  }

  Expr comparison() {
    Expr lhs = additive();
    static constexpr std::array<std::pair<std::string_view, ExprOp>, 6> ops = {{
        {"=", ExprOp::eq}, {"<>", ExprOp::ne}, {"<", ExprOp::lt},
        {"<=", ExprOp::le}, {">", ExprOp::gt}, {">=", ExprOp::ge},
    }};
    for (auto [sym, op] : ops) {
      if (s_.peek().is_symbol(sym)) {
        auto loc = s_.advance().loc;
        Expr e = Expr::binary(op, std::move(lhs), additive());
        e.loc = loc;
        return e;
      }
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (s_.peek().is_symbol("+") || s_.peek().is_symbol("-")) {
      const Token &t = s_.advance();
      const auto op = t.lexeme == "+" ? ExprOp::add : ExprOp::sub;
      lhs = Expr::binary(op, std::move(lhs), multiplicative());
      lhs.loc = t.loc;
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (s_.peek().is_symbol("*") || s_.at_word("div")) {
      const Token &t = s_.advance();
      const auto op = t.lexeme == "*" ? ExprOp::mul : ExprOp::div;
      lhs = Expr::binary(op, std::move(lhs), unary());
      lhs.loc = t.loc;
    }
    return lhs;
  }

  Expr unary() {
    if (s_.peek().is_symbol("-")) {
      auto loc = s_.advance().loc;
      if (s_.peek().kind == TokenKind::integer) {
        Expr lit = Expr::integer(-s_.expect_int());
        lit.loc = loc;
        return lit;
      }
      Expr e = Expr::unary(ExprOp::neg, unary());
      e.loc = loc;
      return e;
    }
    return primary();
  }

  Expr primary() {
    const Token &t = s_.peek();
    const auto loc = t.loc;
    if (t.kind == TokenKind::integer) {
      Expr e = Expr::integer(s_.expect_int());
      e.loc = loc;
      return e;
    }
    if (s_.accept_word("true") || s_.accept_word("false")) {
      Expr e = Expr::boolean(iequals(t.lexeme, "true"));
      e.loc = loc;
      return e;
    }
    if (s_.accept_word("prev")) {
      s_.expect_symbol("(");
      Expr a = parse();
      s_.expect_symbol(",");
      Expr b = parse();
      s_.expect_symbol(")");
      Expr e = Expr::binary(ExprOp::prev, std::move(a), std::move(b));
      e.loc = loc;
      return e;
    }
    if (s_.accept_word("if")) {
      Expr c = parse();
      s_.expect_word("then");
      Expr a = parse();
      s_.expect_word("else");
      Expr b = parse();
      Expr e = Expr::ite(std::move(c), std::move(a), std::move(b));
      e.loc = loc;
      return e;
    }
    if (s_.accept_symbol("(")) {
      Expr e = parse();
      s_.expect_symbol(")");
      return e;
    }
    if (t.kind == TokenKind::identifier && !is_expr_word(t.lexeme)) {
      std::string path = s_.advance().lexeme;
      while (s_.peek().is_symbol(".")) {
        s_.advance();
        if (s_.peek().kind != TokenKind::identifier || is_expr_word(s_.peek().lexeme))
          s_.fail("port or field name");
        path += "." + s_.advance().lexeme;
      }
      Expr e = Expr::port(std::move(path));
      e.loc = loc;
      return e;
    }
    s_.fail("expression");
  }

  AnnexStream &s_;
};

int precedence(const Expr &e) {
  switch (e.op) {
  case ExprOp::ite: return 0;
  case ExprOp::implies: return 1;
  case ExprOp::or_: return 2;
  case ExprOp::and_: return 3;
  case ExprOp::not_: return 4;
  case ExprOp::eq:
  case ExprOp::ne:
  case ExprOp::lt:
  case ExprOp::le:
  case ExprOp::gt:
  case ExprOp::ge: return 5;
  case ExprOp::add:
  case ExprOp::sub: return 6;
  case ExprOp::mul:
  case ExprOp::div: return 7;
  case ExprOp::neg: return 8;
  default: return 9;
  }
}

std::string_view op_text(ExprOp op) {
  switch (op) {
  case ExprOp::implies: return "=>";
  case ExprOp::or_: return "or";
  case ExprOp::and_: return "and";
  case ExprOp::eq: return "=";
  case ExprOp::ne: return "<>";
  case ExprOp::lt: return "<";
  case ExprOp::le: return "<=";
  case ExprOp::gt: return ">";
  case ExprOp::ge: return ">=";
  case ExprOp::add: return "+";
  case ExprOp::sub: return "-";
  case ExprOp::mul: return "*";
  case ExprOp::div: return "div";
  default: return "?";
  }
}

void print(std::string &out, const Expr &e);

void print_child(std::string &out, const Expr &child, bool parens) {
  if (parens)
    out += '(';
  print(out, child);
  if (parens)
    out += ')';
}

void print(std::string &out, const Expr &e) {
  const int p = precedence(e);
  switch (e.op) {
  case ExprOp::const_int: out += std::to_string(e.value); return;
  case ExprOp::const_bool: out += e.value ? "true" : "false"; return;
  case ExprOp::port_ref: out += e.path; return;
  case ExprOp::var:
    out += "$" + std::to_string(e.var);
    if (e.next)
      out += "'";
    return;
  case ExprOp::prev:
    out += "prev(";
    print(out, e.args[0]);
    out += ", ";
    print(out, e.args[1]);
    out += ")";
    return;
  case ExprOp::ite:
    out += "if ";
    print(out, e.args[0]);
    out += " then ";
    print(out, e.args[1]);
    out += " else ";
    print(out, e.args[2]);
    return;
  case ExprOp::not_:
    out += "not ";
    print_child(out, e.args[0], precedence(e.args[0]) < 4);
    return;
  case ExprOp::neg: {
    out += "-";
    const auto &c = e.args[0];
    print_child(out, c, !(c.op == ExprOp::port_ref || c.op == ExprOp::var || c.op == ExprOp::prev));
    return;
  }
  default: break;
  }
  const auto &lhs = e.args[0];
  const auto &rhs = e.args[1];
  const int lp = precedence(lhs), rp = precedence(rhs);
  bool lparen, rparen;
  if (e.op == ExprOp::implies) {
    lparen = lp <= p;
    rparen = rp < p;
  } else if (is_compare(e.op)) {
    lparen = lp <= p;
    rparen = rp <= p;
  } else {
    lparen = lp < p;
    rparen = rp <= p;
  }
  print_child(out, lhs, lparen);
  out += ' ';
  out += op_text(e.op);
  out += ' ';
  print_child(out, rhs, rparen);
}

std::string_view kind_word(ContractKind k) {
  switch (k) {
  case ContractKind::assume: return "assume";
  case ContractKind::guarantee: return "guarantee";
  case ContractKind::assertion: return "assert";
  }
  return "";
}

} // namespace

ParseResult<ContractAnnex> parse_contract_annex(std::string_view body, std::size_t base_offset,
                                                const SourceUnit *unit) {
  AnnexStream s(body, base_offset, unit);
  ContractAnnex annex;
  while (!s.at_eof()) {
    try {
      ContractStatement st;
      st.loc = s.peek().loc;
      if (s.accept_word("assume"))
        st.kind = ContractKind::assume;
      else if (s.accept_word("guarantee"))
        st.kind = ContractKind::guarantee;
      else if (s.accept_word("assert"))
        st.kind = ContractKind::assertion;
      else
        s.fail("'assume', 'guarantee' or 'assert'");
      st.name = s.expect_string();
      s.expect_symbol(":");
      st.expr = ExprParser(s).parse();
      s.expect_symbol(";");
      auto &list = st.kind == ContractKind::assume      ? annex.assumes
                   : st.kind == ContractKind::guarantee ? annex.guarantees
                                                        : annex.asserts;
      list.push_back(std::move(st));
    } catch (const AnnexSyntaxError &) {
      s.resync_after(";");
    }
  }
  ParseResult<ContractAnnex> result;
  result.value = std::move(annex);
  result.diagnostics = std::move(s.diagnostics());
  return result;
}

ParseResult<Expr> parse_expr(std::string_view text) {
  AnnexStream s(text, 0, nullptr);
  ParseResult<Expr> result;
  try {
    Expr e = ExprParser(s).parse();
    if (!s.at_eof())
      s.fail("end of expression");
    result.value = std::move(e);
  } catch (const AnnexSyntaxError &) {
  }
  result.diagnostics = std::move(s.diagnostics());
  return result;
}

std::string print_expr(const Expr &e) {
  std::string out;
  print(out, e);
  return out;
}

std::string print_contract_annex(const ContractAnnex &annex) {
  std::string out = "\n";
  for (const auto *list : {&annex.assumes, &annex.asserts, &annex.guarantees})
    for (const auto &st : *list)
      out += "      " + std::string(kind_word(st.kind)) + " " + AnnexStream::quote(st.name) + ": " +
             print_expr(st.expr) + ";\n";
  return out + "    ";
}

} // namespace uasforge
