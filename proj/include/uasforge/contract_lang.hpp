#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/parser.hpp"
#include "uasforge/source.hpp"

namespace uasforge {

enum class ExprOp {
  const_int,
  const_bool,
  port_ref, // unresolved dotted path, relative to the owning component
  var,      // resolved transition-system variable (current or next copy)
  prev,     // prev(e, init): init at step 0, e at step t-1 afterwards
  add,
  sub,
  mul,
  div, // floor division by a nonzero constant, matching SMT-LIB `div`
  neg,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  and_,
  or_,
  not_,
  implies,
  ite,
};

/// Contract expression tree. Children are held by value; trees are small.
struct Expr {
  ExprOp op = ExprOp::const_bool;
  std::int64_t value = 0; // const_int value, const_bool as 0/1
  std::string path;       // port_ref
  int var = -1;           // var: index into TransitionSystem::variables
  bool next = false;      // var: refers to the next-state copy
  std::vector<Expr> args;
  SourceLoc loc;

  static Expr integer(std::int64_t v);
  static Expr boolean(bool b);
  static Expr port(std::string path);
  static Expr variable(int index, bool next = false);
  static Expr unary(ExprOp op, Expr a);
  static Expr binary(ExprOp op, Expr a, Expr b);
  static Expr ite(Expr c, Expr a, Expr b);
  static Expr conjunction(std::vector<Expr> parts);

  friend bool operator==(const Expr &a, const Expr &b) {
    return a.op == b.op && a.value == b.value && a.path == b.path && a.var == b.var && a.next == b.next &&
           a.args == b.args;
  }
};

bool is_arith(ExprOp op);
bool is_compare(ExprOp op);
bool is_logical(ExprOp op);

enum class ContractKind { assume, guarantee, assertion };

struct ContractStatement {
  ContractKind kind = ContractKind::guarantee;
  std::string name;
  Expr expr;
  SourceLoc loc;
  bool operator==(const ContractStatement &) const = default;
};

/// Parsed `annex agree` body. `assert` statements describe a component's
/// behaviour and are taken as given; `guarantee` and `assume` statements are
/// proof obligations.
struct ContractAnnex {
  std::vector<ContractStatement> assumes;
  std::vector<ContractStatement> guarantees;
  std::vector<ContractStatement> asserts;

  bool empty() const { return assumes.empty() && guarantees.empty() && asserts.empty(); }
  bool operator==(const ContractAnnex &) const = default;
};

/// Parses an annex body. `base_offset` is the file offset of the body so
/// diagnostics land inside the enclosing model file.
ParseResult<ContractAnnex> parse_contract_annex(std::string_view body, std::size_t base_offset = 0,
                                                const SourceUnit *unit = nullptr);

/// Parses a standalone expression (used for delegated obligations and tests).
ParseResult<Expr> parse_expr(std::string_view text);

/// Precedence-aware printer; `parse_expr(print_expr(e)) == e` for every
/// unresolved expression.
std::string print_expr(const Expr &e);
std::string print_contract_annex(const ContractAnnex &annex);

} // namespace uasforge
