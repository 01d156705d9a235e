#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/parser.hpp"

namespace uasforge {

enum class FormulaOp {
  forall,
  exists,
  and_,
  or_,
  not_,
  implies,
  compare, // name holds the operator: = <> < <= > >=
  call,    // builtin function or claim call; name holds the callee
  var,
  int_lit,
  string_lit,
  bool_lit,
  property_name, // Security::Encrypted
};

/// Claim-language syntax tree. For quantifiers `name` is the bound variable
/// and args are {domain, body}.
struct Formula {
  FormulaOp op = FormulaOp::bool_lit;
  std::string name;
  std::int64_t value = 0;
  std::vector<Formula> args;
  SourceLoc loc;

  friend bool operator==(const Formula &a, const Formula &b) {
    return a.op == b.op && a.name == b.name && a.value == b.value && a.args == b.args;
  }
};

struct ClaimParam {
  std::string name;
  std::string type; // component, feature, connection, path, data, string, int, bool
  bool operator==(const ClaimParam &) const = default;
};

struct ClaimDef {
  std::string name;
  std::vector<ClaimParam> params;
  std::string description;
  Formula body;
  SourceLoc loc;
  bool operator==(const ClaimDef &) const = default;
};

/// Parsed `annex resolute` body: claim definitions plus `prove` goals.
struct ClaimAnnex {
  std::vector<ClaimDef> claims;
  std::vector<Formula> proves; // each a call formula

  const ClaimDef *find(std::string_view name) const;
  bool empty() const { return claims.empty() && proves.empty(); }
  bool operator==(const ClaimAnnex &) const = default;
};

struct BuiltinInfo {
  std::string_view name;
  int arity;
  std::string_view summary;
};

/// The fixed predicate/function vocabulary available to claims.
const std::vector<BuiltinInfo> &claim_builtins();
const BuiltinInfo *find_claim_builtin(std::string_view name);

/// Claims shipped with the toolchain (name -> arity); user annexes may
/// call them without defining them.
const std::map<std::string, int> &library_claim_signatures();

/// Parses a claim annex body. Every call must name a builtin, a claim in
/// this annex, or one listed in `external_claims` (name -> arity); every
/// bare identifier must be a bound parameter or quantifier variable.
ParseResult<ClaimAnnex> parse_claim_annex(std::string_view body, std::size_t base_offset = 0,
                                          const SourceUnit *unit = nullptr,
                                          const std::map<std::string, int> &external_claims = {});

std::string print_formula(const Formula &f);
std::string print_claim_annex(const ClaimAnnex &annex);

} // namespace uasforge
