#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uasforge/contract_lang.hpp"
#include "uasforge/model.hpp"

namespace uasforge {

// ---------------------------------------------------------------------------
// Transition system

enum class VarKind {
  input,         // unconstrained except by its domain and the constraints
  combinational, // equals `definition` in the same step
  stateful,      // `init` at step 0, `update` evaluated on the previous step afterwards
};

struct Variable {
  std::string path; // instance feature path plus data field path, or an auxiliary name
  bool is_bool = false;
  std::optional<std::int64_t> low, high; // integer domain, when declared
  VarKind kind = VarKind::input;
  Expr definition; // combinational
  Expr init;       // stateful
  Expr update;     // stateful

  // Provenance, for trace rendering.
  const FeatureInstance *feature = nullptr;
  std::string field_path;                       // e.g. "motor0.dutyfactor"
  const ConnectionInstance *driver = nullptr;   // connection assigning this variable
  std::string owner_path;                       // component of an auxiliary variable

  bool bounded() const { return is_bool || (low && high); }
  std::int64_t domain_size() const { return is_bool ? 2 : (*high - *low + 1); }
};

enum class ConstraintKind { assertion, assumption, guarantee };

/// A per-step formula that a context may take as given.
struct Constraint {
  std::string name;           // qualified: component path + "." + statement name
  std::string component_path;
  ConstraintKind kind = ConstraintKind::assertion;
  Expr expr;
};

enum class ObligationKind { guarantee, assumption, extra };

struct Obligation {
  std::string name;
  std::string component_path;
  ObligationKind kind = ObligationKind::guarantee;
  Expr property;
  std::vector<int> context; // indices into TransitionSystem::constraints
};

/// Compiled synchronous model. Variables are indexed; `Expr::var` refers to
/// them and `Expr::next` selects the next-step copy inside `trans`.
struct TransitionSystem {
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<Obligation> obligations;

  int find_variable(std::string_view path) const;
  const Obligation *find_obligation(std::string_view name) const;

  /// Step-0 relation: stateful variables equal their init expressions.
  Expr init() const;
  /// Relation between consecutive steps: x' = update(x) for stateful x.
  Expr trans() const;
  /// Per-step relation for an obligation: domains, combinational
  /// definitions, and the obligation's context constraints.
  Expr step(const Obligation &ob) const;
};

struct CompileOptions {
  /// Extra obligations checked in a component's guarantee context. Each
  /// entry is (component path, name, expression text).
  struct Extra {
    std::string component_path;
    std::string name;
    std::string expr;
  };
  std::vector<Extra> extras;
  /// Raise UnboundedVariable for any integer variable without a range.
  bool require_finite = false;
};

/// Throws Error("TypeError"), Error("UnboundedVariable"),
/// Error("CombinationalCycle").
TransitionSystem compile(const InstanceModel &model, const CompileOptions &options = {});

// ---------------------------------------------------------------------------
// Verdicts

enum class VerdictStatus { valid_bounded, valid_inductive, falsified, unknown };

std::string_view to_string(VerdictStatus s);

struct CounterExample {
  std::string obligation;
  /// values[step][variable]; booleans are 0/1.
  std::vector<std::vector<std::int64_t>> values;

  std::size_t length() const { return values.size(); }
  std::map<std::string, std::int64_t> assignments(const TransitionSystem &ts, std::size_t step) const;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::unknown;
  int k = 0; // bound searched, or the induction depth that succeeded
  std::optional<CounterExample> cex;
  std::string reason;  // unknown verdicts
  std::string backend; // "smt" or "enumerate"
};

enum class Backend { smt, enumerate, automatic };

std::optional<Backend> parse_backend(std::string_view s);

struct CheckOptions {
  Backend backend = Backend::automatic;
  std::string solver;                          // shell command reading SMT-LIB2 on stdin
  std::chrono::milliseconds timeout{30000};    // per solver call
  std::uint64_t budget = 200'000'000;          // enumerator evaluations
};

/// Solver command from UASFORGE_SOLVER, or empty.
std::string default_solver();

/// Bounded check of steps 0..k-1. Throws Error("UnknownObligation"),
/// Error("SolverUnavailable"), Error("SolverTimeout"),
/// Error("BudgetExceeded"), Error("UnboundedVariable").
Verdict check_bmc(const TransitionSystem &ts, std::string_view obligation, int k, const CheckOptions &options = {});

/// k-induction for depths 1..k. valid_inductive carries the depth that closed.
Verdict check_kinduction(const TransitionSystem &ts, std::string_view obligation, int k,
                         const CheckOptions &options = {});

/// Explicit-state search over declared finite domains.
Verdict enumerate_check(const TransitionSystem &ts, std::string_view obligation, int k,
                        std::uint64_t budget = 200'000'000);
Verdict enumerate_kinduction(const TransitionSystem &ts, std::string_view obligation, int k,
                             std::uint64_t budget = 200'000'000);

// ---------------------------------------------------------------------------
// SMT-LIB2

enum class SmtQuery {
  base,      // from the initial state, violation at the last step
  induction, // from any state, property holds before the last step and fails at it
};

/// Script with depth+1 copies of every variable, the negated obligation at
/// step `depth`, then (check-sat) and (get-model).
std::string emit_smtlib(const TransitionSystem &ts, const Obligation &ob, int depth,
                        SmtQuery query = SmtQuery::base);

std::string smt_symbol(const Variable &v, int step);

struct SolverResult {
  enum class Answer { sat, unsat, unknown } answer = Answer::unknown;
  std::map<std::string, std::int64_t> model; // symbol -> value (bools 0/1)
  std::string raw;
};

/// Runs `command` through /bin/sh with the script on stdin. Throws
/// Error("SolverUnavailable") or Error("SolverTimeout").
SolverResult run_solver(const std::string &command, const std::string &script, std::chrono::milliseconds timeout);

/// Parses `sat`/`unsat`/`unknown` followed by a get-model response.
SolverResult parse_solver_output(const std::string &text);

/// True when `command` answers a trivial query.
bool solver_available(const std::string &command);

// ---------------------------------------------------------------------------
// Traces and reports

struct TraceLine {
  std::string label;    // connection-qualified label, or the variable path
  std::string path;     // variable path
  std::int64_t value = 0;
  bool is_bool = false;
  std::string driven_by; // component path relative to the connection owner, may be empty

  std::string text() const;
};

struct AnnotatedTrace {
  std::string obligation;
  std::vector<std::vector<TraceLine>> steps;

  std::string text() const;
};

/// Renders each assignment with its driving component. Connection-driven
/// variables are labelled `<connection>.<field path>`.
AnnotatedTrace trace_counterexample(const CounterExample &cex, const TransitionSystem &ts,
                                    const InstanceModel &model, bool relevant_only = false);

/// Variables of the cone of influence of an obligation.
std::vector<int> cone_of_influence(const TransitionSystem &ts, const Obligation &ob);

struct ObligationResult {
  const Obligation *obligation = nullptr;
  Verdict verdict;
  std::string error_code; // set when the check raised
  std::string error;
};

/// Checks every obligation: k-induction first, then bounded search when
/// induction does not close. Results ordered by obligation name.
std::vector<ObligationResult> verify_all(const TransitionSystem &ts, int k, const CheckOptions &options);

} // namespace uasforge
