#include <doctest.h>

#include "oracle.hpp"
#include "support.hpp"
#include "uasforge/contract.hpp"

using namespace uasforge;

namespace {

// c counts 1, 2, 3, ... so "small" first fails at step 5.
const char *kCounter = R"(property set Data is
  Range: range of aadlinteger;
end Data;

package Base public
  data Integer
  end Integer;
end Base;

package Cnt public
  with Base;
  data Count extends Base::Integer
    properties
      Data::Range => 0 .. 100;
  end Count;
  data Word extends Base::Integer
  end Word;
  system Counter
    features
      c: out data port Count;
      w: out data port Word;
    annex agree {**
      assert "step": c = if prev(c, 0) < 100 then prev(c, 0) + 1 else 100;
      guarantee "small": c <= 5;
      guarantee "positive": c >= 1;
      guarantee "free": w = w;
    **};
  end Counter;
  system Top
  end Top;
  system implementation Top.impl
    subcomponents
      k: system Counter;
  end Top.impl;
end Cnt;
)";

CheckOptions enumerate_only() {
  CheckOptions o;
  o.backend = Backend::enumerate;
  return o;
}

CheckOptions smt_only() {
  CheckOptions o;
  o.backend = Backend::smt;
  o.solver = support::solver();
  return o;
}

void check_replays(const TransitionSystem &ts, const Verdict &v) {
  REQUIRE(v.cex);
  auto r = oracle::replay(ts, *v.cex);
  CHECK_MESSAGE(r.consistent(), r.why);
  CHECK(r.violated);
}

} // namespace

TEST_CASE("baseline compiles to the expected obligations") {
  auto f = support::corpus("uas_baseline");
  auto ts = compile(*f->model);
  std::vector<std::string> names;
  for (const auto &ob : ts.obligations)
    names.push_back(ob.name);
  CHECK(names == std::vector<std::string>{"UAS.UAV.Pixhawk_Board.gps.hdr1", "UAS.UAV.Pixhawk_Board.gps.hdr2",
                                          "UAS.UAV.Pixhawk_Board.gps.len", "UAS.UAV.pixhawk_io.motor_duty_range"});
  for (const auto &v : ts.variables)
    if (!v.is_bool && v.kind != VarKind::combinational)
      CHECK_MESSAGE(v.bounded(), v.path);
}

TEST_CASE("duty factor bug is found with a value in (1500, 2000]") {
  auto f = support::corpus("uas_dutyfactor_bug");
  auto ts = compile(*f->model);
  auto v = enumerate_check(ts, "UAS.UAV.pixhawk_io.motor_duty_range", 3);
  REQUIRE(v.status == VerdictStatus::falsified);
  check_replays(ts, v);
  auto tr = trace_counterexample(*v.cex, ts, *f->model, true);
  bool in_range = false;
  for (const auto &l : tr.steps.back())
    if (l.path.find("dutyfactor") != std::string::npos && l.value > 1500 && l.value <= 2000)
      in_range = true;
  CHECK(in_range);
  CHECK(tr.text().find("counterexample for UAS.UAV.pixhawk_io.motor_duty_range") == 0);
  CHECK(tr.text().find("(driven by CSW_corper.control)") != std::string::npos);
}

TEST_CASE("baseline duty range holds bounded and inductively") {
  auto f = support::corpus("uas_baseline");
  auto ts = compile(*f->model);
  auto b = enumerate_check(ts, "UAS.UAV.pixhawk_io.motor_duty_range", 10);
  CHECK(b.status == VerdictStatus::valid_bounded);
  CHECK(b.k == 10);
  auto i = enumerate_kinduction(ts, "UAS.UAV.pixhawk_io.motor_duty_range", 5);
  CHECK(i.status == VerdictStatus::valid_inductive);
}

TEST_CASE("GPS header guarantees hold and a wrong constant is caught in one step") {
  auto f = support::corpus("uas_baseline");
  auto ts = compile(*f->model);
  for (const char *ob : {"UAS.UAV.Pixhawk_Board.gps.hdr1", "UAS.UAV.Pixhawk_Board.gps.hdr2",
                         "UAS.UAV.Pixhawk_Board.gps.len"})
    CHECK(enumerate_kinduction(ts, ob, 3).status == VerdictStatus::valid_inductive);

  auto m = support::mutant("uas_baseline", "hardware.uadl", "gps_out.field1 = 265 and", "gps_out.field1 = 264 and");
  auto mts = compile(*m->model);
  auto v = enumerate_check(mts, "UAS.UAV.Pixhawk_Board.gps.hdr1", 5);
  REQUIRE(v.status == VerdictStatus::falsified);
  CHECK(v.cex->values.size() == 1);
  check_replays(mts, v);
  CHECK(enumerate_check(mts, "UAS.UAV.Pixhawk_Board.gps.hdr2", 5).status == VerdictStatus::valid_bounded);
}

TEST_CASE("k-induction on a counter needs the full depth") {
  auto m = support::from_text(kCounter, "Cnt::Top.impl");
  auto ts = compile(*m->model);
  for (int k = 1; k < 6; ++k) {
    auto v = enumerate_kinduction(ts, "Top.k.small", k);
    CHECK_MESSAGE(v.status == VerdictStatus::unknown, "k=" << k);
  }
  for (int k : {6, 8}) {
    auto v = enumerate_kinduction(ts, "Top.k.small", k);
    REQUIRE(v.status == VerdictStatus::falsified);
    CHECK(v.cex->values.size() == 6);
    check_replays(ts, v);
  }
  // A bound of k covers steps 0 .. k-1.
  CHECK(enumerate_check(ts, "Top.k.small", 5).status == VerdictStatus::valid_bounded);
  CHECK(enumerate_check(ts, "Top.k.small", 6).status == VerdictStatus::falsified);
  auto pos = enumerate_kinduction(ts, "Top.k.positive", 3);
  CHECK(pos.status == VerdictStatus::valid_inductive);
}

TEST_CASE("enumerator errors") {
  auto m = support::from_text(kCounter, "Cnt::Top.impl");
  auto ts = compile(*m->model);
  CHECK_THROWS_WITH_AS(enumerate_check(ts, "Top.k.nope", 1), doctest::Contains("nope"), Error);
  try {
    enumerate_check(ts, "Top.k.small", 5, 10);
    FAIL("expected BudgetExceeded");
  } catch (const Error &e) {
    CHECK(e.code() == "BudgetExceeded");
  }
  try {
    enumerate_check(ts, "Top.k.free", 2);
    FAIL("expected UnboundedVariable");
  } catch (const Error &e) {
    CHECK(e.code() == "UnboundedVariable");
  }
  try {
    CompileOptions strict;
    strict.require_finite = true;
    compile(*m->model, strict);
    FAIL("expected UnboundedVariable");
  } catch (const Error &e) {
    CHECK(e.code() == "UnboundedVariable");
  }
}

TEST_CASE("extra obligations are checked in the component context") {
  auto m = support::from_text(kCounter, "Cnt::Top.impl");
  CompileOptions o;
  o.extras.push_back({"Top.k", "ten", "c <= 10"});
  auto ts = compile(*m->model, o);
  REQUIRE(ts.find_obligation("Top.k.ten"));
  auto v = enumerate_check(ts, "Top.k.ten", 12);
  REQUIRE(v.status == VerdictStatus::falsified);
  CHECK(v.cex->values.size() == 11);
}

TEST_CASE("verify_all orders results and falls back to bounded search") {
  auto m = support::from_text(kCounter, "Cnt::Top.impl");
  auto ts = compile(*m->model);
  auto rs = verify_all(ts, 3, enumerate_only());
  REQUIRE(rs.size() == 3);
  CHECK(rs[0].obligation->name == "Top.k.free");
  CHECK(rs[0].error_code == "UnboundedVariable");
  CHECK(rs[1].verdict.status == VerdictStatus::valid_inductive);
  CHECK(rs[2].obligation->name == "Top.k.small");
  CHECK(rs[2].verdict.status == VerdictStatus::valid_bounded);
  CHECK(rs[2].verdict.k == 3);
  CHECK_FALSE(rs[2].verdict.reason.empty());
}

TEST_CASE("SMT-LIB emission and solver output parsing") {
  auto m = support::from_text(kCounter, "Cnt::Top.impl");
  auto ts = compile(*m->model);
  auto script = emit_smtlib(ts, *ts.find_obligation("Top.k.small"), 2);
  CHECK(script.find("(set-logic QF_LIA)") == 0);
  CHECK(script.find("(check-sat)") != std::string::npos);
  CHECK(script.find("|Top.k.c_2|") != std::string::npos);

  auto r = parse_solver_output("sat\n(\n  (define-fun |a_0| () Int (- 7))\n  (define-fun |b_1| () Bool true)\n)\n");
  CHECK(r.answer == SolverResult::Answer::sat);
  CHECK(r.model.at("a_0") == -7);
  CHECK(r.model.at("b_1") == 1);
  CHECK(parse_solver_output("unsat\n").answer == SolverResult::Answer::unsat);
}

TEST_CASE("missing solver is reported") {
  auto m = support::from_text(kCounter, "Cnt::Top.impl");
  auto ts = compile(*m->model);
  CHECK_FALSE(solver_available("/nonexistent/solver -in"));
  CheckOptions o;
  o.backend = Backend::smt;
  o.solver = "/nonexistent/solver -in";
  try {
    check_bmc(ts, "Top.k.small", 2, o);
    FAIL("expected SolverUnavailable");
  } catch (const Error &e) {
    CHECK(e.code() == "SolverUnavailable");
  }
  CheckOptions automatic;
  automatic.solver = "/nonexistent/solver -in";
  CHECK(check_bmc(ts, "Top.k.small", 5, automatic).backend == "enumerate");
}

TEST_CASE("SMT backend agrees with the enumerator on the counter") {
  if (!solver_available(support::solver())) {
    MESSAGE("no SMT solver configured; SMT leg skipped");
    return;
  }
  auto m = support::from_text(kCounter, "Cnt::Top.impl");
  auto ts = compile(*m->model);
  for (const char *ob : {"Top.k.small", "Top.k.positive"})
    for (int k : {1, 3, 5, 6}) {
      auto a = check_kinduction(ts, ob, k, smt_only());
      auto b = check_kinduction(ts, ob, k, enumerate_only());
      CHECK_MESSAGE(a.status == b.status, ob << " k=" << k);
      if (a.cex)
        check_replays(ts, a);
    }
}
