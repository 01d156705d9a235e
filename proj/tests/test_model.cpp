#include <doctest.h>

#include <set>

#include "oracle.hpp"
#include "support.hpp"
#include "uasforge/model.hpp"

using namespace uasforge;

namespace {

const char *kSmall = R"(package Small public
  data Word
  end Word;
  thread Worker
    features
      x: in data port Word;
      y: out data port Word;
    properties
      Period => 10 ms;
  end Worker;
  process Proc
    features
      x: in data port Word;
      y: out data port Word;
  end Proc;
  process implementation Proc.impl
    subcomponents
      w: thread Worker { Priority => 4; };
    connections
      c_in: port x -> w.x;
      c_out: port w.y -> y;
  end Proc.impl;
  system Top
  end Top;
  system implementation Top.impl
    subcomponents
      p: process Proc.impl;
      q: process Proc.impl;
    connections
      pq: port p.y -> q.x;
  end Top.impl;
end Small;
)";

std::set<std::string> child_names(const ComponentInstance &c) {
  std::set<std::string> out;
  for (const auto &ch : c.children)
    out.insert(ch->name);
  return out;
}

Diagnostics validate_text(const std::string &text) {
  PackageSet ps;
  auto d = ps.add_text("<t>", text);
  REQUIRE_MESSAGE(!has_errors(d), format_all(d));
  return validate(ps);
}

bool mentions(const Diagnostics &d, const std::string &needle) {
  for (const auto &x : d)
    if (x.message.find(needle) != std::string::npos)
      return true;
  return false;
}

} // namespace

TEST_CASE("instantiate builds paths, features and connections") {
  auto m = support::from_text(kSmall, "Small::Top.impl");
  const auto &root = m->model->root();
  CHECK(root.path == "Top");
  CHECK(child_names(root) == std::set<std::string>{"p", "q"});
  const auto *w = m->model->component("Top.q.w");
  REQUIRE(w);
  CHECK(w->kind == ComponentKind::thread);
  CHECK(w->feature("x")->path == "Top.q.w.x");
  CHECK(lookup_property(*w, "Priority")->as_int()->value == 4);
  CHECK(lookup_property(*w, "Period")->as_int()->unit == "ms");
  CHECK(m->model->connections().size() == 5);
  CHECK(m->model->components().size() == 5);
}

TEST_CASE("instantiate rejects bad roots") {
  PackageSet ps;
  REQUIRE(ps.add_text("<t>", kSmall).empty());
  CHECK_THROWS_WITH_AS(instantiate(ps, "Small::Nope.impl"), doctest::Contains("Nope"), Error);
  try {
    instantiate(ps, "Small::Proc.impl");
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == "NotASystemImplementation");
  }
}

TEST_CASE("validation reports legality violations") {
  std::string bad = kSmall;
  bad.replace(bad.find("c_out: port w.y -> y;"), 21, "c_out: port w.x -> y;");
  CHECK(mentions(validate_text(bad), "not a source"));

  std::string unknown = kSmall;
  unknown.replace(unknown.find("Priority => 4;"), 14, "Bogus => 4;");
  CHECK(mentions(validate_text(unknown), "unknown property"));

  std::string dup = kSmall;
  dup.replace(dup.find("q: process"), 1, "p");
  CHECK(mentions(validate_text(dup), "duplicate subcomponent"));

  std::string illegal = kSmall;
  illegal.replace(illegal.find("w: thread Worker"), 16, "w: system Top   ");
  CHECK_FALSE(validate_text(illegal).empty());
}

TEST_CASE("corpus entries validate and instantiate") {
  for (const auto &name : corpus_names()) {
    auto e = load_corpus(name);
    CHECK_MESSAGE(validate(e.packages).empty(), name);
    CHECK_NOTHROW(instantiate(e.packages, e.manifest.root));
  }
}

TEST_CASE("corpus hierarchy follows the generic UAS structure") {
  auto f = support::corpus("uas_baseline");
  const auto &root = f->model->root();
  CHECK(child_names(root) == std::set<std::string>{"UAV", "GCS", "RC_Controller"});
  auto uav = child_names(*root.child("UAV"));
  for (const char *n : {"Pixhawk_Board", "CSW_corper", "pixhawk_io"})
    CHECK(uav.count(n));
  const auto *io = root.child("UAV")->child("pixhawk_io");
  for (int i = 0; i < 6; ++i)
    CHECK(io->child("motor" + std::to_string(i)));
  bool m7 = false;
  for (const auto *c : f->model->components())
    m7 = m7 || c->classifier.type_name() == "ARM_Cortex_M7";
  CHECK(m7);
}

TEST_CASE("hardware package holds processor, device and bus classifiers") {
  auto e = load_corpus("uas_baseline");
  std::set<ComponentKind> kinds;
  for (const auto &pkg : e.packages.packages())
    if (pkg.file.find("hardware.uadl") != std::string::npos)
      for (const auto &d : pkg.declarations)
        if (const auto *t = std::get_if<ComponentType>(&d))
          kinds.insert(t->kind);
  CHECK(kinds.count(ComponentKind::processor));
  CHECK(kinds.count(ComponentKind::device));
  CHECK(kinds.count(ComponentKind::bus));
}

TEST_CASE("connection graph links the ground station to the motors through the software core") {
  auto f = support::corpus("uas_baseline");
  auto g = connection_graph(*f->model);
  auto reach = [&](const std::string &from_prefix, const std::string &to_prefix) {
    for (const auto *a : g.nodes)
      if (a->path.rfind(from_prefix, 0) == 0)
        for (const auto *b : g.nodes)
          if (b->path.rfind(to_prefix, 0) == 0 && oracle::reaches(g, a->path, b->path))
            return true;
    return false;
  };
  CHECK(reach("UAS.GCS.", "UAS.UAV.Pixhawk_Board.receiver."));
  CHECK(reach("UAS.UAV.Pixhawk_Board.receiver.", "UAS.UAV.CSW_corper."));
  CHECK(reach("UAS.UAV.CSW_corper.", "UAS.UAV.pixhawk_io."));
  CHECK(reach("UAS.UAV.pixhawk_io.", "UAS.UAV.pixhawk_io.motor0."));
  CHECK(reach("UAS.GCS.", "UAS.UAV.pixhawk_io.motor0."));
  CHECK_FALSE(reach("UAS.UAV.pixhawk_io.motor0.", "UAS.GCS."));
}

TEST_CASE("data classifier helpers") {
  auto e = load_corpus("uas_baseline");
  auto cmd = resolve_classifier(e.packages, "msgs::MotorCmd.impl");
  CHECK(data_fields(cmd).size() == 6);
  auto motor = resolve_classifier(e.packages, "msgs::DutyFactor");
  auto lineage = data_lineage(e.packages, motor);
  REQUIRE(lineage.size() == 2);
  CHECK(lineage[1].qualified_name() == "Base::Integer");
}
