#include <doctest.h>

#include <functional>

#include "oracle.hpp"
#include "support.hpp"
#include "uasforge/catalog.hpp"

using namespace uasforge;

namespace {

std::string code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

std::map<std::string, VerdictStatus> run(const InstanceModel &m, const PropertyCatalog &cat, int k) {
  CompileOptions o;
  o.extras = cat.extras();
  auto ts = compile(m, o);
  std::map<std::string, VerdictStatus> out;
  for (const auto &c : cat.checks) {
    auto v = enumerate_kinduction(ts, c.component_path + "." + c.name, k);
    if (v.cex) {
      auto r = oracle::replay(ts, *v.cex);
      CHECK_MESSAGE(r.consistent(), r.why);
      CHECK(r.violated);
    }
    out[c.name] = v.status;
  }
  return out;
}

bool valid(VerdictStatus s) { return s == VerdictStatus::valid_inductive || s == VerdictStatus::valid_bounded; }

} // namespace

TEST_CASE("templates substitute their parameters") {
  PropertyTemplate t{"range", "", {"value", "low", "high"}, "{value} >= {low} and {value} <= {high}"};
  CHECK(t.instantiate({{"value", "x.y"}, {"low", "1"}, {"high", "9"}}) == "x.y >= 1 and x.y <= 9");
  CHECK(code_of([&] { t.instantiate({{"value", "x"}, {"low", "1"}}); }) == "ConfigError");
  CHECK(code_of([&] { t.instantiate({{"value", "x"}, {"low", "1"}, {"high", "2"}, {"step", "3"}}); }) ==
        "ConfigError");
  PropertyTemplate bad{"bad", "", {"a"}, "{a"};
  CHECK(code_of([&] { bad.instantiate({{"a", "1"}}); }) == "ConfigError");
}

TEST_CASE("catalog parsing") {
  auto cat = parse_property_catalog(R"({"templates": [{"name": "t", "params": ["f"], "expr": "{f} > 0"}],
                                        "checks": [{"template": "t", "component": "A", "args": {"f": "x"}}]})");
  REQUIRE(cat.checks.size() == 1);
  CHECK(cat.checks[0].name == "t_0");
  CHECK(cat.extras()[0].expr == "x > 0");
  CHECK(code_of([] { parse_property_catalog("{\"templates\": [{\"name\": 3}]}"); }) == "ConfigError");
  CHECK(code_of([] {
          parse_property_catalog(R"({"templates": [{"name": "t", "expr": "x"}, {"name": "t", "expr": "y"}]})");
        }) == "ConfigError");
  auto unknown = parse_property_catalog(R"({"checks": [{"template": "nope", "component": "A"}]})");
  CHECK(code_of([&] { unknown.extras(); }) == "ConfigError");
  CHECK(code_of([] { load_property_catalog("/nonexistent/catalog.json"); }) == "ConfigError");
}

TEST_CASE("shipped catalog holds on the baseline and catches the seeded faults") {
  auto cat = load_property_catalog(UASFORGE_SOURCE_DIR "/config/properties.json");
  for (const char *t : {"header_constant", "positive", "range", "bounded_step", "flag_clear", "implies"})
    CHECK(cat.find(t));

  auto base = support::corpus("uas_baseline");
  for (const auto &[name, s] : run(*base->model, cat, 3))
    CHECK_MESSAGE(valid(s), name);

  auto bug = support::corpus("uas_dutyfactor_bug");
  for (const auto &[name, s] : run(*bug->model, cat, 3))
    CHECK_MESSAGE((name.rfind("motor", 0) == 0) == (s == VerdictStatus::falsified), name);

  auto gps = support::mutant("uas_baseline", "hardware.uadl", "gps_out.field1 = 265 and", "gps_out.field1 = 264 and");
  auto seen = run(*gps->model, cat, 3);
  CHECK(seen.at("gps_header1") == VerdictStatus::falsified);
  CHECK(valid(seen.at("gps_header2")));
}

TEST_CASE("step template bounds GPS movement") {
  auto cat = load_property_catalog(UASFORGE_SOURCE_DIR "/config/properties.json");
  cat.checks = {{"lat_step", "bounded_step", "UAS.UAV.Pixhawk_Board.gps", {{"value", "gps_out.lat"}, {"step", "50"}}},
                {"lat_tight", "bounded_step", "UAS.UAV.Pixhawk_Board.gps", {{"value", "gps_out.lat"}, {"step", "49"}}}};
  auto f = support::corpus("uas_baseline");
  auto seen = run(*f->model, cat, 3);
  CHECK(valid(seen.at("lat_step")));
  CHECK(seen.at("lat_tight") == VerdictStatus::falsified);
}
