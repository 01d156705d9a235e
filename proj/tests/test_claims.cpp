#include <doctest.h>

#include <sstream>

#include "oracle.hpp"
#include "support.hpp"
#include "uasforge/claims.hpp"

using namespace uasforge;

namespace {

ClaimsConfig cfg() {
  ClaimsConfig c;
  c.check.backend = Backend::enumerate;
  return c;
}

const ClaimResult *child(const ClaimResult &r, const std::string &name) {
  for (const auto &c : r.children)
    if (c.claim == name)
      return &c;
  return nullptr;
}

std::vector<std::string> split_path(const std::string &text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    auto next = text.find(" -> ", pos);
    out.push_back(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos)
      return out;
    pos = next + 4;
  }
}

bool type_encrypted(const InstanceModel &m, const FeatureInstance &f) {
  if (!f.data_type)
    return false;
  auto p = data_property(m.packages(), *f.data_type, "Security::Encrypted");
  return p && p->as_bool() && *p->as_bool();
}

/// Every consecutive pair of a witness path is an edge of the graph.
void check_edges(const InstanceModel &m, const std::vector<std::string> &features) {
  auto g = connection_graph(m);
  for (std::size_t i = 0; i + 1 < features.size(); ++i) {
    int a = g.index_of(features[i]), b = g.index_of(features[i + 1]);
    REQUIRE_MESSAGE(a >= 0, features[i]);
    REQUIRE_MESSAGE(b >= 0, features[i + 1]);
    CHECK_MESSAGE(g.has_edge(a, b), features[i] << " -> " << features[i + 1]);
  }
}

const char *kDiamond = R"(package D public
  data W
  end W;
  system N
    features
      i: in data port W;
      o: out data port W;
  end N;
  system J
    features
      i: in data port W;
      j: in data port W;
  end J;
  system Top
  end Top;
  system implementation Top.impl
    subcomponents
      a: system N;
      b: system N;
      c: system N;
      d: system J;
      lone: system N;
    connections
      ab: port a.o -> b.i;
      ac: port a.o -> c.i;
      bd: port b.o -> d.i;
      cd: port c.o -> d.j;
  end Top.impl;
end D;
)";

} // namespace

TEST_CASE("instruction encryption is proved on the baseline with three steps") {
  auto f = support::corpus("uas_baseline");
  auto r = check_instruction_encryption(*f->model, cfg());
  CHECK(r.proved());
  REQUIRE(r.children.size() == 3);
  CHECK(r.children[0].claim == "instruction_verification");
  CHECK(r.children[1].claim == "encryption_algorithm");
  CHECK(r.children[2].claim == "motors_accept_only_encrypted");
  CHECK(r.children[2].children.size() == 6);
  CHECK(r.text() == check_instruction_encryption(*f->model, cfg()).text());
}

TEST_CASE("GPS data security is proved on the baseline with two steps") {
  auto f = support::corpus("uas_baseline");
  auto r = check_gps_data_security(*f->model, cfg());
  CHECK(r.proved());
  REQUIRE(r.children.size() == 2);
  CHECK(r.children[0].claim == "gps_trajectory_linear");
  CHECK(r.children[1].claim == "gps_data_encrypted");
}

TEST_CASE("user prove goals expand over the six motors") {
  auto f = support::corpus("uas_baseline");
  auto goals = prove_goals(*f->model, cfg());
  REQUIRE(goals.size() == 1);
  CHECK(goals[0].proved());
  CHECK(goals[0].children.size() == 6);
  CHECK(goals[0].children[0].args.at(0) == "UAS.UAV.pixhawk_io.motor0");
}

TEST_CASE("bypass reaches the motors without an encryptor") {
  auto f = support::corpus("uas_encryption_bypass");
  const auto &m = *f->model;
  auto r = check_instruction_encryption(m, cfg());
  CHECK_FALSE(r.proved());
  CHECK(r.children[0].proved());
  CHECK(r.children[1].proved());
  const auto &motors = r.children[2];
  CHECK_FALSE(motors.proved());
  bool motor2 = false;
  for (const auto &mc : motors.children) {
    if (mc.proved())
      continue;
    motor2 = motor2 || mc.args.at(0) == "UAS.UAV.pixhawk_io.motor2";
    REQUIRE_FALSE(mc.witnesses.empty());
    for (const auto &w : mc.witnesses) {
      auto parts = split_path(w);
      check_edges(m, parts);
      // Re-check the local formula on the witness alone.
      bool encryptor = false;
      for (const auto &p : parts)
        encryptor = encryptor || property_is_true(*m.feature(p)->owner, "Security::Encrypts");
      bool arrives_encrypted = type_encrypted(m, *m.feature(parts.back()));
      const bool protected_path = encryptor && arrives_encrypted;
      CHECK_FALSE_MESSAGE(protected_path, w);
      CHECK(m.feature(parts.front())->owner->path.rfind("UAS.GCS", 0) == 0);
    }
  }
  CHECK(motor2);
}

TEST_CASE("weak cipher fails the algorithm step with the encryptor as witness") {
  auto f = support::corpus("uas_weak_cipher");
  const auto &m = *f->model;
  auto r = check_instruction_encryption(m, cfg());
  CHECK_FALSE(r.proved());
  const auto *alg = child(r, "encryption_algorithm");
  REQUIRE(alg);
  CHECK_FALSE(alg->proved());
  REQUIRE(alg->witnesses == std::vector<std::string>{"UAS.UAV.CSW_corper.commander.cmd_auth"});
  const auto *c = m.component(alg->witnesses[0]);
  auto algo = lookup_property(*c, "Security::Algorithm");
  REQUIRE(algo);
  CHECK_FALSE(cfg().approved_algorithms.count(algo->as_string()->value));
  CHECK(child(r, "motors_accept_only_encrypted")->proved());
}

TEST_CASE("plain GPS frames fail the encryption step with a path witness") {
  auto f = support::corpus("uas_gps_plain");
  const auto &m = *f->model;
  auto r = check_gps_data_security(m, cfg());
  CHECK_FALSE(r.proved());
  CHECK(r.children[0].proved());
  const auto &enc = r.children[1];
  CHECK_FALSE(enc.proved());
  REQUIRE_FALSE(enc.witnesses.empty());
  for (const auto &w : enc.witnesses) {
    auto parts = split_path(w);
    check_edges(m, parts);
    CHECK(parts.front().rfind("UAS.UAV.Pixhawk_Board.gps.", 0) == 0);
    CHECK(parts.back().rfind("UAS.UAV.CSW_corper.", 0) == 0);
    bool plain = false;
    for (const auto &p : parts)
      plain = plain || !type_encrypted(m, *m.feature(p));
    CHECK(plain);
  }
  CHECK(check_instruction_encryption(m, cfg()).proved());
}

TEST_CASE("a GPS driver allowing ten times the step fails trajectory linearity") {
  auto mut = support::mutant("uas_baseline", "hardware.uadl",
                             "gps_out.lat - prev(gps_out.lat, gps_out.lat) <= 50\n"
                             "        and prev(gps_out.lat, gps_out.lat) - gps_out.lat <= 50;",
                             "gps_out.lat - prev(gps_out.lat, gps_out.lat) <= 500\n"
                             "        and prev(gps_out.lat, gps_out.lat) - gps_out.lat <= 500;");
  auto r = check_gps_data_security(*mut->model, cfg());
  CHECK_FALSE(r.proved());
  const auto &lin = r.children[0];
  CHECK_FALSE(lin.proved());
  REQUIRE(lin.children.size() == 1);
  CHECK(lin.children[0].note.find("linear_gps_out_lat: falsified") != std::string::npos);
  CHECK(lin.children[0].note.find("linear_gps_out_lon: valid") != std::string::npos);
  CHECK(r.children[1].proved());
}

TEST_CASE("all_paths enumerates simple paths in order") {
  auto m = support::from_text(kDiamond, "D::Top.impl");
  auto g = connection_graph(*m->model);
  auto a = m->model->feature("Top.a.o");
  auto d = m->model->feature("Top.d.i");
  auto dj = m->model->feature("Top.d.j");
  auto paths = all_paths(g, {a}, {d, dj});
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].text() == "Top.a.o -> Top.b.i -> Top.b.o -> Top.d.i");
  CHECK(paths[1].text() == "Top.a.o -> Top.c.i -> Top.c.o -> Top.d.j");
  CHECK(all_paths(g, {m->model->feature("Top.lone.o")}, {d}).empty());
  try {
    all_paths(g, {a}, {d, dj}, 1);
    FAIL("expected PathBudgetExceeded");
  } catch (const Error &e) {
    CHECK(e.code() == "PathBudgetExceeded");
  }
}

TEST_CASE("every ground-to-motor path passes the command authenticator") {
  auto f = support::corpus("uas_baseline");
  const auto &m = *f->model;
  auto g = connection_graph(m);
  std::vector<const FeatureInstance *> sources, sinks;
  for (const auto &ft : m.component("UAS.GCS")->features)
    if (ft.decl->is_outgoing())
      sources.push_back(&ft);
  for (const auto &ft : m.component("UAS.UAV.pixhawk_io.motor0")->features)
    if (ft.decl->is_incoming())
      sinks.push_back(&ft);
  auto paths = all_paths(g, sources, sinks);
  REQUIRE_FALSE(paths.empty());
  for (const auto &p : paths) {
    std::vector<std::string> parts;
    bool auth = false;
    for (const auto *ft : p.features) {
      parts.push_back(ft->path);
      auth = auth || ft->owner->path == "UAS.UAV.CSW_corper.commander.cmd_auth";
    }
    check_edges(m, parts);
    CHECK_MESSAGE(auth, p.text());
    CHECK(oracle::reaches(g, parts.front(), parts.back()));
  }
}

TEST_CASE("claim evaluation errors and vacuous quantifiers") {
  auto f = support::corpus("uas_baseline");
  const auto &m = *f->model;
  auto local = parse_claim_annex(R"(claim none_below(c: component) : forall s in subcomponents(c) : false;)");
  REQUIRE(local.ok());
  auto r = evaluate_claim(m, "none_below", {"UAS.UAV.pixhawk_io.motor0"}, cfg(), &*local.value);
  CHECK(r.proved());
  auto r2 = evaluate_claim(m, "none_below", {"UAS.UAV"}, cfg(), &*local.value);
  CHECK_FALSE(r2.proved());
  CHECK_FALSE(r2.witnesses.empty());
  try {
    evaluate_claim(m, "no_such_claim", {}, cfg());
    FAIL("expected UnresolvedPredicate");
  } catch (const Error &e) {
    CHECK(e.code() == "UnresolvedPredicate");
  }
  try {
    evaluate_claim(m, "check_instruction_encryption", {}, cfg());
    FAIL("expected ArityMismatch");
  } catch (const Error &e) {
    CHECK(e.code() == "ArityMismatch");
  }
}

TEST_CASE("built-in checks need role annotations") {
  auto m = support::from_text(kDiamond, "D::Top.impl");
  try {
    check_instruction_encryption(*m->model, cfg());
    FAIL("expected MissingRoleAnnotation");
  } catch (const Error &e) {
    CHECK(e.code() == "MissingRoleAnnotation");
  }
  CHECK_THROWS_AS(check_gps_data_security(*m->model, cfg()), Error);
}

TEST_CASE("claims configuration") {
  auto c = parse_claims_config(R"({"approved_algorithms": ["aes256"], "min_key_bits": 256, "path_cap": 5, "k": 3})");
  CHECK(c.approved_algorithms == std::set<std::string>{"aes256"});
  CHECK(c.min_key_bits == 256);
  CHECK(c.path_cap == 5);
  CHECK(c.k == 3);
  CHECK_THROWS_AS(parse_claims_config("{\"min_key_bits\": \"x\"}"), Error);
  auto shipped = load_claims_config(std::string(UASFORGE_SOURCE_DIR) + "/config/claims.json");
  CHECK(shipped.approved_algorithms == ClaimsConfig{}.approved_algorithms);

  auto f = support::corpus("uas_baseline");
  auto strict = cfg();
  strict.min_key_bits = 512;
  CHECK_FALSE(check_instruction_encryption(*f->model, strict).proved());
}

TEST_CASE("claim library parses and lists its signatures") {
  CHECK(claim_library().find("check_instruction_encryption"));
  CHECK(claim_library().find("check_gps_data_security"));
  CHECK(library_claim_signatures().at("motor_inputs_protected") == 1);
}
