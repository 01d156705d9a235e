#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "support.hpp"
#include "uasforge/cli.hpp"
#include "uasforge/corpus.hpp"

using namespace uasforge;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string entry(const std::string &name) { return corpus_dir() + "/" + name; }

nlohmann::json json_of(const Run &r) {
  INFO(r.out << r.err);
  return nlohmann::json::parse(r.out);
}

} // namespace

TEST_CASE("check") {
  auto r = cli({"check", "--root", "UAS.impl", entry("uas_baseline")});
  CHECK(r.code == exit_ok);
  auto j = json_of(cli({"check", "--root", "UAS.impl", "--report", "json", entry("uas_baseline")}));
  CHECK(j["command"] == "check");
  CHECK(j["diagnostics"].empty());
  CHECK(j["exit_code"] == 0);

  auto bad = cli({"check", "--root", "UAS.nope", entry("uas_baseline")});
  CHECK(bad.code == exit_error);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == exit_usage);
  CHECK(cli({"check", entry("uas_baseline")}).code == exit_usage);
  CHECK(cli({"verify", "--root", "UAS.impl", "--backend", "magic", entry("uas_baseline")}).code == exit_usage);
  CHECK(cli({"generate", "--root", "UAS.impl", entry("uas_baseline")}).code == exit_usage);
}

TEST_CASE("verify reports the duty factor counterexample") {
  auto ok = cli({"verify", "--root", "UAS.impl", "--backend", "enumerate", entry("uas_baseline")});
  CHECK(ok.code == exit_ok);

  auto r = cli({"verify", "--root", "UAS.impl", "--backend", "enumerate", "--k", "3", entry("uas_dutyfactor_bug")});
  CHECK(r.code == exit_violation);
  CHECK(r.out.find("motor_duty_range") != std::string::npos);
  CHECK(r.out.find("(driven by CSW_corper.control)") != std::string::npos);

  auto j = json_of(cli({"verify", "--root", "UAS.impl", "--backend", "enumerate", "--report", "json",
                        entry("uas_dutyfactor_bug")}));
  CHECK(j["exit_code"] == exit_violation);
  bool found = false;
  for (const auto &res : j["results"]) {
    if (res["obligation"] != "UAS.UAV.pixhawk_io.motor_duty_range")
      continue;
    CHECK(res["status"] == "falsified");
    for (const auto &a : res["trace"].back()["assignments"]) {
      const std::string path = a["path"];
      const long v = a["value"];
      found = found || (path.find("dutyfactor") != std::string::npos && v > 1500 && v <= 2000);
    }
  }
  CHECK(found);
}

TEST_CASE("verify with an unavailable solver") {
  auto r = cli({"verify", "--root", "UAS.impl", "--backend", "smt", "--solver", "/nonexistent/z3 -in",
                entry("uas_baseline")});
  CHECK(r.code == exit_no_solver);
}

TEST_CASE("claims") {
  CHECK(cli({"claims", "--root", "UAS.impl", entry("uas_baseline")}).code == exit_ok);
  for (const char *bad : {"uas_encryption_bypass", "uas_weak_cipher", "uas_gps_plain"})
    CHECK_MESSAGE(cli({"claims", "--root", "UAS.impl", entry(bad)}).code == exit_violation, bad);
  auto j = json_of(cli({"claims", "--root", "UAS.impl", "--report", "json", entry("uas_weak_cipher")}));
  bool saw = false;
  for (const auto &res : j["results"])
    if (res["claim"] == "check_instruction_encryption") {
      saw = true;
      CHECK(res["status"] == "failed");
      CHECK_FALSE(res["witnesses"].empty());
    }
  CHECK(saw);
}

TEST_CASE("generate is gated on verification and claims") {
  auto out = fs::temp_directory_path() / "uasforge_cli_gen";
  fs::remove_all(out);
  auto r = cli({"generate", "--root", "UAS.impl", "--backend", "enumerate", "--out", out.string(),
                entry("uas_baseline")});
  CHECK(r.code == exit_ok);
  CHECK(fs::exists(out / "CSW_corper" / "CSW_corper.hpp"));
  auto again = json_of(cli({"generate", "--root", "UAS.impl", "--backend", "enumerate", "--report", "json", "--out",
                            out.string(), entry("uas_baseline")}));
  CHECK(again["written"].empty());
  CHECK(again["unchanged"].size() == 20);

  auto bug = fs::temp_directory_path() / "uasforge_cli_gen_bug";
  fs::remove_all(bug);
  auto refused = cli({"generate", "--root", "UAS.impl", "--backend", "enumerate", "--out", bug.string(),
                      entry("uas_dutyfactor_bug")});
  CHECK(refused.code == exit_violation);
  CHECK_FALSE(fs::exists(bug / "CSW_corper"));
  auto forced = cli({"generate", "--root", "UAS.impl", "--backend", "enumerate", "--force", "--out", bug.string(),
                     entry("uas_dutyfactor_bug")});
  CHECK(forced.code == exit_ok);
  CHECK_FALSE(forced.err.empty());
  fs::remove_all(out);
  fs::remove_all(bug);
}
