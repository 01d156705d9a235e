#include "uasforge/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uasforge/catalog.hpp"
#include "uasforge/claims.hpp"
#include "uasforge/codegen.hpp"
#include "uasforge/contract.hpp"
#include "uasforge/error.hpp"
#include "uasforge/model.hpp"

namespace uasforge {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string root;
  std::string solver;
  int k = 5;
  double timeout_s = 30;
  std::string backend = "auto";
  std::string out_dir;
  std::string report = "human";
  bool force = false;
  std::string system;
  std::string claims_config;
  std::string type_map;
  std::string properties;
};

struct Loaded {
  PackageSet packages;
  std::optional<InstanceModel> model;
  Diagnostics diagnostics;
};

std::vector<std::string> expand_inputs(const std::vector<std::string> &inputs) {
  std::vector<std::string> files;
  for (const auto &in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> here;
      for (const auto &e : fs::directory_iterator(in))
        if (e.path().extension() == ".uadl")
          here.push_back(e.path().string());
      std::sort(here.begin(), here.end());
      files.insert(files.end(), here.begin(), here.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

json diagnostic_json(const Diagnostic &d) {
  json j{{"severity", d.severity == Severity::error ? "error" : "warning"}, {"message", d.message}};
  if (!d.file.empty())
    j["file"] = d.file;
  if (d.span.line > 0) {
    j["line"] = d.span.line;
    j["column"] = d.span.col;
  }
  return j;
}

/// Parse, validate and instantiate. Errors end up in `diagnostics`.
void load(const RunConfig &cfg, Loaded &l) {
  for (const auto &f : expand_inputs(cfg.inputs)) {
    if (!fs::exists(f)) {
      l.diagnostics.push_back({Severity::error, "no such file", {}, f});
      continue;
    }
    auto d = l.packages.add_file(f);
    l.diagnostics.insert(l.diagnostics.end(), d.begin(), d.end());
  }
  if (has_errors(l.diagnostics))
    return;
  auto v = validate(l.packages);
  l.diagnostics.insert(l.diagnostics.end(), v.begin(), v.end());
  if (has_errors(l.diagnostics))
    return;
  try {
    l.model.emplace(instantiate(l.packages, cfg.root));
  } catch (const DiagnosticError &e) {
    l.diagnostics.insert(l.diagnostics.end(), e.diagnostics().begin(), e.diagnostics().end());
  } catch (const Error &e) {
    l.diagnostics.push_back({Severity::error, e.code() + ": " + e.what(), {}, {}});
  }
}

CheckOptions check_options(const RunConfig &cfg) {
  CheckOptions o;
  o.backend = *parse_backend(cfg.backend);
  o.solver = cfg.solver.empty() ? default_solver() : cfg.solver;
  o.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(cfg.timeout_s * 1000));
  return o;
}

// --- verify ------------------------------------------------------------------

struct VerifyOutcome {
  int code = exit_ok;
  json report;
  std::string text;
};

std::string pad(const std::string &s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

VerifyOutcome run_verify(const RunConfig &cfg, const InstanceModel &model) {
  VerifyOutcome o;
  CompileOptions co;
  if (!cfg.properties.empty())
    co.extras = load_property_catalog(cfg.properties).extras();
  auto ts = compile(model, co);
  auto results = verify_all(ts, cfg.k, check_options(cfg));
  bool falsified = false, unavailable = false, incomplete = false;
  json rows = json::array();
  std::ostringstream table, traces;
  table << pad("specification", 22) << pad("component", 34) << pad("status", 20) << "detail\n";
  for (const auto &r : results) {
    const auto &ob = *r.obligation;
    const std::string local = ob.name.substr(ob.component_path.size() + 1);
    json row{{"obligation", ob.name}, {"component_path", ob.component_path}, {"k", r.verdict.k}};
    std::string status, detail;
    if (!r.error_code.empty()) {
      status = "error";
      detail = r.error_code + ": " + r.error;
      row["error"] = detail;
      if (r.error_code == "SolverUnavailable")
        unavailable = true;
      incomplete = true;
    } else {
      const auto &v = r.verdict;
      status = std::string(to_string(v.status));
      row["backend"] = v.backend;
      if (!v.reason.empty())
        row["reason"] = v.reason;
      if (v.status == VerdictStatus::unknown) {
        incomplete = true;
        detail = v.reason;
      } else if (v.status == VerdictStatus::falsified) {
        falsified = true;
      }
      status += "(" + std::to_string(v.k) + ")";
      if (v.cex) {
        auto tr = trace_counterexample(*v.cex, ts, model, true);
        json steps = json::array();
        for (std::size_t t = 0; t < tr.steps.size(); ++t) {
          json as = json::array();
          for (const auto &l : tr.steps[t]) {
            json a{{"label", l.label}, {"path", l.path}};
            if (l.is_bool)
              a["value"] = l.value != 0;
            else
              a["value"] = l.value;
            if (!l.driven_by.empty())
              a["driven_by"] = l.driven_by;
            as.push_back(a);
          }
          steps.push_back({{"step", t}, {"assignments", as}});
        }
        row["trace"] = steps;
        traces << "\n" << tr.text();
        detail = "counterexample, " + std::to_string(tr.steps.size()) + (tr.steps.size() == 1 ? " step" : " steps");
      }
    }
    row["status"] = status.substr(0, status.find('('));
    table << pad(local, 22) << pad(ob.component_path, 34) << pad(status, 20) << detail << "\n";
    rows.push_back(row);
  }
  o.code = unavailable ? exit_no_solver : falsified ? exit_violation : incomplete ? exit_error : exit_ok;
  o.report = {{"command", "verify"}, {"root", cfg.root}, {"k", cfg.k}, {"results", rows}, {"exit_code", o.code}};
  o.text = table.str() + traces.str();
  return o;
}

// --- claims ------------------------------------------------------------------

json claim_json(const ClaimResult &r) {
  json j{{"claim", r.claim}, {"status", std::string(to_string(r.status))}, {"args", r.args}, {"witnesses", r.witnesses}};
  if (!r.description.empty())
    j["description"] = r.description;
  if (!r.note.empty())
    j["note"] = r.note;
  json ch = json::array();
  for (const auto &c : r.children)
    ch.push_back(claim_json(c));
  j["children"] = ch;
  return j;
}

struct ClaimsOutcome {
  int code = exit_ok;
  json report;
  std::string text;
};

ClaimsOutcome run_claims(const RunConfig &cfg, const InstanceModel &model) {
  ClaimsConfig cc = cfg.claims_config.empty() ? ClaimsConfig{} : load_claims_config(cfg.claims_config);
  cc.check = check_options(cfg);
  cc.k = cfg.k;
  std::vector<ClaimResult> results;
  results.push_back(check_instruction_encryption(model, cc));
  results.push_back(check_gps_data_security(model, cc));
  for (auto &r : prove_goals(model, cc))
    results.push_back(std::move(r));
  ClaimsOutcome o;
  json rows = json::array();
  for (const auto &r : results) {
    if (!r.proved())
      o.code = exit_violation;
    rows.push_back(claim_json(r));
    o.text += r.text();
  }
  o.report = {{"command", "claims"}, {"root", cfg.root}, {"results", rows}, {"exit_code", o.code}};
  return o;
}

// --- generate ----------------------------------------------------------------

std::string software_root(const InstanceModel &model) {
  std::vector<std::string> found;
  for (const auto *c : model.components())
    if (c->kind == ComponentKind::system && property_is_true(*c, "Role::SoftwareCore"))
      found.push_back(c->path);
  if (found.size() != 1)
    throw Error("MissingRoleAnnotation", found.empty() ? "no system carries Role::SoftwareCore => true; pass --system"
                                                       : "several systems carry Role::SoftwareCore; pass --system");
  return found.front();
}

// --- driver ------------------------------------------------------------------

void emit(const RunConfig &cfg, std::ostream &out, const json &report, const std::string &text) {
  if (cfg.report == "json")
    out << report.dump(2) << "\n";
  else
    out << text;
}

int dispatch(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
  Loaded l;
  load(cfg, l);
  if (!l.model) {
    if (cfg.report == "json") {
      json ds = json::array();
      for (const auto &d : l.diagnostics)
        ds.push_back(diagnostic_json(d));
      out << json{{"command", cfg.command}, {"root", cfg.root}, {"diagnostics", ds}, {"exit_code", exit_error}}.dump(2)
          << "\n";
    } else {
      err << format_all(l.diagnostics) << "\n";
    }
    return exit_error;
  }
  const InstanceModel &model = *l.model;

  if (cfg.command == "check") {
    compile(model);
    json ds = json::array();
    for (const auto &d : l.diagnostics)
      ds.push_back(diagnostic_json(d));
    if (!l.diagnostics.empty())
      err << format_all(l.diagnostics) << "\n";
    std::ostringstream text;
    text << "ok: " << model.components().size() << " components, " << model.connections().size()
         << " connections under " << cfg.root << "\n";
    emit(cfg, out, {{"command", "check"}, {"root", cfg.root}, {"diagnostics", ds}, {"exit_code", exit_ok}}, text.str());
    return exit_ok;
  }
  if (cfg.command == "verify") {
    auto o = run_verify(cfg, model);
    emit(cfg, out, o.report, o.text);
    return o.code;
  }
  if (cfg.command == "claims") {
    auto o = run_claims(cfg, model);
    emit(cfg, out, o.report, o.text);
    return o.code;
  }

  // generate
  const std::string system = cfg.system.empty() ? software_root(model) : cfg.system;
  std::vector<std::string> problems;
  try {
    auto v = run_verify(cfg, model);
    if (v.code != exit_ok)
      problems.push_back("verification did not pass (exit " + std::to_string(v.code) + ")");
    auto c = run_claims(cfg, model);
    if (c.code != exit_ok)
      problems.push_back("security claims failed");
  } catch (const Error &e) {
    problems.push_back(e.code() + ": " + e.what());
  }
  if (!problems.empty()) {
    for (const auto &p : problems)
      err << (cfg.force ? "warning: " : "error: ") << p << "\n";
    if (!cfg.force) {
      err << "refusing to generate; rerun with --force to override\n";
      if (cfg.report == "json")
        out << json{{"command", "generate"}, {"refused", true}, {"problems", problems}, {"exit_code", exit_violation}}
                   .dump(2)
            << "\n";
      return exit_violation;
    }
  }
  CodegenOptions co;
  if (!cfg.type_map.empty())
    co.type_map = load_type_map(cfg.type_map);
  auto tree = generate(model, system, co);
  auto s = write_tree(tree, cfg.out_dir);
  std::ostringstream text;
  text << "generated " << tree.entries.size() << " files for " << system << " in " << cfg.out_dir << ": "
       << s.written.size() << " written, " << s.unchanged.size() << " unchanged, " << s.removed.size()
       << " removed\n";
  emit(cfg, out,
       {{"command", "generate"},
        {"system", system},
        {"out", cfg.out_dir},
        {"forced", cfg.force && !problems.empty()},
        {"written", s.written},
        {"unchanged", s.unchanged},
        {"removed", s.removed},
        {"exit_code", exit_ok}},
       text.str());
  return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"uasforge: check, verify, claim-check and generate UAS architecture models", "uasforge"};
  app.require_subcommand(1);
  for (const char *name : {"check", "verify", "claims", "generate"}) {
    auto *sub = app.add_subcommand(name);
    sub->add_option("--root", cfg.root, "root system implementation, e.g. UAS.impl")->required();
    sub->add_option("--k", cfg.k, "bound for k-induction and bounded search")->check(CLI::PositiveNumber);
    sub->add_option("--timeout", cfg.timeout_s, "seconds per solver call")->check(CLI::PositiveNumber);
    sub->add_option("--backend", cfg.backend)->check(CLI::IsMember({"smt", "enumerate", "auto"}));
    sub->add_option("--solver", cfg.solver, "SMT-LIB2 solver command (default $UASFORGE_SOLVER)");
    sub->add_option("--out", cfg.out_dir, "output directory for generate");
    sub->add_option("--report", cfg.report)->check(CLI::IsMember({"human", "json"}));
    sub->add_flag("--force", cfg.force, "generate even when verification or claims fail");
    sub->add_option("--system", cfg.system, "software system instance path for generate");
    sub->add_option("--claims-config", cfg.claims_config, "JSON claims configuration");
    sub->add_option("--type-map", cfg.type_map, "JSON data type map for generate");
    sub->add_option("--properties", cfg.properties, "JSON property catalog whose checks are verified too");
    sub->add_option("files", cfg.inputs, "model files or directories")->required();
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }
  if (cfg.command == "generate" && cfg.out_dir.empty()) {
    err << "usage error: generate needs --out\n";
    return exit_usage;
  }

  auto fail = [&](const std::string &code, const std::string &what, int exit_code) {
    err << code << ": " << what << "\n";
    if (cfg.report == "json")
      out << json{{"command", cfg.command}, {"root", cfg.root}, {"error", code + ": " + what}, {"exit_code", exit_code}}
                 .dump(2)
          << "\n";
    return exit_code;
  };
  try {
    return dispatch(cfg, out, err);
  } catch (const DiagnosticError &e) {
    return fail(e.code(), e.what(), exit_error);
  } catch (const Error &e) {
    return fail(e.code(), e.what(), e.code() == "SolverUnavailable" ? exit_no_solver : exit_error);
  }
}

} // namespace uasforge
