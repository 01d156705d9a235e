#include "uasforge/corpus.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uasforge/error.hpp"

namespace uasforge {

namespace fs = std::filesystem;

const CorpusCheck *CorpusManifest::find(std::string_view id) const {
  for (const auto &c : checks)
    if (c.id == id)
      return &c;
  return nullptr;
}

const std::vector<std::string> &corpus_names() {
  static const std::vector<std::string> names{"uas_baseline", "uas_dutyfactor_bug", "uas_gps_plain",
                                              "uas_encryption_bypass", "uas_weak_cipher"};
  return names;
}

std::string corpus_dir() {
  if (const char *env = std::getenv("UASFORGE_CORPUS_DIR"); env && *env)
    return env;
  return UASFORGE_CORPUS_DIR;
}

CorpusManifest parse_manifest(std::string_view json_text) {
  try {
    auto j = nlohmann::json::parse(json_text);
    CorpusManifest m;
    m.entry = j.at("entry").get<std::string>();
    m.root = j.value("root", m.root);
    m.software_root = j.value("software_root", "");
    m.edit = j.value("edit", "");
    for (const auto &c : j.at("checks"))
      m.checks.push_back({c.at("id").get<std::string>(), c.at("expected").get<std::string>()});
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw Error("JsonError", std::string("invalid corpus manifest: ") + e.what());
  }
}

CorpusEntry load_corpus(std::string_view name) {
  const auto &names = corpus_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw Error("UnknownEntry", "no corpus entry named '" + std::string(name) + "'");
  CorpusEntry e;
  e.name = name;
  e.dir = (fs::path(corpus_dir()) / e.name).string();

  std::ifstream in(fs::path(e.dir) / "manifest.json");
  if (!in)
    throw Error("UnknownEntry", "corpus entry '" + e.name + "' has no manifest in " + e.dir);
  std::ostringstream text;
  text << in.rdbuf();
  e.manifest = parse_manifest(text.str());

  for (const auto &f : fs::directory_iterator(e.dir))
    if (f.path().extension() == ".uadl")
      e.files.push_back(f.path().string());
  std::sort(e.files.begin(), e.files.end());
  Diagnostics diags;
  for (const auto &f : e.files) {
    auto d = e.packages.add_file(f);
    diags.insert(diags.end(), d.begin(), d.end());
  }
  if (has_errors(diags))
    throw DiagnosticError("ParseFailed", std::move(diags));
  return e;
}

} // namespace uasforge
