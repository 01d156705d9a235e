#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uasforge/model.hpp"

namespace uasforge {

struct CorpusCheck {
  std::string id;       // "verify:<obligation>" or "claim:<claim>"
  std::string expected; // valid | falsified | proved | failed
};

struct CorpusManifest {
  std::string entry;
  std::string root = "UAS.impl";
  std::string software_root; // instance path of the generated subtree
  std::string edit;          // how the entry differs from uas_baseline
  std::vector<CorpusCheck> checks;

  const CorpusCheck *find(std::string_view id) const;
};

struct CorpusEntry {
  std::string name;
  std::string dir;
  std::vector<std::string> files; // sorted .uadl paths
  CorpusManifest manifest;
  PackageSet packages;
};

/// Bundled entry names, baseline first.
const std::vector<std::string> &corpus_names();
/// $UASFORGE_CORPUS_DIR when set, else the corpus in the source tree.
std::string corpus_dir();

/// Throws Error("JsonError").
CorpusManifest parse_manifest(std::string_view json_text);

/// Parsed package set and manifest of a bundled entry. Throws
/// Error("UnknownEntry"), or DiagnosticError("ParseFailed") when a file
/// does not parse.
CorpusEntry load_corpus(std::string_view name);

} // namespace uasforge
