#pragma once

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "uasforge/corpus.hpp"
#include "uasforge/error.hpp"
#include "uasforge/model.hpp"

namespace support {

/// Solver command configured by the build, empty when none was found.
inline std::string solver() {
  const char *s = std::getenv("UASFORGE_TEST_SOLVER");
  return s ? s : "";
}

inline std::string read(const std::string &path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Fixture {
  uasforge::CorpusEntry entry;
  std::optional<uasforge::InstanceModel> model;
};

inline std::unique_ptr<Fixture> corpus(const std::string &name) {
  auto f = std::make_unique<Fixture>(Fixture{uasforge::load_corpus(name), std::nullopt});
  f->model.emplace(uasforge::instantiate(f->entry.packages, f->entry.manifest.root));
  return f;
}

/// An entry's files with one textual replacement in `file`.
struct Mutant {
  uasforge::PackageSet packages;
  std::optional<uasforge::InstanceModel> model;
};

inline std::unique_ptr<Mutant> mutant(const std::string &entry, const std::string &file, const std::string &from,
                                      const std::string &to) {
  auto m = std::make_unique<Mutant>();
  auto e = uasforge::load_corpus(entry);
  bool replaced = false;
  for (const auto &path : e.files) {
    std::string text = read(path);
    if (path.size() >= file.size() && path.compare(path.size() - file.size(), file.size(), file) == 0) {
      auto pos = text.find(from);
      if (pos != std::string::npos) {
        text.replace(pos, from.size(), to);
        replaced = true;
      }
    }
    auto d = m->packages.add_text(path, text);
    if (uasforge::has_errors(d))
      throw uasforge::DiagnosticError("ParseFailed", d);
  }
  if (!replaced)
    throw std::runtime_error("mutation anchor '" + from + "' not found in " + file);
  m->model.emplace(uasforge::instantiate(m->packages, e.manifest.root));
  return m;
}

inline std::unique_ptr<Mutant> from_text(const std::string &text, const std::string &root) {
  auto m = std::make_unique<Mutant>();
  auto d = m->packages.add_text("<test>", text);
  if (uasforge::has_errors(d))
    throw uasforge::DiagnosticError("ParseFailed", d);
  m->model.emplace(uasforge::instantiate(m->packages, root));
  return m;
}

} // namespace support
