#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "manifest_check.hpp"
#include "support.hpp"
#include "uasforge/corpus.hpp"

using namespace uasforge;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    out.push_back(l);
  return out;
}

} // namespace

TEST_CASE("corpus entries load with their manifests") {
  CHECK(corpus_names().front() == "uas_baseline");
  CHECK(corpus_names().size() == 5);
  for (const auto &name : corpus_names()) {
    auto e = load_corpus(name);
    CHECK(e.manifest.entry == name);
    CHECK(e.manifest.root == "UAS.impl");
    CHECK(e.files.size() == 8);
    CHECK_FALSE(e.manifest.edit.empty());
  }
  try {
    load_corpus("uas_nope");
    FAIL("expected UnknownEntry");
  } catch (const Error &e) {
    CHECK(e.code() == "UnknownEntry");
  }
  CHECK_THROWS_AS(parse_manifest("{\"entry\": 3}"), Error);
}

TEST_CASE("engines reproduce every manifest exactly") {
  for (const auto &name : corpus_names()) {
    auto f = support::corpus(name);
    auto seen = support::observe(*f->model);
    std::map<std::string, std::string> want;
    for (const auto &c : f->entry.manifest.checks)
      want[c.id] = c.expected;
    CHECK_MESSAGE(seen == want, name);
  }
}

TEST_CASE("each mutant differs from the baseline in one file") {
  auto base = load_corpus("uas_baseline");
  for (const auto &name : corpus_names()) {
    if (name == "uas_baseline")
      continue;
    auto e = load_corpus(name);
    REQUIRE(e.files.size() == base.files.size());
    int changed_files = 0;
    for (std::size_t i = 0; i < e.files.size(); ++i) {
      CHECK(fs::path(e.files[i]).filename() == fs::path(base.files[i]).filename());
      auto a = lines(support::read(base.files[i]));
      auto b = lines(support::read(e.files[i]));
      if (a == b)
        continue;
      ++changed_files;
      REQUIRE(a.size() == b.size());
      std::size_t first = a.size(), last = 0;
      for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] != b[j]) {
          first = std::min(first, j);
          last = j;
        }
      CHECK_MESSAGE(last - first < 6, name);
    }
    CHECK_MESSAGE(changed_files == 1, name);

    int differing = 0;
    for (const auto &c : e.manifest.checks)
      differing += base.manifest.find(c.id)->expected != c.expected;
    CHECK_MESSAGE(differing >= 1, name);
  }
}
