#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/model.hpp"

namespace uasforge {

struct FileEntry {
  std::string path; // relative, '/'-separated
  std::string content;
  bool operator==(const FileEntry &) const = default;
};

/// Generated source tree. Entries stay sorted by path.
struct FileTree {
  std::string root;
  std::vector<FileEntry> entries;

  /// Throws Error("IdentifierCollision") on a duplicate path and
  /// Error("InvalidPath") for absolute or escaping paths.
  void add(std::string path, std::string content);
  const FileEntry *find(std::string_view path) const;
  /// Every directory that holds at least one entry, plus their parents.
  std::set<std::string> directories() const;
  bool operator==(const FileTree &) const = default;
};

/// Base::Integer -> int32_t, Base::Unsigned16 -> uint16_t,
/// Base::Boolean -> bool, Base::Float -> float.
std::map<std::string, std::string> default_type_map();
/// JSON object of classifier name to C++ type. Throws Error("ConfigError").
std::map<std::string, std::string> load_type_map(const std::string &path);

struct CodegenOptions {
  std::map<std::string, std::string> type_map = default_type_map();
  std::string runtime_header = "task_runtime.hpp";
};

/// Source tree for the software subtree rooted at the system instance
/// `root_path`. Throws Error("NotFound"), Error("NotASystemInstance"),
/// Error("UnsupportedKindInSoftwareTree"), Error("MissingPeriod"),
/// Error("UnmappedDataType"), Error("IdentifierCollision").
FileTree generate(const InstanceModel &model, std::string_view root_path, const CodegenOptions &options = {});

/// C++ type text for a data classifier under `options.type_map`.
std::string mapped_type(const PackageSet &packages, const ResolvedClassifier &data, const CodegenOptions &options);

struct WriteSummary {
  std::vector<std::string> written;   // created or changed
  std::vector<std::string> unchanged; // identical content already present
  std::vector<std::string> removed;   // generated by an earlier run, now stale
};

inline constexpr std::string_view kManifestName = ".uasforge-manifest.json";

/// Writes each file through a temporary and rename. Files are tracked in a
/// manifest so a later run only removes what it generated; an existing file
/// outside the manifest is never overwritten. Throws Error("IoError").
WriteSummary write_tree(const FileTree &tree, const std::string &out_dir);

} // namespace uasforge
