#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/claim_lang.hpp"
#include "uasforge/contract.hpp"
#include "uasforge/model.hpp"

namespace uasforge {

enum class ClaimStatus { proved, failed };

std::string_view to_string(ClaimStatus s);

/// One node of a proof tree.
struct ClaimResult {
  std::string claim;
  std::vector<std::string> args; // rendered arguments
  std::string description;
  ClaimStatus status = ClaimStatus::proved;
  std::vector<std::string> witnesses; // instance, connection or path text
  std::vector<ClaimResult> children;
  std::string note; // delegated verdicts and errors

  bool proved() const { return status == ClaimStatus::proved; }
  /// Indented tree, one node per line.
  std::string text(int indent = 0) const;
};

struct ClaimsConfig {
  std::set<std::string> approved_algorithms{"aes128", "aes256", "chacha20"};
  std::int64_t min_key_bits = 128;
  std::size_t path_cap = 10000;
  int k = 5; // bound for delegated contract checks
  CheckOptions check;
};

/// Throws Error("ConfigError").
ClaimsConfig parse_claims_config(std::string_view json_text);
ClaimsConfig load_claims_config(const std::string &path);

struct Path {
  std::vector<const FeatureInstance *> features;

  std::string text() const; // "a -> b -> c"
  friend bool operator==(const Path &a, const Path &b) { return a.features == b.features; }
};

/// Simple paths from any source to any sink, stopping at the first sink
/// reached. Ordered lexicographically by feature path. Throws
/// Error("PathBudgetExceeded") once more than `cap` paths exist.
std::vector<Path> all_paths(const ConnectionGraph &graph, const std::vector<const FeatureInstance *> &sources,
                            const std::vector<const FeatureInstance *> &sinks, std::size_t cap = 10000);

/// Claims shipped with the toolchain.
std::string_view claim_library_text();
const ClaimAnnex &claim_library();

/// Evaluates a claim by name, looked up in `local` first and then the
/// library. Arguments are instance paths for component, feature and
/// connection parameters, literals otherwise. Throws
/// Error("UnresolvedPredicate"), Error("ArityMismatch"), Error("CyclicClaim").
ClaimResult evaluate_claim(const InstanceModel &model, std::string_view claim, const std::vector<std::string> &args,
                           const ClaimsConfig &config = {}, const ClaimAnnex *local = nullptr);

/// Evaluates every `prove` goal of every instance's claim annexes, with
/// `this` bound to the instance.
std::vector<ClaimResult> prove_goals(const InstanceModel &model, const ClaimsConfig &config = {});

/// Built-in checks. Throw Error("MissingRoleAnnotation") when a required
/// Role::* component is absent.
ClaimResult check_instruction_encryption(const InstanceModel &model, const ClaimsConfig &config = {});
ClaimResult check_gps_data_security(const InstanceModel &model, const ClaimsConfig &config = {});

} // namespace uasforge
