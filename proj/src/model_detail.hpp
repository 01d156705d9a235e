#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "uasforge/model.hpp"

namespace uasforge::detail {

std::optional<ResolvedClassifier> extended_type(const PackageSet &packages, const ResolvedClassifier &rc);

/// Features of a type including those inherited through `extends`, each
/// paired with the package whose scope resolves its data type.
std::vector<std::pair<const Feature *, const Package *>> all_features(const PackageSet &packages,
                                                                      const ResolvedClassifier &rc);
std::vector<const FlowSpec *> all_flows(const PackageSet &packages, const ResolvedClassifier &rc);

/// Later associations replace earlier ones with the same (case-insensitive) name.
void merge_properties(std::vector<PropertyAssociation> &into, const std::vector<PropertyAssociation> &from);

} // namespace uasforge::detail
