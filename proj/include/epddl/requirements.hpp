#pragma once

#include <set>
#include <string>
#include <vector>

namespace epddl {

using RequirementSet = std::set<std::string>;

/// The closed set of requirement keys, with leading ':'.
const RequirementSet& all_requirement_keys();

/// Union of the declared keys closed under the implication rules, always
/// containing the baseline ":pal". Throws GroundError on unknown keys.
RequirementSet resolve_requirements(const std::vector<std::string>& declared);

}  // namespace epddl
