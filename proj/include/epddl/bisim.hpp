#pragma once

#include <string>

#include "epddl/state.hpp"

namespace epddl {

/// Designated-set bisimilarity: some bisimulation matches every designated
/// world of `a` to one of `b` and vice versa. Decided by partition refinement
/// on the disjoint union.
bool bisimilar(const EpistemicState& a, const EpistemicState& b);

/// Bisimulation contraction of the designated-reachable part. The result is
/// bisimilar to the input and minimal (no two distinct worlds bisimilar).
EpistemicState contract(const EpistemicState& state);

/// Text digest with: canonical_key(a) == canonical_key(b) iff bisimilar(a, b),
/// for states over the same agent language.
std::string canonical_key(const EpistemicState& state);

}  // namespace epddl
