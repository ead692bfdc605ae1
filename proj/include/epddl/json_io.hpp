#pragma once

#include <string>

#include "epddl/ground.hpp"

namespace epddl {

/// Ground-task JSON: two-space indent, keys in grammar order, byte-stable
/// across runs for the same task.
std::string emit_json(const GroundTask& task);

/// Inverse of emit_json; throws SchemaError with a JSON path on violations.
GroundTask read_json(const std::string& text);

}  // namespace epddl
