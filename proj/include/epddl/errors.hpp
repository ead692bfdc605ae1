#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace epddl {

/// Position inside an EPDDL source file, 1-based.
struct SourcePos {
  std::string file;
  int line = 0;
  int column = 0;

  std::string to_string() const {
    if (line == 0) return file;
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
  }
};

/// One type-check or schema violation. `rule` is a short stable identifier.
struct Diagnostic {
  SourcePos pos;
  std::string rule;
  std::string message;

  std::string to_string() const {
    std::string head = pos.to_string();
    if (!head.empty()) head += ": ";
    return head + "error [" + rule + "]: " + message;
  }
};

class EpddlError : public std::runtime_error {
 public:
  explicit EpddlError(const std::string& what) : std::runtime_error(what) {}
};

class LexError : public EpddlError {
 public:
  LexError(SourcePos pos, const std::string& message)
      : EpddlError(pos.to_string() + ": error: " + message), pos(std::move(pos)) {}
  SourcePos pos;
};

class ParseError : public EpddlError {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : EpddlError(pos.to_string() + ": error: " + message), pos(std::move(pos)) {}
  SourcePos pos;
};

/// Thrown once type checking finished with a non-empty diagnostic list.
class TypeCheckError : public EpddlError {
 public:
  explicit TypeCheckError(std::vector<Diagnostic> diags)
      : EpddlError(render(diags)), diagnostics(std::move(diags)) {}
  std::vector<Diagnostic> diagnostics;

 private:
  static std::string render(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
      if (!out.empty()) out += "\n";
      out += d.to_string();
    }
    return out;
  }
};

/// Violated model/action invariant or precondition (unknown world, empty designated set, ...).
class ModelError : public EpddlError {
 public:
  explicit ModelError(const std::string& message) : EpddlError(message) {}
};

class NotApplicableError : public EpddlError {
 public:
  explicit NotApplicableError(const std::string& message) : EpddlError(message) {}
};

/// Zero or multiple observability conditions satisfied for one agent.
class MalformedObservabilityError : public EpddlError {
 public:
  explicit MalformedObservabilityError(const std::string& message) : EpddlError(message) {}
};

/// Triggered effects assign both values to one atom in one world.
class InconsistentEffectsError : public EpddlError {
 public:
  explicit InconsistentEffectsError(const std::string& message) : EpddlError(message) {}
};

class GroundError : public EpddlError {
 public:
  explicit GroundError(const std::string& message) : EpddlError(message) {}
};

/// Ground-JSON document does not match the grammar; `path` is a JSON path.
class SchemaError : public EpddlError {
 public:
  SchemaError(std::string path_in, const std::string& message)
      : EpddlError(path_in + ": " + message), path(std::move(path_in)) {}
  std::string path;
};

/// Product update exceeded the per-state world cap.
class StateOverflowError : public EpddlError {
 public:
  explicit StateOverflowError(const std::string& message) : EpddlError(message) {}
};

}  // namespace epddl
