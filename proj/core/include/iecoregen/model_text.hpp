#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iecoregen/model.hpp"

namespace iecoregen {

/// Error produced while reading a model document.
struct ModelError {
  enum class Kind { Syntax, UnresolvedType, DuplicateName, Invalid };
  Kind kind = Kind::Syntax;
  int line = 0;  // 1-based; 0 when the error is not tied to a line
  std::string message;

  std::string to_string() const;
};

struct ModelParseResult {
  std::optional<ModelPackage> package;
  std::vector<ModelError> errors;

  bool ok() const { return package.has_value() && errors.empty(); }
};

/// Parses a model document without enforcing the structural invariants.
/// Only syntax errors are reported; the caller can run validate_model on
/// the result to list violations (this is what `validate` does).
ModelParseResult parse_model_unchecked(const std::string& text);

/// Parses a model document and checks every invariant. On success the
/// returned package is well-formed; otherwise `errors` lists syntax errors
/// or the violations mapped onto ModelError kinds.
ModelParseResult parse_model(const std::string& text);

/// Canonical textual form. parse_model(serialize_model(m)) is the identity
/// on well-formed models, annotations included.
std::string serialize_model(const ModelPackage& m);

}  // namespace iecoregen
