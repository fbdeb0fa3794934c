#pragma once

#include <string>

#include "iecoregen/model.hpp"

namespace iecoregen {

/// Renders the model as PlantUML class-diagram code: one class block per
/// class with `+name : Type` attribute lines and `+op(p : T) : R` operation
/// lines, enum blocks, inheritance edges and one edge per reference
/// (`*-->` for containments). Pure: the same model always yields
/// byte-identical output. Throws InvalidModelError when the model has
/// validation violations.
std::string emit_plantuml(const ModelPackage& m);

}  // namespace iecoregen
