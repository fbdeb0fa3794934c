#include "iecoregen/plantuml.hpp"

#include <sstream>

#include "iecoregen/errors.hpp"

namespace iecoregen {

namespace {

std::string display_type(const AttributeDef& a) {
  return a.is_many ? "List<" + a.type.to_string() + ">" : a.type.to_string();
}

}  // namespace

std::string emit_plantuml(const ModelPackage& m) {
  auto violations = validate_model(m);
  if (!violations.empty()) {
    throw InvalidModelError("cannot emit PlantUML for an invalid model: " +
                            violations.front().location + ": " +
                            violations.front().message);
  }

  std::ostringstream out;
  out << "@startuml\n";
  for (const auto& e : m.enums) {
    out << "enum " << e.name << " {\n";
    for (const auto& lit : e.literals) out << "  " << lit << "\n";
    out << "}\n";
  }
  for (const auto& c : m.classes) {
    if (c.is_abstract) out << "abstract ";
    out << "class " << c.name << " {\n";
    for (const auto& a : c.attributes)
      out << "  +" << a.name << " : " << display_type(a) << "\n";
    for (const auto& op : c.operations) {
      out << "  +" << op.name << "(";
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        if (i > 0) out << ", ";
        out << op.params[i].name << " : " << op.params[i].type.to_string();
      }
      out << ")";
      if (op.return_type.kind() != TypeRef::Kind::Void)
        out << " : " << op.return_type.to_string();
      out << "\n";
    }
    out << "}\n";
  }
  for (const auto& c : m.classes) {
    if (c.super_class) out << c.name << " --|> " << *c.super_class << "\n";
  }
  for (const auto& c : m.classes) {
    for (const auto& r : c.references) {
      out << c.name << (r.is_containment ? " *--> " : " --> ") << "\""
          << (r.is_many ? "0..*" : "1") << "\" " << r.target << " : "
          << r.name << "\n";
    }
  }
  out << "@enduml\n";
  return out.str();
}

}  // namespace iecoregen
