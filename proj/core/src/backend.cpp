#include "iecoregen/backend.hpp"

namespace iecoregen {

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::Syntax: return "Syntax";
    case DiagnosticKind::UnresolvedSymbol: return "UnresolvedSymbol";
    case DiagnosticKind::TypeMismatch: return "TypeMismatch";
    case DiagnosticKind::Other: return "Other";
  }
  return "?";
}

std::string Diagnostic::to_string() const {
  std::string trimmed = source_line;
  trimmed.erase(0, trimmed.find_first_not_of(" \t"));
  return path + ":" + std::to_string(line) + " [" +
         iecoregen::to_string(kind) + "] " + message +
         (trimmed.empty() ? "" : " | " + trimmed);
}

std::string line_at(const std::string& text, int line) {
  if (line < 1) return "";
  std::size_t start = 0;
  for (int i = 1; i < line; ++i) {
    start = text.find('\n', start);
    if (start == std::string::npos) return "";
    ++start;
  }
  std::size_t end = text.find('\n', start);
  return text.substr(start, end == std::string::npos ? std::string::npos
                                                     : end - start);
}

}  // namespace iecoregen
