#include "iecoregen/prompts.hpp"

namespace iecoregen {

namespace {

const char* kDecompose = R"(You are an experienced software architect. You turn system requirements into precise per-operation specifications for a class-model-driven code generator.

## Class diagram (PlantUML)
{{plantuml}}

## Requirement
{{requirement}}

## Task
Write a method specification for every operation declared in the class diagram.
Apply the modularization principle: each operation's functional boundary must show high cohesion and low coupling with the other operations.
Deduce any unspecified information, such as undefined constants, and meticulously address every detail of the requirement.

Answer with one section per operation. Each section starts with a header line of the form

### <Class>.<operation>(<arity>)

followed by a fenced block with exactly these labeled parts:

```
Summary: <what the operation does>
Algorithm: <numbered steps that realize it>
Input:
- <parameter>: <meaning, format and value ranges>
Output: <meaning, format and value range of the return value>
Preconditions:
- <condition that must hold before execution>
Postconditions:
- <condition that must hold after execution>
```

Cover every operation; do not invent operations that are not in the diagram.
)";

const char* kCompletion = R"(You are completing code that was generated from a class model.

## Instructions
Implement every method listed under "Methods to complete", exactly as its docstring specifies.
You may add helper methods and imports, but you must not modify any other part of the file.
Follow the file's existing conventions: boolean accessors are named isX, features are read and written through their accessors, and new objects come from the package factory or `new`.
Return one fenced code block tagged `minioo` containing the class declaration with the listed methods fully implemented. Methods you leave unchanged may be omitted.

## Code
```minioo
{{code}}
```
{{context_section}}## Methods to complete
{{targets}}
)";

const char* kFix = R"(You are fixing compilation errors in code that was generated from a class model.

## Instructions
Fix every compilation error listed below.
Return one fenced code block tagged `minioo` containing the class declaration with the full corrected methods. Methods you leave unchanged may be omitted.
You may add helper methods and imports, but you must not modify any other part of the file.

## Code
```minioo
{{code}}
```

## Compilation errors
{{diagnostics}}
{{context_section}})";

const char* kBaseline = R"(You are an experienced software engineer.

Implement the following requirement as one single MiniOO source file containing every class the solution needs.
MiniOO is a small class-based language: classes with `var name: Type;` fields and `func name(param: Type): Return { ... }` methods, `this.field` access, `new Class()` construction, `List<T>` collections with add/get/size/remove, and Date values with daysBetween/addDays/year.
Give every attribute a getter (isX for booleans, getX otherwise) and a setter unless it is a collection.
Return the file in one fenced code block tagged `minioo`.

## Requirement
{{requirement}}
{{diagram_section}})";

const char* kBaselineFix = R"(The following MiniOO source file does not compile.

Fix every compilation error listed below and return the full corrected source file in one fenced code block tagged `minioo`.

## Code
```minioo
{{code}}
```

## Compilation errors
{{diagnostics}}
)";

const char* kTestgen = R"(You are writing tests for generated code.

Below are the classes under test, followed by numbered natural-language test cases.
Write one MiniOO test program per test case, in the same order. A test program is a sequence of top-level statements (no classes) that builds objects, calls the code under test and checks results with `assert`.
Return one fenced code block tagged `minioo` per test case, in order, and nothing else.

## Code
```minioo
{{code}}
```

## Test cases
{{cases}}
)";

}  // namespace

const PromptTemplates& PromptTemplates::defaults() {
  static const PromptTemplates templates = {
      kDecompose, kCompletion, kFix, kBaseline, kBaselineFix, kTestgen,
  };
  return templates;
}

std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t open = tmpl.find("{{", pos);
    if (open == std::string::npos) {
      out += tmpl.substr(pos);
      break;
    }
    std::size_t close = tmpl.find("}}", open + 2);
    if (close == std::string::npos) {
      out += tmpl.substr(pos);
      break;
    }
    out += tmpl.substr(pos, open - pos);
    std::string key = tmpl.substr(open + 2, close - open - 2);
    auto it = vars.find(key);
    if (it != vars.end()) {
      out += it->second;
    } else {
      out += tmpl.substr(open, close + 2 - open);
    }
    pos = close + 2;
  }
  return out;
}

}  // namespace iecoregen
