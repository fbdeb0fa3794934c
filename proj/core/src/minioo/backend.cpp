#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "iecoregen/errors.hpp"
#include "iecoregen/minioo/minioo.hpp"

namespace iecoregen::minioo {

namespace {

std::string capitalize(const std::string& s) {
  if (s.empty()) return s;
  std::string out = s;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

// Model-to-MiniOO type mapping. Enums have no MiniOO counterpart and map
// to String; their literal names travel as string values.
Type map_type(const TypeRef& t) {
  switch (t.kind()) {
    case TypeRef::Kind::Int: return Type::simple(Type::Kind::Int);
    case TypeRef::Kind::Float: return Type::simple(Type::Kind::Float);
    case TypeRef::Kind::Bool: return Type::simple(Type::Kind::Bool);
    case TypeRef::Kind::String: return Type::simple(Type::Kind::String);
    case TypeRef::Kind::Date: return Type::simple(Type::Kind::Date);
    case TypeRef::Kind::Void: return Type::simple(Type::Kind::Void);
    case TypeRef::Kind::Class: return Type::of_class(t.name());
    case TypeRef::Kind::Enum: return Type::simple(Type::Kind::String);
    case TypeRef::Kind::List: return Type::list_of(map_type(*t.element()));
  }
  return Type::simple(Type::Kind::Void);
}

Type feature_type(const TypeRef& t, bool is_many) {
  Type mapped = map_type(t);
  return is_many ? Type::list_of(std::move(mapped)) : mapped;
}

ExprPtr make_literal_expr(const Literal& lit) {
  auto e = std::make_unique<Expr>();
  switch (lit.kind) {
    case Literal::Kind::Int: {
      std::int64_t v = std::get<std::int64_t>(lit.value);
      if (v < 0) {
        e->kind = Expr::Kind::Unary;
        e->unary_op = UnaryOp::Neg;
        e->target = std::make_unique<Expr>();
        e->target->kind = Expr::Kind::IntLit;
        e->target->int_value = -v;
      } else {
        e->kind = Expr::Kind::IntLit;
        e->int_value = v;
      }
      break;
    }
    case Literal::Kind::Float: {
      double v = std::get<double>(lit.value);
      if (v < 0) {
        e->kind = Expr::Kind::Unary;
        e->unary_op = UnaryOp::Neg;
        e->target = std::make_unique<Expr>();
        e->target->kind = Expr::Kind::FloatLit;
        e->target->float_value = -v;
      } else {
        e->kind = Expr::Kind::FloatLit;
        e->float_value = v;
      }
      break;
    }
    case Literal::Kind::Bool:
      e->kind = Expr::Kind::BoolLit;
      e->bool_value = std::get<bool>(lit.value);
      break;
    case Literal::Kind::String:
      e->kind = Expr::Kind::StringLit;
      e->text = std::get<std::string>(lit.value);
      break;
    case Literal::Kind::EnumLiteral:
      e->kind = Expr::Kind::StringLit;
      e->text = std::get<std::string>(lit.value);
      break;
  }
  return e;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

/// Raw docstring content for the printer's `  /**<raw>*/` form.
std::string doc_from_lines(const std::vector<std::string>& lines) {
  std::string raw = "\n";
  for (const auto& line : lines)
    raw += line.empty() ? "   *\n" : "   * " + line + "\n";
  raw += "   ";
  return raw;
}

void add_labeled(std::vector<std::string>& out, const std::string& label,
                 const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) {
    out.push_back(label + ":");
    return;
  }
  out.push_back(label + ": " + lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i)
    out.push_back("  " + lines[i]);
}

void add_items(std::vector<std::string>& out, const std::string& label,
               const std::vector<std::string>& items) {
  out.push_back(label + ":");
  for (const auto& item : items) {
    auto lines = split_lines(item);
    if (lines.empty()) continue;
    out.push_back("  - " + lines.front());
    for (std::size_t i = 1; i < lines.size(); ++i)
      out.push_back("    " + lines[i]);
  }
}

std::string operation_docstring(const MethodSpec& spec) {
  std::vector<std::string> lines;
  add_labeled(lines, "Summary", spec.summary);
  add_labeled(lines, "Algorithm", spec.algorithm);
  lines.push_back("Input:");
  for (const auto& [name, desc] : spec.inputs) {
    auto dl = split_lines(desc);
    lines.push_back("  - " + name + ": " + (dl.empty() ? "" : dl.front()));
    for (std::size_t i = 1; i < dl.size(); ++i)
      lines.push_back("    " + dl[i]);
  }
  add_labeled(lines, "Output", spec.outputs);
  add_items(lines, "Preconditions", spec.preconditions);
  add_items(lines, "Postconditions", spec.postconditions);
  return doc_from_lines(lines);
}

struct FeatureInfo {
  std::string name;
  Type type;
  bool is_many = false;
  bool is_bool_attr = false;
  std::string kind_word;           // "attribute" or "reference"
  std::vector<std::string> extra;  // extra doc lines (enum values etc.)
};

std::string getter_name(const FeatureInfo& f) {
  return (f.is_bool_attr && !f.is_many ? "is" : "get") + capitalize(f.name);
}

std::vector<FeatureInfo> features_of(const ModelPackage& m,
                                     const ClassDef& cls) {
  std::vector<FeatureInfo> features;
  for (const auto& a : cls.attributes) {
    FeatureInfo f;
    f.name = a.name;
    f.type = feature_type(a.type, a.is_many);
    f.is_many = a.is_many;
    f.is_bool_attr = a.type.kind() == TypeRef::Kind::Bool;
    f.kind_word = "attribute";
    if (a.type.kind() == TypeRef::Kind::Enum) {
      if (const EnumDef* e = m.find_enum(a.type.name())) {
        std::string values;
        for (std::size_t i = 0; i < e->literals.size(); ++i)
          values += (i ? ", " : "") + e->literals[i];
        f.extra.push_back("Allowed values: " + values + ".");
      }
    }
    features.push_back(std::move(f));
  }
  for (const auto& r : cls.references) {
    FeatureInfo f;
    f.name = r.name;
    f.type = feature_type(TypeRef::class_type(r.target), r.is_many);
    f.is_many = r.is_many;
    f.kind_word = "reference";
    if (r.is_containment)
      f.extra.push_back("This is a containment reference.");
    features.push_back(std::move(f));
  }
  return features;
}

StmtPtr trap_statement() {
  auto s = std::make_unique<Stmt>();
  s->kind = Stmt::Kind::Raise;
  s->name = "Unsupported";
  s->expr = std::make_unique<Expr>();
  s->expr->kind = Expr::Kind::StringLit;
  s->expr->text = "not implemented";
  return s;
}

ExprPtr this_field(const std::string& name) {
  auto access = std::make_unique<Expr>();
  access->kind = Expr::Kind::FieldAccess;
  access->text = name;
  access->target = std::make_unique<Expr>();
  access->target->kind = Expr::Kind::This;
  return access;
}

Method make_getter(const FeatureInfo& f) {
  Method m;
  m.name = getter_name(f);
  m.return_type = f.type;
  std::vector<std::string> doc{
      "Returns the value of the '" + f.name + "' " + f.kind_word + ".",
      "The value reflects the current state of this object."};
  for (const auto& x : f.extra) doc.push_back(x);
  doc.push_back("@return the '" + f.name + "' " + f.kind_word);
  m.docstring = doc_from_lines(doc);
  auto ret = std::make_unique<Stmt>();
  ret->kind = Stmt::Kind::Return;
  ret->expr = this_field(f.name);
  m.body.push_back(std::move(ret));
  return m;
}

Method make_setter(const FeatureInfo& f) {
  Method m;
  m.name = "set" + capitalize(f.name);
  m.params.push_back({"value", f.type});
  m.return_type = Type::simple(Type::Kind::Void);
  std::vector<std::string> doc{
      "Sets the value of the '" + f.name + "' " + f.kind_word + ".",
      "The previous value is overwritten."};
  for (const auto& x : f.extra) doc.push_back(x);
  doc.push_back("@param value the new '" + f.name + "' " + f.kind_word);
  m.docstring = doc_from_lines(doc);
  auto assign = std::make_unique<Stmt>();
  assign->kind = Stmt::Kind::Assign;
  assign->lhs = this_field(f.name);
  assign->expr = std::make_unique<Expr>();
  assign->expr->kind = Expr::Kind::Name;
  assign->expr->text = "value";
  m.body.push_back(std::move(assign));
  return m;
}

std::string signature_of(const Method& m) {
  std::string s = "func " + m.name + "(";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i > 0) s += ", ";
    s += m.params[i].name + ": " + m.params[i].type.to_string();
  }
  s += "): " + m.return_type.to_string();
  return s;
}

ClassDecl build_class(const ModelPackage& m, const ClassDef& cls) {
  ClassDecl out;
  out.name = cls.name;
  out.super_name = cls.super_class;

  for (const auto& a : cls.attributes) {
    Field f;
    f.name = a.name;
    f.type = feature_type(a.type, a.is_many);
    if (a.default_value) f.init = make_literal_expr(*a.default_value);
    out.fields.push_back(std::move(f));
  }
  for (const auto& r : cls.references) {
    Field f;
    f.name = r.name;
    f.type = feature_type(TypeRef::class_type(r.target), r.is_many);
    out.fields.push_back(std::move(f));
  }

  for (const auto& f : features_of(m, cls)) {
    out.methods.push_back(make_getter(f));
    if (!f.is_many) out.methods.push_back(make_setter(f));
  }

  for (const auto& op : cls.operations) {
    if (!op.spec) {
      throw UnannotatedOperationError("operation " + cls.name + "." +
                                      op.name + " has no annotation");
    }
    Method method;
    method.name = op.name;
    for (const auto& p : op.params)
      method.params.push_back({p.name, map_type(p.type)});
    method.return_type = map_type(op.return_type);
    method.docstring = operation_docstring(*op.spec);
    method.body.push_back(trap_statement());
    out.methods.push_back(std::move(method));
  }
  return out;
}

ClassDecl build_factory(const ModelPackage& m) {
  ClassDecl out;
  out.name = MiniooBackend::factory_class_name(m);
  for (const auto& cls : m.classes) {
    if (cls.is_abstract) continue;
    Method method;
    method.name = "create" + capitalize(cls.name);
    method.return_type = Type::of_class(cls.name);
    method.docstring = doc_from_lines(
        {"Creates and returns a new " + cls.name + " instance.",
         "Every feature starts at its declared default value.",
         "@return a fresh " + cls.name});
    auto ret = std::make_unique<Stmt>();
    ret->kind = Stmt::Kind::Return;
    ret->expr = std::make_unique<Expr>();
    ret->expr->kind = Expr::Kind::New;
    ret->expr->text = cls.name;
    method.body.push_back(std::move(ret));
    out.methods.push_back(std::move(method));
  }
  return out;
}

SourceUnit unit_of(ClassDecl cls) {
  Program p;
  std::string class_id = cls.name;
  p.classes.push_back(std::move(cls));
  SourceUnit unit;
  unit.path = "src/" + class_id + ".mo";
  unit.class_id = class_id;
  unit.text = print(p);
  return unit;
}

}  // namespace

std::string MiniooBackend::factory_class_name(const ModelPackage& m) {
  std::string last = m.name;
  auto dot = last.rfind('.');
  if (dot != std::string::npos) last = last.substr(dot + 1);
  return capitalize(last) + "Factory";
}

std::vector<SourceUnit> MiniooBackend::generate_skeleton(
    const ModelPackage& m) const {
  std::vector<SourceUnit> units;
  units.reserve(m.classes.size() + 1);
  for (const auto& cls : m.classes) units.push_back(unit_of(build_class(m, cls)));
  units.push_back(unit_of(build_factory(m)));
  return units;
}

ParseCheck MiniooBackend::parse_code(const SourceUnit& unit) const {
  ParseResult r = parse(unit.text, unit.path);
  ParseCheck out;
  out.ok = r.ok();
  out.diagnostics = std::move(r.diagnostics);
  return out;
}

SourceUnit MiniooBackend::compress(
    const SourceUnit& unit,
    const std::set<MethodKey>& keep_docstrings_for) const {
  ParseResult r = parse(unit.text, unit.path);
  if (!r.ok()) {
    throw Error("cannot compress " + unit.path + ": " +
                (r.diagnostics.empty() ? "unparseable"
                                       : r.diagnostics.front().to_string()));
  }
  Program& program = *r.program;
  for (auto& cls : program.classes) {
    cls.docstring.reset();
    for (auto& f : cls.fields) f.init.reset();
    for (auto& method : cls.methods) {
      MethodKey key{cls.name, method.name,
                    static_cast<int>(method.params.size())};
      if (keep_docstrings_for.count(key)) continue;
      method.docstring.reset();
      method.body.clear();
      method.body.push_back(trap_statement());
    }
  }
  SourceUnit out = unit;
  out.text = print(program);
  return out;
}

MergeOutcome MiniooBackend::merge(const SourceUnit& base,
                                  const SourceUnit& completed,
                                  const std::set<MethodKey>& targets) const {
  MergeOutcome outcome;
  outcome.unit = base;

  ParseResult base_parse = parse(base.text, base.path);
  if (!base_parse.ok()) {
    outcome.diagnostics = std::move(base_parse.diagnostics);
    return outcome;
  }
  ParseResult completed_parse = parse(completed.text, completed.path);
  if (!completed_parse.ok() || completed_parse.program->is_test_form() ||
      completed_parse.program->classes.empty()) {
    outcome.diagnostics = std::move(completed_parse.diagnostics);
    if (outcome.diagnostics.empty()) {
      Diagnostic d;
      d.path = completed.path;
      d.kind = DiagnosticKind::Syntax;
      d.line = 1;
      d.source_line = line_at(completed.text, 1);
      d.message = "completion contains no class declaration";
      outcome.diagnostics.push_back(std::move(d));
    }
    return outcome;
  }

  const Program& base_prog = *base_parse.program;
  Program& comp_prog = *completed_parse.program;

  struct Edit {
    std::size_t begin;
    std::size_t end;
    std::string text;
  };
  std::vector<Edit> edits;
  std::set<std::string> matched_completed;

  for (const auto& base_cls : base_prog.classes) {
    const ClassDecl* comp_cls = nullptr;
    for (const auto& c : comp_prog.classes)
      if (c.name == base_cls.name) comp_cls = &c;
    if (comp_cls == nullptr && base_prog.classes.size() == 1 &&
        comp_prog.classes.size() == 1) {
      comp_cls = &comp_prog.classes.front();
      outcome.report.rejected_edits.emplace_back(
          comp_cls->name, "renames class " + base_cls.name +
                              "; the body is merged under the original name");
    }
    if (comp_cls == nullptr) continue;
    matched_completed.insert(comp_cls->name);

    // Field edits are outside the permitted regions.
    for (const auto& cf : comp_cls->fields) {
      const Field* bf = nullptr;
      for (const auto& f : base_cls.fields)
        if (f.name == cf.name) bf = &f;
      std::string location = base_cls.name + "." + cf.name;
      if (bf == nullptr) {
        outcome.report.rejected_edits.emplace_back(
            location, "adds a field outside the permitted regions");
      } else if (!(bf->type == cf.type)) {
        outcome.report.rejected_edits.emplace_back(
            location, "changes the type of a field");
      }
    }

    std::set<MethodKey> replaced_keys;
    std::set<MethodKey> appended_keys;
    for (const auto& cm : comp_cls->methods) {
      MethodKey key{base_cls.name, cm.name,
                    static_cast<int>(cm.params.size())};
      const Method* bm =
          base_cls.find_method(cm.name, cm.params.size());
      if (bm != nullptr && targets.count(key)) {
        if (!replaced_keys.insert(key).second) {
          // A second body for the same key would splice over the first.
          outcome.report.rejected_edits.emplace_back(
              key.to_string(), "appears twice in the completion; the first "
                               "version wins");
          continue;
        }
        edits.push_back({bm->body_begin, bm->body_end,
                         completed.text.substr(cm.body_begin,
                                               cm.body_end - cm.body_begin)});
        outcome.report.replaced_methods.push_back(key);
        continue;
      }
      if (bm != nullptr) {
        // Outside the targets: keep the base version; only record real
        // changes, not echoes of the compressed input (token comparison
        // ignores docstrings and formatting).
        std::string base_code = base.text.substr(
            bm->span_begin, bm->body_end - bm->span_begin);
        std::string comp_code = completed.text.substr(
            cm.span_begin, cm.body_end - cm.span_begin);
        if (!same_token_stream(base_code, comp_code)) {
          outcome.report.rejected_edits.emplace_back(
              key.to_string(), "modifies a method outside the completion "
                               "targets");
        }
        continue;
      }
      // Helper method: appended before the class's closing brace.
      if (!appended_keys.insert(key).second) {
        outcome.report.rejected_edits.emplace_back(
            key.to_string(),
            "appears twice in the completion; the first version wins");
        continue;
      }
      std::string helper_text = completed.text.substr(
          cm.span_begin, cm.body_end - cm.span_begin);
      edits.push_back({base_cls.close_brace, base_cls.close_brace,
                       "\n  " + helper_text + "\n"});
      outcome.report.added_helpers.push_back(key);
    }
  }

  for (const auto& c : comp_prog.classes) {
    if (!matched_completed.count(c.name)) {
      bool is_base = false;
      for (const auto& bc : base_prog.classes)
        if (bc.name == c.name) is_base = true;
      if (!is_base) {
        outcome.report.rejected_edits.emplace_back(
            c.name, "declares a class that is not part of this unit");
      }
    }
  }

  std::stable_sort(edits.begin(), edits.end(),
                   [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  std::string text = base.text;
  for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
    text.replace(it->begin, it->end - it->begin, it->text);
  }

  outcome.ok = true;
  outcome.unit.text = std::move(text);
  return outcome;
}

CompileResult MiniooBackend::compile_check(
    const std::vector<SourceUnit>& units) const {
  return check_units(units);
}

std::vector<TestOutcome> MiniooBackend::run_tests(
    const std::vector<SourceUnit>& units,
    const std::vector<TestProgram>& tests) const {
  std::vector<TestOutcome> outcomes;
  outcomes.reserve(tests.size());
  for (const auto& test : tests) {
    CompileResult check = check_units(units, &test);
    if (!check.ok) {
      TestOutcome o;
      o.test_id = test.id;
      o.passed = false;
      o.failure_message =
          "test did not compile: " + check.diagnostics.front().to_string();
      outcomes.push_back(std::move(o));
      continue;
    }
    outcomes.push_back(interpret(units, test, step_budget_));
  }
  return outcomes;
}

std::vector<SourceUnit> MiniooBackend::split_units(
    const std::string& code) const {
  std::vector<SourceUnit> units;
  ParseResult r = parse(code, "src/main.mo");
  if (!r.ok() || r.program->is_test_form() || r.program->classes.empty()) {
    SourceUnit raw;
    raw.path = "src/main.mo";
    raw.class_id = "Main";
    raw.text = code;
    units.push_back(std::move(raw));
    return units;
  }
  for (auto& cls : r.program->classes) {
    Program single;
    std::string name = cls.name;
    single.classes.push_back(std::move(cls));
    SourceUnit unit;
    unit.path = "src/" + name + ".mo";
    unit.class_id = name;
    unit.text = print(single);
    units.push_back(std::move(unit));
  }
  return units;
}

std::vector<std::string> MiniooBackend::signature_lines(
    const ModelPackage& m, const ClassDef& cls) const {
  std::vector<std::string> lines;
  for (const auto& f : features_of(m, cls)) {
    Method getter = make_getter(f);
    lines.push_back(signature_of(getter));
    if (!f.is_many) lines.push_back(signature_of(make_setter(f)));
  }
  for (const auto& op : cls.operations) {
    Method method;
    method.name = op.name;
    for (const auto& p : op.params)
      method.params.push_back({p.name, map_type(p.type)});
    method.return_type = map_type(op.return_type);
    lines.push_back(signature_of(method));
  }
  return lines;
}

std::vector<MethodSpan> MiniooBackend::method_spans(
    const SourceUnit& unit) const {
  ParseResult r = parse(unit.text, unit.path);
  std::vector<MethodSpan> spans;
  if (!r.ok()) return spans;
  for (const auto& cls : r.program->classes) {
    for (const auto& m : cls.methods) {
      spans.push_back({{cls.name, m.name, static_cast<int>(m.params.size())},
                       m.sig_line,
                       m.end_line});
    }
  }
  return spans;
}

}  // namespace iecoregen::minioo
