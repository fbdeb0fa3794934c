#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "iecoregen/minioo/minioo.hpp"

namespace iecoregen::minioo {

namespace {

using Kind = Type::Kind;

struct ClassEntry {
  const ClassDecl* decl = nullptr;
  const SourceUnit* unit = nullptr;
  std::string super;  // empty when none
  bool cyclic = false;
};

class Checker {
 public:
  CompileResult run(const std::vector<SourceUnit>& units,
                    const TestProgram* test) {
    std::vector<std::pair<const SourceUnit*, ParseResult>> parsed;
    for (const auto& u : units) {
      ParseResult r = parse(u.text, u.path);
      if (!r.ok()) {
        for (auto& d : r.diagnostics) diags_.push_back(std::move(d));
        continue;
      }
      if (r.program->is_test_form()) {
        report(u.path, u.text, DiagnosticKind::Other, 1,
               "library unit must contain class declarations only");
        continue;
      }
      parsed.emplace_back(&u, std::move(r));
    }

    for (auto& [unit, result] : parsed) {
      for (const auto& cls : result.program->classes) {
        auto [it, fresh] = classes_.try_emplace(cls.name);
        if (!fresh) {
          report(unit->path, unit->text, DiagnosticKind::Other, cls.line,
                 "class " + cls.name + " is already declared");
          continue;
        }
        it->second.decl = &cls;
        it->second.unit = unit;
        it->second.super = cls.super_name.value_or("");
      }
    }

    resolve_inheritance();

    for (auto& [unit, result] : parsed) {
      for (const auto& cls : result.program->classes) {
        auto it = classes_.find(cls.name);
        if (it == classes_.end() || it->second.decl != &cls) continue;
        check_class(it->second);
      }
    }

    if (test != nullptr) check_test(*test);

    std::stable_sort(diags_.begin(), diags_.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       if (a.path != b.path) return a.path < b.path;
                       return a.line < b.line;
                     });
    CompileResult result;
    result.diagnostics = std::move(diags_);
    result.ok = result.diagnostics.empty();
    return result;
  }

 private:
  struct Scope {
    std::map<std::string, Type> vars;
  };

  struct Context {
    const ClassEntry* cls = nullptr;   // null in test form
    const Method* method = nullptr;    // null in test form
    std::string path;
    const std::string* source = nullptr;
    std::vector<Scope> scopes;

    Type* lookup(const std::string& name) {
      for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
        auto found = it->vars.find(name);
        if (found != it->vars.end()) return &found->second;
      }
      return nullptr;
    }
  };

  void resolve_inheritance() {
    for (auto& [name, entry] : classes_) {
      if (entry.super.empty()) continue;
      if (classes_.find(entry.super) == classes_.end()) {
        report_entry(entry, DiagnosticKind::UnresolvedSymbol,
                     entry.decl->line,
                     "superclass " + entry.super + " is not declared");
        entry.super.clear();
        continue;
      }
    }
    // Cycle detection; every class on a cycle is marked, one diagnostic per
    // cycle at its first member in map order.
    std::set<std::string> reported;
    for (auto& [name, entry] : classes_) {
      std::set<std::string> path{name};
      ClassEntry* cur = &entry;
      while (!cur->super.empty()) {
        ClassEntry& super = classes_.at(cur->super);
        if (path.count(cur->super)) {
          bool fresh = true;
          for (const auto& n : path)
            if (reported.count(n)) fresh = false;
          for (const auto& n : path) {
            classes_.at(n).cyclic = true;
            reported.insert(n);
          }
          if (fresh) {
            report_entry(entry, DiagnosticKind::Other, entry.decl->line,
                         "inheritance cycle through " + cur->super);
          }
          break;
        }
        path.insert(cur->super);
        cur = &super;
      }
    }
  }

  std::vector<const ClassEntry*> chain_of(const ClassEntry& entry) const {
    std::vector<const ClassEntry*> chain{&entry};
    if (entry.cyclic) return chain;
    const ClassEntry* cur = &entry;
    while (!cur->super.empty()) {
      auto it = classes_.find(cur->super);
      if (it == classes_.end() || it->second.cyclic) break;
      chain.push_back(&it->second);
      cur = &it->second;
    }
    return chain;
  }

  const Field* find_field(const ClassEntry& entry, const std::string& name,
                          const ClassEntry** owner = nullptr) const {
    for (const ClassEntry* e : chain_of(entry)) {
      for (const auto& f : e->decl->fields) {
        if (f.name == name) {
          if (owner) *owner = e;
          return &f;
        }
      }
    }
    return nullptr;
  }

  const Method* find_method(const ClassEntry& entry, const std::string& name,
                            std::size_t arity,
                            const ClassEntry** owner = nullptr) const {
    for (const ClassEntry* e : chain_of(entry)) {
      if (const Method* m = e->decl->find_method(name, arity)) {
        if (owner) *owner = e;
        return m;
      }
    }
    return nullptr;
  }

  bool method_name_exists(const ClassEntry& entry,
                          const std::string& name) const {
    for (const ClassEntry* e : chain_of(entry))
      for (const auto& m : e->decl->methods)
        if (m.name == name) return true;
    return false;
  }

  bool type_known(const Type& t) const {
    switch (t.kind) {
      case Kind::Class: return classes_.count(t.class_name) > 0;
      case Kind::List: return type_known(*t.element);
      default: return true;
    }
  }

  bool derives_from(const std::string& sub, const std::string& super) const {
    auto it = classes_.find(sub);
    if (it == classes_.end()) return false;
    for (const ClassEntry* e : chain_of(it->second))
      if (e->decl->name == super) return true;
    return false;
  }

  bool assignable(const Type& from, const Type& to) const {
    if (from.kind == Kind::Unknown || to.kind == Kind::Unknown) return true;
    if (from == to) return true;
    if (from.kind == Kind::Int && to.kind == Kind::Float) return true;
    if (from.kind == Kind::Null && to.kind == Kind::Class) return true;
    if (from.kind == Kind::Class && to.kind == Kind::Class)
      return derives_from(from.class_name, to.class_name);
    if (from.kind == Kind::List && to.kind == Kind::List) {
      if (from.element->kind == Kind::Unknown) return true;
      return *from.element == *to.element;
    }
    return false;
  }

  void check_class(const ClassEntry& entry) {
    const ClassDecl& cls = *entry.decl;
    Context ctx;
    ctx.cls = &entry;
    ctx.path = entry.unit->path;
    ctx.source = &entry.unit->text;

    std::set<std::string> field_names;
    for (const ClassEntry* e : chain_of(entry)) {
      if (e == &entry) continue;
      for (const auto& f : e->decl->fields) field_names.insert(f.name);
    }
    for (const auto& f : cls.fields) {
      if (!field_names.insert(f.name).second) {
        report_ctx(ctx, DiagnosticKind::Other, f.line,
                   "duplicate field " + f.name);
      }
      if (!type_known(f.type)) {
        report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, f.line,
                   "unknown type " + f.type.to_string());
      }
      if (f.init) {
        ctx.scopes.emplace_back();
        Type t = check_expr(ctx, *f.init);
        ctx.scopes.pop_back();
        bool date_from_int =
            f.type.kind == Kind::Date && t.kind == Kind::Int;
        if (!assignable(t, f.type) && !date_from_int) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, f.line,
                     "initializer of type " + t.to_string() +
                         " does not match field type " + f.type.to_string());
        }
      }
    }

    std::set<std::pair<std::string, std::size_t>> method_keys;
    for (const auto& m : cls.methods) {
      if (!method_keys.insert({m.name, m.params.size()}).second) {
        report_ctx(ctx, DiagnosticKind::Other, m.sig_line,
                   "method " + m.name + "/" +
                       std::to_string(m.params.size()) +
                       " is declared twice");
      }
      check_method(ctx, entry, m);
    }
  }

  void check_method(Context& ctx, const ClassEntry& entry, const Method& m) {
    ctx.method = &m;
    ctx.scopes.clear();
    ctx.scopes.emplace_back();

    if (!type_known(m.return_type)) {
      report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, m.sig_line,
                 "unknown type " + m.return_type.to_string());
    }
    std::set<std::string> param_names;
    for (const auto& p : m.params) {
      if (!param_names.insert(p.name).second) {
        report_ctx(ctx, DiagnosticKind::Other, m.sig_line,
                   "duplicate parameter " + p.name);
      }
      if (!type_known(p.type)) {
        report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, m.sig_line,
                   "unknown type " + p.type.to_string());
      }
      ctx.scopes.back().vars[p.name] = p.type;
    }

    // Overrides must keep the inherited signature.
    for (const ClassEntry* e : chain_of(entry)) {
      if (e == &entry) continue;
      if (const Method* base = e->decl->find_method(m.name, m.params.size())) {
        bool same = base->return_type == m.return_type;
        for (std::size_t i = 0; same && i < m.params.size(); ++i)
          same = base->params[i].type == m.params[i].type;
        if (!same) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, m.sig_line,
                     "override of " + e->decl->name + "." + m.name +
                         " changes the signature");
        }
        break;
      }
    }

    for (const auto& s : m.body) check_stmt(ctx, *s);
    ctx.method = nullptr;
  }

  void check_test(const TestProgram& test) {
    ParseResult r = parse(test.text, test.id);
    if (!r.ok()) {
      for (auto& d : r.diagnostics) diags_.push_back(std::move(d));
      return;
    }
    if (!r.program->classes.empty()) {
      report(test.id, test.text, DiagnosticKind::Other,
             r.program->classes.front().line,
             "test programs cannot declare classes");
      return;
    }
    Context ctx;
    ctx.path = test.id;
    ctx.source = &test.text;
    ctx.scopes.emplace_back();
    for (const auto& s : r.program->statements) check_stmt(ctx, *s);
  }

  void check_stmt(Context& ctx, const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::VarDecl: {
        if (!type_known(s.type)) {
          report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, s.line,
                     "unknown type " + s.type.to_string());
        }
        if (s.expr) {
          Type t = check_expr(ctx, *s.expr);
          if (!assignable(t, s.type)) {
            report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                       "cannot assign " + t.to_string() + " to " +
                           s.type.to_string());
          }
        }
        if (!ctx.scopes.back().vars.emplace(s.name, s.type).second) {
          report_ctx(ctx, DiagnosticKind::Other, s.line,
                     "variable " + s.name + " is already declared");
        }
        break;
      }
      case Stmt::Kind::Assign: {
        Type target = check_lvalue(ctx, *s.lhs);
        Type value = check_expr(ctx, *s.expr);
        if (!assignable(value, target)) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                     "cannot assign " + value.to_string() + " to " +
                         target.to_string());
        }
        break;
      }
      case Stmt::Kind::If:
      case Stmt::Kind::While: {
        Type cond = check_expr(ctx, *s.expr);
        if (cond.kind != Kind::Bool && cond.kind != Kind::Unknown) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                     "condition must be Bool, got " + cond.to_string());
        }
        push_scope(ctx, s.body);
        if (!s.else_body.empty()) push_scope(ctx, s.else_body);
        break;
      }
      case Stmt::Kind::ForEach: {
        Type t = check_expr(ctx, *s.expr);
        Type elem = Type::simple(Kind::Unknown);
        if (t.kind == Kind::List && t.element->kind != Kind::Unknown) {
          elem = *t.element;
        } else if (t.kind != Kind::Unknown) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                     "foreach needs a List, got " + t.to_string());
        }
        ctx.scopes.emplace_back();
        ctx.scopes.back().vars[s.name] = elem;
        for (const auto& b : s.body) check_stmt(ctx, *b);
        ctx.scopes.pop_back();
        break;
      }
      case Stmt::Kind::Return: {
        if (ctx.method == nullptr) {
          report_ctx(ctx, DiagnosticKind::Other, s.line,
                     "return outside a method");
          break;
        }
        const Type& declared = ctx.method->return_type;
        if (declared.kind == Kind::Void) {
          if (s.expr) {
            report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                       "cannot return a value from a Void method");
          }
          break;
        }
        if (!s.expr) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                     "missing return value in method " + ctx.method->name);
          break;
        }
        Type t = check_expr(ctx, *s.expr);
        if (!assignable(t, declared)) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                     "return type " + t.to_string() + " does not match " +
                         declared.to_string());
        }
        break;
      }
      case Stmt::Kind::Raise: {
        Type t = check_expr(ctx, *s.expr);
        if (t.kind != Kind::String && t.kind != Kind::Unknown) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                     "raise payload must be a String");
        }
        break;
      }
      case Stmt::Kind::ExprStmt:
        check_expr(ctx, *s.expr);
        break;
      case Stmt::Kind::Assert: {
        Type t = check_expr(ctx, *s.expr);
        if (t.kind != Kind::Bool && t.kind != Kind::Unknown) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, s.line,
                     "assert needs a Bool, got " + t.to_string());
        }
        break;
      }
    }
  }

  void push_scope(Context& ctx, const std::vector<StmtPtr>& body) {
    ctx.scopes.emplace_back();
    for (const auto& s : body) check_stmt(ctx, *s);
    ctx.scopes.pop_back();
  }

  Type check_lvalue(Context& ctx, const Expr& e) {
    if (e.kind == Expr::Kind::Name) {
      if (Type* t = ctx.lookup(e.text)) return *t;
      report_name_miss(ctx, e);
      return Type::simple(Kind::Unknown);
    }
    return check_expr(ctx, e);  // field access
  }

  void report_name_miss(Context& ctx, const Expr& e) {
    std::string hint;
    if (ctx.cls != nullptr && find_field(*ctx.cls, e.text) != nullptr) {
      hint = "; fields must be accessed as this." + e.text;
    }
    report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
               "unknown name " + e.text + hint);
  }

  Type check_expr(Context& ctx, const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return Type::simple(Kind::Int);
      case Expr::Kind::FloatLit: return Type::simple(Kind::Float);
      case Expr::Kind::BoolLit: return Type::simple(Kind::Bool);
      case Expr::Kind::StringLit: return Type::simple(Kind::String);
      case Expr::Kind::NullLit: return Type::simple(Kind::Null);
      case Expr::Kind::ListLit: {
        if (e.args.empty())
          return Type::list_of(Type::simple(Kind::Unknown));
        Type acc = check_expr(ctx, *e.args.front());
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          Type t = check_expr(ctx, *e.args[i]);
          if (assignable(t, acc)) continue;
          if (assignable(acc, t)) {
            acc = t;
            continue;
          }
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     "list literal mixes " + acc.to_string() + " and " +
                         t.to_string());
          return Type::list_of(Type::simple(Kind::Unknown));
        }
        return Type::list_of(std::move(acc));
      }
      case Expr::Kind::Name: {
        if (Type* t = ctx.lookup(e.text)) return *t;
        report_name_miss(ctx, e);
        return Type::simple(Kind::Unknown);
      }
      case Expr::Kind::This:
        if (ctx.cls == nullptr) {
          report_ctx(ctx, DiagnosticKind::Other, e.line,
                     "'this' outside a class");
          return Type::simple(Kind::Unknown);
        }
        return Type::of_class(ctx.cls->decl->name);
      case Expr::Kind::FieldAccess: {
        Type t = check_expr(ctx, *e.target);
        if (t.kind == Kind::Unknown) return t;
        if (t.kind != Kind::Class) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     t.to_string() + " has no fields");
          return Type::simple(Kind::Unknown);
        }
        auto entry_it = classes_.find(t.class_name);
        if (entry_it == classes_.end()) {
          // The declaration already reported the unknown type.
          return Type::simple(Kind::Unknown);
        }
        const ClassEntry& entry = entry_it->second;
        if (const Field* f = find_field(entry, e.text)) return f->type;
        report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
                   "class " + t.class_name + " has no field " + e.text);
        return Type::simple(Kind::Unknown);
      }
      case Expr::Kind::MethodCall: return check_call(ctx, e);
      case Expr::Kind::StaticCall: return check_static_call(ctx, e);
      case Expr::Kind::New: {
        if (classes_.count(e.text) == 0) {
          report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
                     "unknown class " + e.text);
          return Type::simple(Kind::Unknown);
        }
        return Type::of_class(e.text);
      }
      case Expr::Kind::Unary: {
        Type t = check_expr(ctx, *e.target);
        if (t.kind == Kind::Unknown) return t;
        if (e.unary_op == UnaryOp::Neg) {
          if (!t.is_numeric()) {
            report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                       "unary '-' needs a numeric operand");
            return Type::simple(Kind::Unknown);
          }
          return t;
        }
        if (t.kind != Kind::Bool) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     "'!' needs a Bool operand");
          return Type::simple(Kind::Unknown);
        }
        return t;
      }
      case Expr::Kind::Binary: return check_binary(ctx, e);
    }
    return Type::simple(Kind::Unknown);
  }

  Type check_call(Context& ctx, const Expr& e) {
    const ClassEntry* entry = nullptr;
    std::string described;
    if (e.target == nullptr) {
      if (ctx.cls == nullptr) {
        report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
                   "free function calls are not supported; call " + e.text +
                       " on an object");
        check_args_only(ctx, e);
        return Type::simple(Kind::Unknown);
      }
      entry = ctx.cls;
      described = "class " + entry->decl->name;
    } else {
      Type t = check_expr(ctx, *e.target);
      if (t.kind == Kind::Unknown) {
        check_args_only(ctx, e);
        return t;
      }
      if (t.kind == Kind::List) return check_list_call(ctx, e, t);
      if (t.kind == Kind::String) return check_string_call(ctx, e);
      if (t.kind == Kind::Date) return check_date_call(ctx, e);
      if (t.kind != Kind::Class) {
        report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                   t.to_string() + " has no methods");
        check_args_only(ctx, e);
        return Type::simple(Kind::Unknown);
      }
      auto entry_it = classes_.find(t.class_name);
      if (entry_it == classes_.end()) {
        // The declaration already reported the unknown type.
        check_args_only(ctx, e);
        return Type::simple(Kind::Unknown);
      }
      entry = &entry_it->second;
      described = "class " + t.class_name;
    }

    const Method* m = find_method(*entry, e.text, e.args.size());
    if (m == nullptr) {
      std::string msg = described + " has no method " + e.text + "/" +
                        std::to_string(e.args.size());
      if (method_name_exists(*entry, e.text))
        msg += " (a different arity exists)";
      report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line, msg);
      check_args_only(ctx, e);
      return Type::simple(Kind::Unknown);
    }
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      Type t = check_expr(ctx, *e.args[i]);
      if (!assignable(t, m->params[i].type)) {
        report_ctx(ctx, DiagnosticKind::TypeMismatch, e.args[i]->line,
                   "argument " + std::to_string(i + 1) + " of " + e.text +
                       ": cannot pass " + t.to_string() + " as " +
                       m->params[i].type.to_string());
      }
    }
    return m->return_type;
  }

  void check_args_only(Context& ctx, const Expr& e) {
    for (const auto& a : e.args) check_expr(ctx, *a);
  }

  Type check_list_call(Context& ctx, const Expr& e, const Type& list) {
    const Type& elem = *list.element;
    const std::string& n = e.text;
    auto args = [&](std::initializer_list<Type> expected) {
      if (e.args.size() != expected.size()) {
        report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
                   "List has no method " + n + "/" +
                       std::to_string(e.args.size()));
        check_args_only(ctx, e);
        return false;
      }
      std::size_t i = 0;
      for (const Type& want : expected) {
        Type t = check_expr(ctx, *e.args[i]);
        if (!assignable(t, want)) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.args[i]->line,
                     "argument " + std::to_string(i + 1) + " of List." + n +
                         ": cannot pass " + t.to_string() + " as " +
                         want.to_string());
        }
        ++i;
      }
      return true;
    };
    if (n == "add") {
      args({elem});
      return Type::simple(Kind::Void);
    }
    if (n == "get") {
      args({Type::simple(Kind::Int)});
      return elem;
    }
    if (n == "size") {
      args({});
      return Type::simple(Kind::Int);
    }
    if (n == "remove") {
      args({Type::simple(Kind::Int)});
      return Type::simple(Kind::Void);
    }
    report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
               "List has no method " + n);
    check_args_only(ctx, e);
    return Type::simple(Kind::Unknown);
  }

  Type check_string_call(Context& ctx, const Expr& e) {
    const std::string& n = e.text;
    if (n == "length" && e.args.empty()) return Type::simple(Kind::Int);
    if ((n == "concat" || n == "contains") && e.args.size() == 1) {
      Type t = check_expr(ctx, *e.args.front());
      if (!assignable(t, Type::simple(Kind::String))) {
        report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                   "String." + n + " needs a String argument");
      }
      return Type::simple(n == "concat" ? Kind::String : Kind::Bool);
    }
    report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
               "String has no method " + n + "/" +
                   std::to_string(e.args.size()));
    check_args_only(ctx, e);
    return Type::simple(Kind::Unknown);
  }

  Type check_date_call(Context& ctx, const Expr& e) {
    const std::string& n = e.text;
    if (n == "daysBetween" && e.args.size() == 1) {
      Type t = check_expr(ctx, *e.args.front());
      if (!assignable(t, Type::simple(Kind::Date))) {
        report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                   "Date.daysBetween needs a Date argument");
      }
      return Type::simple(Kind::Int);
    }
    if (n == "addDays" && e.args.size() == 1) {
      Type t = check_expr(ctx, *e.args.front());
      if (!assignable(t, Type::simple(Kind::Int))) {
        report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                   "Date.addDays needs an Int argument");
      }
      return Type::simple(Kind::Date);
    }
    if (n == "year" && e.args.empty()) return Type::simple(Kind::Int);
    report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
               "Date has no method " + n + "/" +
                   std::to_string(e.args.size()));
    check_args_only(ctx, e);
    return Type::simple(Kind::Unknown);
  }

  Type check_static_call(Context& ctx, const Expr& e) {
    std::vector<Type> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(check_expr(ctx, *a));
    auto numeric = [&](std::size_t i) {
      if (!args[i].is_numeric() && args[i].kind != Kind::Unknown) {
        report_ctx(ctx, DiagnosticKind::TypeMismatch, e.args[i]->line,
                   e.text + "." + e.member + " needs numeric arguments");
        return false;
      }
      return true;
    };
    auto integer = [&](std::size_t i) {
      if (args[i].kind != Kind::Int && args[i].kind != Kind::Unknown) {
        report_ctx(ctx, DiagnosticKind::TypeMismatch, e.args[i]->line,
                   e.text + "." + e.member + " needs Int arguments");
        return false;
      }
      return true;
    };
    if (e.text == "Math") {
      if ((e.member == "min" || e.member == "max") && e.args.size() == 2) {
        numeric(0);
        numeric(1);
        bool any_float = args[0].kind == Kind::Float ||
                         args[1].kind == Kind::Float;
        return Type::simple(any_float ? Kind::Float : Kind::Int);
      }
      if (e.member == "abs" && e.args.size() == 1) {
        numeric(0);
        return args[0].is_numeric() ? args[0] : Type::simple(Kind::Unknown);
      }
    }
    if (e.text == "Date") {
      if (e.member == "of" && e.args.size() == 1) {
        integer(0);
        return Type::simple(Kind::Date);
      }
      if (e.member == "ymd" && e.args.size() == 3) {
        integer(0);
        integer(1);
        integer(2);
        return Type::simple(Kind::Date);
      }
    }
    report_ctx(ctx, DiagnosticKind::UnresolvedSymbol, e.line,
               e.text + " has no function " + e.member + "/" +
                   std::to_string(e.args.size()));
    return Type::simple(Kind::Unknown);
  }

  Type check_binary(Context& ctx, const Expr& e) {
    Type l = check_expr(ctx, *e.target);
    Type r = check_expr(ctx, *e.rhs);
    if (l.kind == Kind::Unknown || r.kind == Kind::Unknown)
      return result_of(e.binary_op, l, r);
    switch (e.binary_op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div: {
        if (!l.is_numeric() || !r.is_numeric()) {
          std::string hint =
              l.kind == Kind::String || r.kind == Kind::String
                  ? "; use String.concat to join strings"
                  : "";
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     std::string("operator '") + to_string(e.binary_op) +
                         "' needs numeric operands, got " + l.to_string() +
                         " and " + r.to_string() + hint);
          return Type::simple(Kind::Unknown);
        }
        bool any_float = l.kind == Kind::Float || r.kind == Kind::Float;
        return Type::simple(any_float ? Kind::Float : Kind::Int);
      }
      case BinaryOp::Mod:
        if (l.kind != Kind::Int || r.kind != Kind::Int) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     "operator '%' needs Int operands");
          return Type::simple(Kind::Unknown);
        }
        return Type::simple(Kind::Int);
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        if (!equatable(l, r)) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     "cannot compare " + l.to_string() + " with " +
                         r.to_string());
        }
        return Type::simple(Kind::Bool);
      }
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: {
        bool ok = (l.is_numeric() && r.is_numeric()) ||
                  (l.kind == Kind::Date && r.kind == Kind::Date);
        if (!ok) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     "cannot order " + l.to_string() + " and " +
                         r.to_string());
        }
        return Type::simple(Kind::Bool);
      }
      case BinaryOp::And:
      case BinaryOp::Or:
        if (l.kind != Kind::Bool || r.kind != Kind::Bool) {
          report_ctx(ctx, DiagnosticKind::TypeMismatch, e.line,
                     std::string("operator '") + to_string(e.binary_op) +
                         "' needs Bool operands");
        }
        return Type::simple(Kind::Bool);
    }
    return Type::simple(Kind::Unknown);
  }

  Type result_of(BinaryOp op, const Type& l, const Type& r) {
    switch (op) {
      case BinaryOp::Eq:
      case BinaryOp::Ne:
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
      case BinaryOp::And:
      case BinaryOp::Or: return Type::simple(Kind::Bool);
      default:
        if (l.kind == Kind::Float || r.kind == Kind::Float)
          return Type::simple(Kind::Float);
        return Type::simple(Kind::Unknown);
    }
  }

  bool equatable(const Type& l, const Type& r) const {
    if (l.is_numeric() && r.is_numeric()) return true;
    if (l.kind == r.kind &&
        (l.kind == Kind::Bool || l.kind == Kind::String ||
         l.kind == Kind::Date))
      return true;
    if (l.kind == Kind::Class && r.kind == Kind::Class)
      return assignable(l, r) || assignable(r, l);
    if (l.kind == Kind::Class && r.kind == Kind::Null) return true;
    if (l.kind == Kind::Null && r.kind == Kind::Class) return true;
    if (l.kind == Kind::Null && r.kind == Kind::Null) return true;
    return false;
  }

  void report_entry(const ClassEntry& entry, DiagnosticKind kind, int line,
                    const std::string& message) {
    report(entry.unit->path, entry.unit->text, kind, line, message);
  }

  void report_ctx(const Context& ctx, DiagnosticKind kind, int line,
                  const std::string& message) {
    report(ctx.path, *ctx.source, kind, line, message);
  }

  void report(const std::string& path, const std::string& source,
              DiagnosticKind kind, int line, const std::string& message) {
    Diagnostic d;
    d.path = path;
    d.kind = kind;
    d.line = line;
    d.source_line = line_at(source, line);
    d.message = message;
    diags_.push_back(std::move(d));
  }

  std::map<std::string, ClassEntry> classes_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

CompileResult check_units(const std::vector<SourceUnit>& units) {
  return Checker().run(units, nullptr);
}

CompileResult check_units(const std::vector<SourceUnit>& units,
                          const TestProgram* test) {
  return Checker().run(units, test);
}

}  // namespace iecoregen::minioo
