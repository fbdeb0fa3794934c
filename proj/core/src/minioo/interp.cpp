#include <cmath>
#include <map>
#include <memory>
#include <unordered_map>
#include <variant>

#include "iecoregen/minioo/minioo.hpp"

namespace iecoregen::minioo {

namespace {

struct Object;

struct DateValue {
  std::int64_t days = 0;
};

struct Value {
  using ListRef = std::shared_ptr<std::vector<Value>>;
  using ObjectRef = std::shared_ptr<Object>;
  std::variant<std::monostate, std::int64_t, double, bool, std::string,
               DateValue, ListRef, ObjectRef>
      v;

  bool is_null() const { return std::holds_alternative<std::monostate>(v); }
};

struct Object {
  std::string class_name;
  std::unordered_map<std::string, Value> fields;
};

struct RtClass {
  const ClassDecl* decl = nullptr;
  const RtClass* super = nullptr;
  const std::string* source = nullptr;
  std::string path;
};

// Non-local control flow of the tree walker.
struct ReturnSignal {
  Value value;
};
struct RaiseSignal {
  std::string tag;
  std::string message;
  int line;
};
struct AssertFailure {
  int line;
  std::string source_line;
};
struct BudgetExceeded {};
struct DepthExceeded {
  int line;
};

// Proleptic Gregorian calendar <-> epoch-day conversions.
std::int64_t days_from_civil(std::int64_t y, std::int64_t m, std::int64_t d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const std::int64_t yoe = y - era * 400;
  const std::int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

std::int64_t year_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe =
      (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  return y + (mp >= 10 ? 1 : 0);
}

class Interpreter {
 public:
  Interpreter(std::int64_t step_budget) : budget_(step_budget) {}

  TestOutcome run(const std::vector<SourceUnit>& units,
                  const TestProgram& test) {
    TestOutcome outcome;
    outcome.test_id = test.id;

    for (const auto& u : units) {
      ParseResult r = parse(u.text, u.path);
      if (!r.ok()) {
        outcome.failure_message = "library unit " + u.path + " did not parse";
        return outcome;
      }
      library_.push_back({&u, std::move(r.program)});
    }
    ParseResult t = parse(test.text, test.id);
    if (t.program == nullptr) {
      outcome.failure_message = "test did not parse";
      return outcome;
    }
    test_source_ = test.text;
    test_program_ = std::move(t.program);

    for (const auto& [unit, program] : library_) {
      for (const auto& cls : program->classes) {
        RtClass rt;
        rt.decl = &cls;
        rt.source = &unit->text;
        rt.path = unit->path;
        classes_.emplace(cls.name, rt);
      }
    }
    for (auto& [name, rt] : classes_) {
      if (rt.decl->super_name) {
        auto it = classes_.find(*rt.decl->super_name);
        if (it != classes_.end()) rt.super = &it->second;
      }
    }

    try {
      scopes_.emplace_back();
      for (const auto& s : test_program_->statements) exec(*s, nullptr);
      outcome.passed = true;
    } catch (const AssertFailure& f) {
      std::string line = f.source_line;
      // Trim indentation for the message.
      line.erase(0, line.find_first_not_of(" \t"));
      outcome.failure_message = "assertion failed (line " +
                                std::to_string(f.line) + "): " + line;
    } catch (const RaiseSignal& r) {
      if (r.tag == "Unsupported") {
        outcome.failure_message =
            "unsupported operation: " + r.message + " (line " +
            std::to_string(r.line) + ")";
      } else {
        outcome.failure_message = "uncaught " + r.tag + ": " + r.message +
                                  " (line " + std::to_string(r.line) + ")";
      }
    } catch (const BudgetExceeded&) {
      outcome.failure_message = "step budget exceeded (" +
                                std::to_string(budget_) + " steps)";
    } catch (const DepthExceeded& d) {
      outcome.failure_message =
          "call depth exceeded (line " + std::to_string(d.line) + ")";
    } catch (const ReturnSignal&) {
      outcome.failure_message = "return outside a method";
    }
    return outcome;
  }

 private:
  static constexpr int kMaxCallDepth = 256;

  using Scope = std::map<std::string, Value>;

  void step(int line) {
    if (++steps_ > budget_) throw BudgetExceeded{};
    (void)line;
  }

  // Lookup stops at the current frame: callees never see caller locals.
  Value* lookup(const std::string& name) {
    for (std::size_t i = scopes_.size(); i-- > frame_bases_.back();) {
      auto found = scopes_[i].find(name);
      if (found != scopes_[i].end()) return &found->second;
    }
    return nullptr;
  }

  const RtClass& class_of(const std::string& name) {
    return classes_.at(name);
  }

  Value default_value(const Type& t) {
    switch (t.kind) {
      case Type::Kind::Int: return {std::int64_t{0}};
      case Type::Kind::Float: return {0.0};
      case Type::Kind::Bool: return {false};
      case Type::Kind::String: return {std::string()};
      case Type::Kind::Date: return {DateValue{0}};
      case Type::Kind::List:
        return {std::make_shared<std::vector<Value>>()};
      default: return {};  // null
    }
  }

  Value instantiate(const std::string& class_name, int line) {
    auto obj = std::make_shared<Object>();
    obj->class_name = class_name;
    std::vector<const RtClass*> chain;
    for (const RtClass* c = &class_of(class_name); c != nullptr; c = c->super)
      chain.push_back(c);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      for (const auto& f : (*it)->decl->fields) {
        if (f.init) {
          Value v = eval(*f.init, nullptr);
          if (f.type.kind == Type::Kind::Date &&
              std::holds_alternative<std::int64_t>(v.v)) {
            v = Value{DateValue{std::get<std::int64_t>(v.v)}};
          }
          obj->fields[f.name] = coerce(std::move(v), f.type);
        } else {
          obj->fields[f.name] = default_value(f.type);
        }
      }
    }
    (void)line;
    return Value{std::move(obj)};
  }

  // Int widens to Float on assignment, argument passing and return.
  Value coerce(Value v, const Type& to) {
    if (to.kind == Type::Kind::Float &&
        std::holds_alternative<std::int64_t>(v.v)) {
      return Value{static_cast<double>(std::get<std::int64_t>(v.v))};
    }
    return v;
  }

  const Method* resolve_method(const RtClass& cls, const std::string& name,
                               std::size_t arity, const RtClass** owner) {
    for (const RtClass* c = &cls; c != nullptr; c = c->super) {
      if (const Method* m = c->decl->find_method(name, arity)) {
        *owner = c;
        return m;
      }
    }
    return nullptr;
  }

  Value call_method(const Value::ObjectRef& receiver, const std::string& name,
                    std::vector<Value> args, int line) {
    const RtClass& rt = class_of(receiver->class_name);
    const RtClass* owner = nullptr;
    const Method* m = resolve_method(rt, name, args.size(), &owner);
    if (m == nullptr) {
      throw RaiseSignal{"MissingMethod",
                        "class " + receiver->class_name + " has no method " +
                            name + "/" + std::to_string(args.size()),
                        line};
    }
    if (++depth_ > kMaxCallDepth) {
      --depth_;
      throw DepthExceeded{line};
    }
    frame_bases_.push_back(scopes_.size());
    scopes_.emplace_back();
    Value saved_this = this_;
    this_ = Value{receiver};
    for (std::size_t i = 0; i < args.size(); ++i)
      scopes_.back()[m->params[i].name] =
          coerce(std::move(args[i]), m->params[i].type);

    auto leave = [&] {
      scopes_.resize(frame_bases_.back());
      frame_bases_.pop_back();
      this_ = std::move(saved_this);
      --depth_;
    };
    Value result;
    try {
      for (const auto& s : m->body) exec(*s, m);
      if (m->return_type.kind != Type::Kind::Void) {
        throw RaiseSignal{"MissingReturn",
                          "method " + name +
                              " finished without returning a value",
                          m->end_line};
      }
    } catch (const ReturnSignal& r) {
      result = coerce(r.value, m->return_type);
    } catch (...) {
      leave();
      throw;
    }
    leave();
    return result;
  }

  void exec(const Stmt& s, const Method* method) {
    step(s.line);
    switch (s.kind) {
      case Stmt::Kind::VarDecl: {
        Value v = s.expr ? eval(*s.expr, method) : default_value(s.type);
        scopes_.back()[s.name] = coerce(std::move(v), s.type);
        break;
      }
      case Stmt::Kind::Assign: {
        Value v = eval(*s.expr, method);
        if (s.lhs->kind == Expr::Kind::Name) {
          Value* slot = lookup(s.lhs->text);
          if (slot == nullptr) {
            throw RaiseSignal{"MissingName", "unknown name " + s.lhs->text,
                              s.line};
          }
          *slot = widen_like(*slot, std::move(v));
        } else {
          Value target = eval(*s.lhs->target, method);
          auto* obj = std::get_if<Value::ObjectRef>(&target.v);
          if (obj == nullptr || !*obj) {
            throw RaiseSignal{"NullReference",
                              "null receiver for field " + s.lhs->text,
                              s.line};
          }
          auto it = (*obj)->fields.find(s.lhs->text);
          if (it == (*obj)->fields.end()) {
            throw RaiseSignal{"MissingField",
                              "class " + (*obj)->class_name +
                                  " has no field " + s.lhs->text,
                              s.line};
          }
          it->second = widen_like(it->second, std::move(v));
        }
        break;
      }
      case Stmt::Kind::If: {
        if (truth(eval(*s.expr, method), s.line)) {
          run_block(s.body, method);
        } else if (!s.else_body.empty()) {
          run_block(s.else_body, method);
        }
        break;
      }
      case Stmt::Kind::While: {
        while (truth(eval(*s.expr, method), s.line)) {
          step(s.line);
          run_block(s.body, method);
        }
        break;
      }
      case Stmt::Kind::ForEach: {
        Value v = eval(*s.expr, method);
        auto* list = std::get_if<Value::ListRef>(&v.v);
        if (list == nullptr || !*list) {
          throw RaiseSignal{"NullReference", "foreach over a non-list",
                            s.line};
        }
        std::vector<Value> snapshot = **list;
        for (auto& elem : snapshot) {
          step(s.line);
          scopes_.emplace_back();
          scopes_.back()[s.name] = elem;
          try {
            for (const auto& b : s.body) exec(*b, method);
          } catch (...) {
            scopes_.pop_back();
            throw;
          }
          scopes_.pop_back();
        }
        break;
      }
      case Stmt::Kind::Return: {
        ReturnSignal r;
        if (s.expr) r.value = eval(*s.expr, method);
        throw r;
      }
      case Stmt::Kind::Raise: {
        Value v = eval(*s.expr, method);
        auto* msg = std::get_if<std::string>(&v.v);
        throw RaiseSignal{s.name, msg ? *msg : "", s.line};
      }
      case Stmt::Kind::ExprStmt:
        eval(*s.expr, method);
        break;
      case Stmt::Kind::Assert: {
        if (!truth(eval(*s.expr, method), s.line)) {
          const std::string& src =
              method == nullptr ? test_source_ : *owner_source(method);
          throw AssertFailure{s.line, line_at(src, s.line)};
        }
        break;
      }
    }
  }

  // Source text of the unit owning a method (for assert messages inside
  // library code).
  const std::string* owner_source(const Method* method) {
    for (const auto& [name, rt] : classes_) {
      for (const auto& m : rt.decl->methods)
        if (&m == method) return rt.source;
    }
    return &test_source_;
  }

  void run_block(const std::vector<StmtPtr>& body, const Method* method) {
    scopes_.emplace_back();
    try {
      for (const auto& s : body) exec(*s, method);
    } catch (...) {
      scopes_.pop_back();
      throw;
    }
    scopes_.pop_back();
  }

  bool truth(const Value& v, int line) {
    if (auto* b = std::get_if<bool>(&v.v)) return *b;
    throw RaiseSignal{"TypeError", "condition is not a Bool", line};
  }

  // Preserve the Float-ness of a slot when assigning an Int into it.
  static Value widen_like(const Value& slot, Value v) {
    if (std::holds_alternative<double>(slot.v) &&
        std::holds_alternative<std::int64_t>(v.v)) {
      return Value{static_cast<double>(std::get<std::int64_t>(v.v))};
    }
    return v;
  }

  Value eval(const Expr& e, const Method* method) {
    step(e.line);
    switch (e.kind) {
      case Expr::Kind::IntLit: return {e.int_value};
      case Expr::Kind::FloatLit: return {e.float_value};
      case Expr::Kind::BoolLit: return {e.bool_value};
      case Expr::Kind::StringLit: return {e.text};
      case Expr::Kind::NullLit: return {};
      case Expr::Kind::ListLit: {
        auto list = std::make_shared<std::vector<Value>>();
        list->reserve(e.args.size());
        for (const auto& a : e.args) list->push_back(eval(*a, method));
        return {std::move(list)};
      }
      case Expr::Kind::Name: {
        Value* v = lookup(e.text);
        if (v == nullptr) {
          throw RaiseSignal{"MissingName", "unknown name " + e.text, e.line};
        }
        return *v;
      }
      case Expr::Kind::This: {
        if (this_.is_null()) {
          throw RaiseSignal{"TypeError", "'this' outside a class", e.line};
        }
        return this_;
      }
      case Expr::Kind::FieldAccess: {
        Value target = eval(*e.target, method);
        auto* obj = std::get_if<Value::ObjectRef>(&target.v);
        if (obj == nullptr || !*obj) {
          throw RaiseSignal{"NullReference",
                            "null receiver for field " + e.text, e.line};
        }
        auto it = (*obj)->fields.find(e.text);
        if (it == (*obj)->fields.end()) {
          throw RaiseSignal{"MissingField",
                            "class " + (*obj)->class_name + " has no field " +
                                e.text,
                            e.line};
        }
        return it->second;
      }
      case Expr::Kind::MethodCall: return eval_call(e, method);
      case Expr::Kind::StaticCall: return eval_static(e, method);
      case Expr::Kind::New: {
        if (classes_.find(e.text) == classes_.end()) {
          throw RaiseSignal{"MissingName", "unknown class " + e.text, e.line};
        }
        return instantiate(e.text, e.line);
      }
      case Expr::Kind::Unary: {
        Value v = eval(*e.target, method);
        if (e.unary_op == UnaryOp::Not) {
          return {!truth(v, e.line)};
        }
        if (auto* i = std::get_if<std::int64_t>(&v.v)) return {-*i};
        if (auto* f = std::get_if<double>(&v.v)) return {-*f};
        throw RaiseSignal{"TypeError", "unary '-' on a non-number", e.line};
      }
      case Expr::Kind::Binary: return eval_binary(e, method);
    }
    return {};
  }

  Value eval_call(const Expr& e, const Method* method) {
    Value receiver;
    if (e.target == nullptr) {
      if (this_.is_null()) {
        throw RaiseSignal{"MissingName",
                          "free function calls are not supported", e.line};
      }
      receiver = this_;
    } else {
      receiver = eval(*e.target, method);
    }

    if (auto* list = std::get_if<Value::ListRef>(&receiver.v))
      return eval_list_call(*list, e, method);
    if (auto* str = std::get_if<std::string>(&receiver.v))
      return eval_string_call(*str, e, method);
    if (auto* date = std::get_if<DateValue>(&receiver.v))
      return eval_date_call(*date, e, method);

    auto* obj = std::get_if<Value::ObjectRef>(&receiver.v);
    if (obj == nullptr || !*obj) {
      throw RaiseSignal{"NullReference",
                        "null receiver for method " + e.text, e.line};
    }
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(eval(*a, method));
    return call_method(*obj, e.text, std::move(args), e.line);
  }

  Value eval_list_call(Value::ListRef& list, const Expr& e,
                       const Method* method) {
    if (!list) {
      throw RaiseSignal{"NullReference", "null list", e.line};
    }
    const std::string& n = e.text;
    if (n == "add" && e.args.size() == 1) {
      list->push_back(eval(*e.args[0], method));
      return {};
    }
    if (n == "size" && e.args.empty()) {
      return {static_cast<std::int64_t>(list->size())};
    }
    if ((n == "get" || n == "remove") && e.args.size() == 1) {
      Value idx = eval(*e.args[0], method);
      auto* i = std::get_if<std::int64_t>(&idx.v);
      if (i == nullptr) {
        throw RaiseSignal{"TypeError", "list index must be an Int", e.line};
      }
      if (*i < 0 || static_cast<std::size_t>(*i) >= list->size()) {
        throw RaiseSignal{"IndexOutOfBounds",
                          "list index " + std::to_string(*i) +
                              " out of bounds (size " +
                              std::to_string(list->size()) + ")",
                          e.line};
      }
      if (n == "get") return (*list)[static_cast<std::size_t>(*i)];
      list->erase(list->begin() + static_cast<std::ptrdiff_t>(*i));
      return {};
    }
    throw RaiseSignal{"MissingMethod", "List has no method " + n, e.line};
  }

  Value eval_string_call(const std::string& s, const Expr& e,
                         const Method* method) {
    const std::string& n = e.text;
    if (n == "length" && e.args.empty()) {
      return {static_cast<std::int64_t>(s.size())};
    }
    if ((n == "concat" || n == "contains") && e.args.size() == 1) {
      Value arg = eval(*e.args[0], method);
      auto* other = std::get_if<std::string>(&arg.v);
      if (other == nullptr) {
        throw RaiseSignal{"TypeError", "String." + n + " needs a String",
                          e.line};
      }
      if (n == "concat") return {s + *other};
      return {s.find(*other) != std::string::npos};
    }
    throw RaiseSignal{"MissingMethod", "String has no method " + n, e.line};
  }

  Value eval_date_call(const DateValue& d, const Expr& e,
                       const Method* method) {
    const std::string& n = e.text;
    if (n == "daysBetween" && e.args.size() == 1) {
      Value arg = eval(*e.args[0], method);
      auto* other = std::get_if<DateValue>(&arg.v);
      if (other == nullptr) {
        throw RaiseSignal{"TypeError", "Date.daysBetween needs a Date",
                          e.line};
      }
      // Signed: days from this date forward to the argument.
      return {other->days - d.days};
    }
    if (n == "addDays" && e.args.size() == 1) {
      Value arg = eval(*e.args[0], method);
      auto* delta = std::get_if<std::int64_t>(&arg.v);
      if (delta == nullptr) {
        throw RaiseSignal{"TypeError", "Date.addDays needs an Int", e.line};
      }
      return {DateValue{d.days + *delta}};
    }
    if (n == "year" && e.args.empty()) {
      return {year_from_days(d.days)};
    }
    throw RaiseSignal{"MissingMethod", "Date has no method " + n, e.line};
  }

  Value eval_static(const Expr& e, const Method* method) {
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(eval(*a, method));
    auto as_int = [&](std::size_t i) -> std::int64_t {
      if (auto* v = std::get_if<std::int64_t>(&args[i].v)) return *v;
      throw RaiseSignal{"TypeError",
                        e.text + "." + e.member + " needs Int arguments",
                        e.line};
    };
    auto as_number = [&](std::size_t i) -> double {
      if (auto* v = std::get_if<std::int64_t>(&args[i].v))
        return static_cast<double>(*v);
      if (auto* v = std::get_if<double>(&args[i].v)) return *v;
      throw RaiseSignal{"TypeError",
                        e.text + "." + e.member + " needs numeric arguments",
                        e.line};
    };
    auto both_int = [&]() {
      return std::holds_alternative<std::int64_t>(args[0].v) &&
             std::holds_alternative<std::int64_t>(args[1].v);
    };

    if (e.text == "Math") {
      if (e.member == "min" && args.size() == 2) {
        if (both_int())
          return {std::min(as_int(0), as_int(1))};
        return {std::min(as_number(0), as_number(1))};
      }
      if (e.member == "max" && args.size() == 2) {
        if (both_int())
          return {std::max(as_int(0), as_int(1))};
        return {std::max(as_number(0), as_number(1))};
      }
      if (e.member == "abs" && args.size() == 1) {
        if (auto* v = std::get_if<std::int64_t>(&args[0].v))
          return {*v < 0 ? -*v : *v};
        return {std::fabs(as_number(0))};
      }
    }
    if (e.text == "Date") {
      if (e.member == "of" && args.size() == 1) {
        return {DateValue{as_int(0)}};
      }
      if (e.member == "ymd" && args.size() == 3) {
        std::int64_t y = as_int(0), m = as_int(1), d = as_int(2);
        if (m < 1 || m > 12 || d < 1 || d > 31) {
          throw RaiseSignal{"InvalidDate",
                            "invalid calendar date " + std::to_string(y) +
                                "-" + std::to_string(m) + "-" +
                                std::to_string(d),
                            e.line};
        }
        return {DateValue{days_from_civil(y, m, d)}};
      }
    }
    throw RaiseSignal{"MissingMethod",
                      e.text + " has no function " + e.member, e.line};
  }

  Value eval_binary(const Expr& e, const Method* method) {
    // Short-circuit logical operators evaluate the right side lazily.
    if (e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or) {
      bool lhs = truth(eval(*e.target, method), e.line);
      if (e.binary_op == BinaryOp::And && !lhs) return {false};
      if (e.binary_op == BinaryOp::Or && lhs) return {true};
      return {truth(eval(*e.rhs, method), e.line)};
    }

    Value l = eval(*e.target, method);
    Value r = eval(*e.rhs, method);

    switch (e.binary_op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod: return arithmetic(e, l, r);
      case BinaryOp::Eq: return {equals(l, r, e.line)};
      case BinaryOp::Ne: return {!equals(l, r, e.line)};
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: return compare(e, l, r);
      default: break;
    }
    throw RaiseSignal{"TypeError", "unsupported operator", e.line};
  }

  Value arithmetic(const Expr& e, const Value& l, const Value& r) {
    auto* li = std::get_if<std::int64_t>(&l.v);
    auto* ri = std::get_if<std::int64_t>(&r.v);
    if (li != nullptr && ri != nullptr) {
      switch (e.binary_op) {
        case BinaryOp::Add: return {*li + *ri};
        case BinaryOp::Sub: return {*li - *ri};
        case BinaryOp::Mul: return {*li * *ri};
        case BinaryOp::Div:
          if (*ri == 0)
            throw RaiseSignal{"DivisionByZero", "division by zero", e.line};
          return {*li / *ri};  // truncates toward zero
        case BinaryOp::Mod:
          if (*ri == 0)
            throw RaiseSignal{"DivisionByZero", "modulo by zero", e.line};
          return {*li % *ri};
        default: break;
      }
    }
    auto as_double = [&](const Value& v) -> double {
      if (auto* i = std::get_if<std::int64_t>(&v.v))
        return static_cast<double>(*i);
      if (auto* f = std::get_if<double>(&v.v)) return *f;
      throw RaiseSignal{"TypeError", "arithmetic on non-numbers", e.line};
    };
    double a = as_double(l), b = as_double(r);
    switch (e.binary_op) {
      case BinaryOp::Add: return {a + b};
      case BinaryOp::Sub: return {a - b};
      case BinaryOp::Mul: return {a * b};
      case BinaryOp::Div: return {a / b};  // IEEE, may yield inf/nan
      case BinaryOp::Mod:
        throw RaiseSignal{"TypeError", "'%' needs Int operands", e.line};
      default: break;
    }
    throw RaiseSignal{"TypeError", "arithmetic on non-numbers", e.line};
  }

  bool equals(const Value& l, const Value& r, int line) {
    if (l.is_null() || r.is_null()) {
      if (l.is_null() && r.is_null()) return true;
      const Value& other = l.is_null() ? r : l;
      if (std::holds_alternative<Value::ObjectRef>(other.v))
        return !std::get<Value::ObjectRef>(other.v);
      if (std::holds_alternative<Value::ListRef>(other.v))
        return !std::get<Value::ListRef>(other.v);
      return false;
    }
    if (std::holds_alternative<std::int64_t>(l.v) &&
        std::holds_alternative<std::int64_t>(r.v))
      return std::get<std::int64_t>(l.v) == std::get<std::int64_t>(r.v);
    if ((std::holds_alternative<double>(l.v) ||
         std::holds_alternative<std::int64_t>(l.v)) &&
        (std::holds_alternative<double>(r.v) ||
         std::holds_alternative<std::int64_t>(r.v))) {
      auto num = [](const Value& v) {
        return std::holds_alternative<double>(v.v)
                   ? std::get<double>(v.v)
                   : static_cast<double>(std::get<std::int64_t>(v.v));
      };
      return num(l) == num(r);
    }
    if (std::holds_alternative<bool>(l.v) &&
        std::holds_alternative<bool>(r.v))
      return std::get<bool>(l.v) == std::get<bool>(r.v);
    if (std::holds_alternative<std::string>(l.v) &&
        std::holds_alternative<std::string>(r.v))
      return std::get<std::string>(l.v) == std::get<std::string>(r.v);
    if (std::holds_alternative<DateValue>(l.v) &&
        std::holds_alternative<DateValue>(r.v))
      return std::get<DateValue>(l.v).days == std::get<DateValue>(r.v).days;
    if (std::holds_alternative<Value::ObjectRef>(l.v) &&
        std::holds_alternative<Value::ObjectRef>(r.v))
      return std::get<Value::ObjectRef>(l.v) ==
             std::get<Value::ObjectRef>(r.v);
    throw RaiseSignal{"TypeError", "cannot compare these values", line};
  }

  Value compare(const Expr& e, const Value& l, const Value& r) {
    double a, b;
    if (std::holds_alternative<DateValue>(l.v) &&
        std::holds_alternative<DateValue>(r.v)) {
      a = static_cast<double>(std::get<DateValue>(l.v).days);
      b = static_cast<double>(std::get<DateValue>(r.v).days);
    } else {
      auto num = [&](const Value& v) -> double {
        if (auto* i = std::get_if<std::int64_t>(&v.v))
          return static_cast<double>(*i);
        if (auto* f = std::get_if<double>(&v.v)) return *f;
        throw RaiseSignal{"TypeError", "cannot order these values", e.line};
      };
      a = num(l);
      b = num(r);
    }
    switch (e.binary_op) {
      case BinaryOp::Lt: return {a < b};
      case BinaryOp::Le: return {a <= b};
      case BinaryOp::Gt: return {a > b};
      case BinaryOp::Ge: return {a >= b};
      default: break;
    }
    throw RaiseSignal{"TypeError", "unsupported comparison", e.line};
  }

  std::vector<std::pair<const SourceUnit*, std::shared_ptr<Program>>>
      library_;
  std::shared_ptr<Program> test_program_;
  std::string test_source_;
  std::map<std::string, RtClass> classes_;
  std::vector<Scope> scopes_;
  std::vector<std::size_t> frame_bases_{0};
  Value this_;
  std::int64_t budget_;
  std::int64_t steps_ = 0;
  int depth_ = 0;
};

}  // namespace

TestOutcome interpret(const std::vector<SourceUnit>& units,
                      const TestProgram& test, std::int64_t step_budget) {
  return Interpreter(step_budget).run(units, test);
}

}  // namespace iecoregen::minioo
