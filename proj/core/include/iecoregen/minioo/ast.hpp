#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace iecoregen::minioo {

/// Static type of a MiniOO expression or declaration.
struct Type {
  enum class Kind {
    Int,
    Float,
    Bool,
    String,
    Date,
    Void,
    Class,
    List,
    Null,     // type of the null literal
    Unknown,  // element type of an empty list literal
  };

  Kind kind = Kind::Void;
  std::string class_name;          // Kind::Class
  std::shared_ptr<Type> element;   // Kind::List

  static Type simple(Kind k) { return {k, "", nullptr}; }
  static Type of_class(std::string name) {
    return {Kind::Class, std::move(name), nullptr};
  }
  static Type list_of(Type elem) {
    return {Kind::List, "", std::make_shared<Type>(std::move(elem))};
  }

  bool is_numeric() const { return kind == Kind::Int || kind == Kind::Float; }

  bool operator==(const Type& o) const {
    if (kind != o.kind || class_name != o.class_name) return false;
    if ((element == nullptr) != (o.element == nullptr)) return false;
    return element == nullptr || *element == *o.element;
  }

  std::string to_string() const;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

struct Expr {
  enum class Kind {
    IntLit,     // int_value (non-negative; negatives parse as Unary Neg)
    FloatLit,   // float_value
    BoolLit,    // bool_value
    StringLit,  // text
    NullLit,
    ListLit,    // args = elements
    Name,       // text = local or parameter name
    This,
    FieldAccess,  // target.text
    MethodCall,   // target.text(args); null target = implicit this
    StaticCall,   // text = namespace (Math | Date), member = function
    New,          // text = class name
    Unary,        // unary_op, target
    Binary,       // binary_op, target, rhs
  };

  Kind kind = Kind::NullLit;
  int line = 1;

  std::int64_t int_value = 0;
  double float_value = 0.0;
  bool bool_value = false;
  std::string text;
  std::string member;
  std::vector<ExprPtr> args;
  ExprPtr target;
  ExprPtr rhs;
  BinaryOp binary_op = BinaryOp::Add;
  UnaryOp unary_op = UnaryOp::Neg;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  enum class Kind {
    VarDecl,   // name, type, expr? (initializer)
    Assign,    // lhs = expr
    If,        // expr, body, else_body
    While,     // expr, body
    ForEach,   // name in expr, body
    Return,    // expr?
    Raise,     // name = tag, expr = string payload
    ExprStmt,  // expr
    Assert,    // expr
  };

  Kind kind = Kind::ExprStmt;
  int line = 1;

  std::string name;
  Type type;
  ExprPtr expr;
  ExprPtr lhs;
  std::vector<StmtPtr> body;
  std::vector<StmtPtr> else_body;
};

struct Param {
  std::string name;
  Type type;
};

struct Method {
  std::string name;
  std::vector<Param> params;
  Type return_type = Type::simple(Type::Kind::Void);
  /// Raw text between the docstring delimiters, preserved byte-exactly.
  std::optional<std::string> docstring;
  std::vector<StmtPtr> body;

  // Source spans, used for diagnostics grouping and structured merging.
  int sig_line = 1;
  int end_line = 1;
  std::size_t span_begin = 0;  // byte offset of the docstring or signature
  std::size_t body_begin = 0;  // byte offset of the body's '{'
  std::size_t body_end = 0;    // byte offset one past the body's '}'
};

struct Field {
  std::string name;
  Type type;
  ExprPtr init;  // literal (optionally negated); null when absent
  int line = 1;
};

struct ClassDecl {
  std::string name;
  std::optional<std::string> super_name;
  std::optional<std::string> docstring;
  std::vector<Field> fields;
  std::vector<Method> methods;

  int line = 1;
  std::size_t close_brace = 0;  // byte offset of the class's '}'

  const Method* find_method(const std::string& n, std::size_t arity) const;
};

/// A parsed compilation unit: either a library (classes only) or a test
/// (top-level statements only). An empty file parses as an empty library.
struct Program {
  std::vector<ClassDecl> classes;
  std::vector<StmtPtr> statements;

  bool is_test_form() const { return !statements.empty(); }
};

const char* to_string(BinaryOp op);

}  // namespace iecoregen::minioo
