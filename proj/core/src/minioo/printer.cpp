#include <charconv>
#include <sstream>

#include "iecoregen/minioo/minioo.hpp"

namespace iecoregen::minioo {

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 6;
  }
  return 0;
}

constexpr int kUnaryPrec = 7;

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string format_float(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

class Printer {
 public:
  std::string run(const Program& p) {
    if (p.is_test_form()) {
      for (const auto& s : p.statements) print_stmt(*s, 0);
      return out_.str();
    }
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
      if (i > 0) out_ << "\n";
      print_class(p.classes[i]);
    }
    return out_.str();
  }

 private:
  void print_class(const ClassDecl& cls) {
    if (cls.docstring) out_ << "/**" << *cls.docstring << "*/\n";
    out_ << "class " << cls.name;
    if (cls.super_name) out_ << " extends " << *cls.super_name;
    out_ << " {\n";
    for (const auto& f : cls.fields) {
      out_ << "  var " << f.name << ": " << f.type.to_string();
      if (f.init) out_ << " = " << expr_text(*f.init, 0);
      out_ << ";\n";
    }
    for (const auto& m : cls.methods) {
      out_ << "\n";
      print_method(m);
    }
    out_ << "}\n";
  }

  void print_method(const Method& m) {
    if (m.docstring) out_ << "  /**" << *m.docstring << "*/\n";
    out_ << "  func " << m.name << "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      if (i > 0) out_ << ", ";
      out_ << m.params[i].name << ": " << m.params[i].type.to_string();
    }
    out_ << ")";
    if (m.return_type.kind != Type::Kind::Void)
      out_ << ": " << m.return_type.to_string();
    out_ << " {\n";
    for (const auto& s : m.body) print_stmt(*s, 2);
    out_ << "  }\n";
  }

  void print_stmt(const Stmt& s, int depth) {
    indent(depth);
    switch (s.kind) {
      case Stmt::Kind::VarDecl:
        out_ << "var " << s.name << ": " << s.type.to_string();
        if (s.expr) out_ << " = " << expr_text(*s.expr, 0);
        out_ << ";\n";
        break;
      case Stmt::Kind::Assign:
        out_ << expr_text(*s.lhs, 0) << " = " << expr_text(*s.expr, 0)
             << ";\n";
        break;
      case Stmt::Kind::If: print_if(s, depth); break;
      case Stmt::Kind::While:
        out_ << "while (" << expr_text(*s.expr, 0) << ") {\n";
        for (const auto& b : s.body) print_stmt(*b, depth + 1);
        indent(depth);
        out_ << "}\n";
        break;
      case Stmt::Kind::ForEach:
        out_ << "foreach (" << s.name << " in " << expr_text(*s.expr, 0)
             << ") {\n";
        for (const auto& b : s.body) print_stmt(*b, depth + 1);
        indent(depth);
        out_ << "}\n";
        break;
      case Stmt::Kind::Return:
        out_ << "return";
        if (s.expr) out_ << " " << expr_text(*s.expr, 0);
        out_ << ";\n";
        break;
      case Stmt::Kind::Raise:
        out_ << "raise " << s.name << "(" << expr_text(*s.expr, 0) << ");\n";
        break;
      case Stmt::Kind::ExprStmt:
        out_ << expr_text(*s.expr, 0) << ";\n";
        break;
      case Stmt::Kind::Assert:
        out_ << "assert " << expr_text(*s.expr, 0) << ";\n";
        break;
    }
  }

  void print_if(const Stmt& s, int depth) {
    out_ << "if (" << expr_text(*s.expr, 0) << ") {\n";
    for (const auto& b : s.body) print_stmt(*b, depth + 1);
    indent(depth);
    out_ << "}";
    const Stmt* cur = &s;
    while (!cur->else_body.empty()) {
      if (cur->else_body.size() == 1 &&
          cur->else_body.front()->kind == Stmt::Kind::If) {
        cur = cur->else_body.front().get();
        out_ << " else if (" << expr_text(*cur->expr, 0) << ") {\n";
        for (const auto& b : cur->body) print_stmt(*b, depth + 1);
        indent(depth);
        out_ << "}";
        continue;
      }
      out_ << " else {\n";
      for (const auto& b : cur->else_body) print_stmt(*b, depth + 1);
      indent(depth);
      out_ << "}";
      break;
    }
    out_ << "\n";
  }

  // min_prec: parenthesize when the expression binds looser than the
  // context requires.
  std::string expr_text(const Expr& e, int min_prec) {
    switch (e.kind) {
      case Expr::Kind::IntLit: return std::to_string(e.int_value);
      case Expr::Kind::FloatLit: return format_float(e.float_value);
      case Expr::Kind::BoolLit: return e.bool_value ? "true" : "false";
      case Expr::Kind::StringLit: return escape_string(e.text);
      case Expr::Kind::NullLit: return "null";
      case Expr::Kind::ListLit: {
        std::string s = "[";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i > 0) s += ", ";
          s += expr_text(*e.args[i], 0);
        }
        return s + "]";
      }
      case Expr::Kind::Name: return e.text;
      case Expr::Kind::This: return "this";
      case Expr::Kind::FieldAccess:
        return expr_text(*e.target, kUnaryPrec + 1) + "." + e.text;
      case Expr::Kind::MethodCall: {
        std::string s;
        if (e.target) s = expr_text(*e.target, kUnaryPrec + 1) + ".";
        s += e.text + "(" + args_text(e.args) + ")";
        return s;
      }
      case Expr::Kind::StaticCall:
        return e.text + "." + e.member + "(" + args_text(e.args) + ")";
      case Expr::Kind::New: return "new " + e.text + "()";
      case Expr::Kind::Unary: {
        std::string s = (e.unary_op == UnaryOp::Neg ? "-" : "!") +
                        expr_text(*e.target, kUnaryPrec);
        return min_prec > kUnaryPrec ? "(" + s + ")" : s;
      }
      case Expr::Kind::Binary: {
        int prec = precedence(e.binary_op);
        std::string s = expr_text(*e.target, prec) + " " +
                        to_string(e.binary_op) + " " +
                        expr_text(*e.rhs, prec + 1);
        return prec < min_prec ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

  std::string args_text(const std::vector<ExprPtr>& args) {
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i > 0) s += ", ";
      s += expr_text(*args[i], 0);
    }
    return s;
  }

  void indent(int depth) {
    for (int i = 0; i < depth; ++i) out_ << "  ";
  }

  std::ostringstream out_;
};

}  // namespace

std::string print(const Program& program) { return Printer().run(program); }

}  // namespace iecoregen::minioo
