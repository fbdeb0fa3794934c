#include <cctype>
#include <charconv>

#include "iecoregen/minioo/minioo.hpp"

namespace iecoregen::minioo {

std::string Type::to_string() const {
  switch (kind) {
    case Kind::Int: return "Int";
    case Kind::Float: return "Float";
    case Kind::Bool: return "Bool";
    case Kind::String: return "String";
    case Kind::Date: return "Date";
    case Kind::Void: return "Void";
    case Kind::Class: return class_name;
    case Kind::List: return "List<" + element->to_string() + ">";
    case Kind::Null: return "null";
    case Kind::Unknown: return "?";
  }
  return "?";
}

const Method* ClassDecl::find_method(const std::string& n,
                                     std::size_t arity) const {
  for (const auto& m : methods)
    if (m.name == n && m.params.size() == arity) return &m;
  return nullptr;
}

namespace {

struct Token {
  enum class Kind { Ident, Int, Float, String, Punct, Docstring, End };
  Kind kind = Kind::End;
  std::string text;   // ident name, punct spelling, decoded string, raw doc
  int line = 1;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.offset = pos_;
    if (!error_.empty() || pos_ >= src_.size()) return t;
    char c = src_[pos_];

    if (c == '/' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '*' &&
        src_[pos_ + 2] == '*') {
      std::size_t close = src_.find("*/", pos_ + 2);
      if (close == std::string::npos) {
        fail("unterminated docstring");
        return t;
      }
      t.kind = Token::Kind::Docstring;
      t.text = close > pos_ + 3 ? src_.substr(pos_ + 3, close - pos_ - 3)
                                : std::string();
      for (std::size_t i = pos_; i < close; ++i)
        if (src_[i] == '\n') ++line_;
      pos_ = close + 2;
      return t;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      t.kind = Token::Kind::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      bool is_float = false;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
          std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        is_float = true;
        ++pos_;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t mark = pos_++;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
          ++pos_;
        if (pos_ < src_.size() &&
            std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          is_float = true;
          while (pos_ < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        } else {
          pos_ = mark;
        }
      }
      t.kind = is_float ? Token::Kind::Float : Token::Kind::Int;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }

    if (c == '"') {
      ++pos_;
      std::string value;
      while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
        char d = src_[pos_];
        if (d == '\\') {
          ++pos_;
          if (pos_ >= src_.size()) break;
          switch (src_[pos_]) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: fail("unknown string escape"); return t;
          }
          ++pos_;
          continue;
        }
        value += d;
        ++pos_;
      }
      if (pos_ >= src_.size() || src_[pos_] != '"') {
        fail("unterminated string literal");
        return t;
      }
      ++pos_;
      t.kind = Token::Kind::String;
      t.text = std::move(value);
      return t;
    }

    // Multi-character operators.
    static const char* two_char[] = {"==", "!=", "<=", ">=", "&&", "||"};
    if (pos_ + 1 < src_.size()) {
      std::string pair = src_.substr(pos_, 2);
      for (const char* op : two_char) {
        if (pair == op) {
          t.kind = Token::Kind::Punct;
          t.text = pair;
          pos_ += 2;
          return t;
        }
      }
    }
    t.kind = Token::Kind::Punct;
    t.text = std::string(1, c);
    ++pos_;
    return t;
  }

  const std::string& error() const { return error_; }
  int error_line() const { return line_; }

 private:
  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*' &&
                 (pos_ + 2 >= src_.size() || src_[pos_ + 2] != '*')) {
        // Plain block comment (not a docstring).
        std::size_t close = src_.find("*/", pos_ + 2);
        if (close == std::string::npos) {
          fail("unterminated comment");
          return;
        }
        for (std::size_t i = pos_; i < close; ++i)
          if (src_[i] == '\n') ++line_;
        pos_ = close + 2;
      } else {
        break;
      }
    }
  }

  void fail(const char* message) {
    if (error_.empty()) error_ = message;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::string error_;
};

class Parser {
 public:
  Parser(const std::string& src, const std::string& path)
      : src_(src), path_(path), lex_(src) {
    advance();
  }

  ParseResult run() {
    ParseResult result;
    auto program = std::make_shared<Program>();

    // A pending docstring may precede the very first class.
    if (at_end() && doc_pending_ == std::nullopt && !failed_) {
      result.program = std::move(program);  // empty file: empty library
      return result;
    }

    if (at_keyword("class") || cur_.kind == Token::Kind::Docstring ||
        doc_pending_) {
      while (!failed_ && !at_end()) parse_class(*program);
    } else {
      while (!failed_ && !at_end())
        program->statements.push_back(parse_statement());
    }

    if (failed_) {
      result.diagnostics = std::move(diagnostics_);
      return result;
    }
    result.program = std::move(program);
    return result;
  }

 private:
  void parse_class(Program& program) {
    ClassDecl cls;
    cls.docstring = take_docstring();
    cls.line = cur_.line;
    if (!expect_keyword("class")) return;
    cls.name = expect_ident("class name");
    if (at_keyword("extends")) {
      advance();
      cls.super_name = expect_ident("superclass name");
    }
    if (!expect_punct("{")) return;
    while (!failed_ && !at_punct("}")) {
      if (at_end()) {
        error("expected '}' to close class " + cls.name);
        return;
      }
      std::optional<std::string> doc = take_docstring();
      if (at_keyword("var")) {
        if (doc) {
          // Field docstrings are not part of the language; drop it.
          doc.reset();
        }
        parse_field(cls);
      } else if (at_keyword("func")) {
        parse_method(cls, std::move(doc));
      } else {
        error("expected 'var' or 'func' in class body");
        return;
      }
    }
    cls.close_brace = cur_.offset;
    expect_punct("}");
    if (!failed_) program.classes.push_back(std::move(cls));
  }

  void parse_field(ClassDecl& cls) {
    Field f;
    f.line = cur_.line;
    advance();  // var
    f.name = expect_ident("field name");
    if (!expect_punct(":")) return;
    f.type = parse_type();
    if (at_punct("=")) {
      advance();
      f.init = parse_field_initializer();
    }
    expect_punct(";");
    if (!failed_) cls.fields.push_back(std::move(f));
  }

  // Field initializers are literals, optionally negated.
  ExprPtr parse_field_initializer() {
    if (at_punct("-")) {
      auto e = make_expr(Expr::Kind::Unary);
      e->unary_op = UnaryOp::Neg;
      advance();
      e->target = parse_field_initializer();
      return e;
    }
    if (cur_.kind == Token::Kind::Int || cur_.kind == Token::Kind::Float ||
        cur_.kind == Token::Kind::String || at_keyword("true") ||
        at_keyword("false") || at_keyword("null")) {
      return parse_primary();
    }
    if (at_punct("[")) {
      error("field initializers must be literals; lists default to empty");
      return make_expr(Expr::Kind::NullLit);
    }
    error("field initializers must be literals");
    return make_expr(Expr::Kind::NullLit);
  }

  void parse_method(ClassDecl& cls, std::optional<std::string> doc) {
    Method m;
    m.docstring = std::move(doc);
    m.span_begin = m.docstring ? doc_offset_ : cur_.offset;
    m.sig_line = cur_.line;
    if (!expect_keyword("func")) return;
    m.name = expect_ident("method name");
    if (!expect_punct("(")) return;
    while (!failed_ && !at_punct(")")) {
      Param p;
      p.name = expect_ident("parameter name");
      if (!expect_punct(":")) return;
      p.type = parse_type();
      m.params.push_back(std::move(p));
      if (at_punct(",")) advance();
      else if (!at_punct(")")) {
        error("expected ',' or ')'");
        return;
      }
    }
    expect_punct(")");
    if (at_punct(":")) {
      advance();
      m.return_type = parse_return_type();
    }
    m.body_begin = cur_.offset;
    if (!at_punct("{")) {
      error("expected method body");
      return;
    }
    m.body = parse_block();
    m.end_line = prev_line_;
    m.body_end = prev_end_offset_;
    if (!failed_) cls.methods.push_back(std::move(m));
  }

  std::vector<StmtPtr> parse_block() {
    std::vector<StmtPtr> body;
    if (!expect_punct("{")) return body;
    while (!failed_ && !at_punct("}")) {
      if (at_end()) {
        error("expected '}'");
        return body;
      }
      body.push_back(parse_statement());
    }
    expect_punct("}");
    return body;
  }

  StmtPtr parse_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->line = cur_.line;
    if (at_keyword("var")) {
      advance();
      stmt->kind = Stmt::Kind::VarDecl;
      stmt->name = expect_ident("variable name");
      if (!expect_punct(":")) return stmt;
      stmt->type = parse_type();
      if (at_punct("=")) {
        advance();
        stmt->expr = parse_expr();
      }
      expect_punct(";");
      return stmt;
    }
    if (at_keyword("if")) return parse_if();
    if (at_keyword("while")) {
      advance();
      stmt->kind = Stmt::Kind::While;
      if (!expect_punct("(")) return stmt;
      stmt->expr = parse_expr();
      if (!expect_punct(")")) return stmt;
      stmt->body = parse_block();
      return stmt;
    }
    if (at_keyword("foreach")) {
      advance();
      stmt->kind = Stmt::Kind::ForEach;
      if (!expect_punct("(")) return stmt;
      stmt->name = expect_ident("loop variable");
      if (!expect_keyword("in")) return stmt;
      stmt->expr = parse_expr();
      if (!expect_punct(")")) return stmt;
      stmt->body = parse_block();
      return stmt;
    }
    if (at_keyword("return")) {
      advance();
      stmt->kind = Stmt::Kind::Return;
      if (!at_punct(";")) stmt->expr = parse_expr();
      expect_punct(";");
      return stmt;
    }
    if (at_keyword("raise")) {
      advance();
      stmt->kind = Stmt::Kind::Raise;
      stmt->name = expect_ident("raise tag");
      if (!expect_punct("(")) return stmt;
      stmt->expr = parse_expr();
      if (!expect_punct(")")) return stmt;
      expect_punct(";");
      return stmt;
    }
    if (at_keyword("assert")) {
      advance();
      stmt->kind = Stmt::Kind::Assert;
      stmt->expr = parse_expr();
      expect_punct(";");
      return stmt;
    }

    ExprPtr e = parse_expr();
    if (at_punct("=")) {
      advance();
      stmt->kind = Stmt::Kind::Assign;
      stmt->lhs = std::move(e);
      if (stmt->lhs->kind != Expr::Kind::Name &&
          stmt->lhs->kind != Expr::Kind::FieldAccess) {
        error("left side of '=' must be a variable or a field");
        return stmt;
      }
      stmt->expr = parse_expr();
      expect_punct(";");
      return stmt;
    }
    stmt->kind = Stmt::Kind::ExprStmt;
    stmt->expr = std::move(e);
    expect_punct(";");
    return stmt;
  }

  StmtPtr parse_if() {
    auto stmt = std::make_unique<Stmt>();
    stmt->line = cur_.line;
    stmt->kind = Stmt::Kind::If;
    advance();  // if
    if (!expect_punct("(")) return stmt;
    stmt->expr = parse_expr();
    if (!expect_punct(")")) return stmt;
    stmt->body = parse_block();
    if (at_keyword("else")) {
      advance();
      if (at_keyword("if")) {
        stmt->else_body.push_back(parse_if());
      } else {
        stmt->else_body = parse_block();
      }
    }
    return stmt;
  }

  Type parse_return_type() {
    if (at_keyword("Void")) {
      advance();
      return Type::simple(Type::Kind::Void);
    }
    return parse_type();
  }

  Type parse_type() {
    std::string name = expect_ident("type name");
    if (failed_) return Type::simple(Type::Kind::Void);
    if (name == "Int") return Type::simple(Type::Kind::Int);
    if (name == "Float") return Type::simple(Type::Kind::Float);
    if (name == "Bool") return Type::simple(Type::Kind::Bool);
    if (name == "String") return Type::simple(Type::Kind::String);
    if (name == "Date") return Type::simple(Type::Kind::Date);
    if (name == "Void") {
      error("'Void' is only legal as a return type");
      return Type::simple(Type::Kind::Void);
    }
    if (name == "List") {
      if (!expect_punct("<")) return Type::simple(Type::Kind::Void);
      Type elem = parse_type();
      expect_punct(">");
      return Type::list_of(std::move(elem));
    }
    return Type::of_class(std::move(name));
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (!failed_ && at_punct("||")) {
      lhs = binary(BinaryOp::Or, std::move(lhs), (advance(), parse_and()));
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_equality();
    while (!failed_ && at_punct("&&")) {
      lhs = binary(BinaryOp::And, std::move(lhs), (advance(), parse_equality()));
    }
    return lhs;
  }

  ExprPtr parse_equality() {
    ExprPtr lhs = parse_relational();
    while (!failed_ && (at_punct("==") || at_punct("!="))) {
      BinaryOp op = at_punct("==") ? BinaryOp::Eq : BinaryOp::Ne;
      advance();
      lhs = binary(op, std::move(lhs), parse_relational());
    }
    return lhs;
  }

  ExprPtr parse_relational() {
    ExprPtr lhs = parse_additive();
    while (!failed_ && (at_punct("<") || at_punct("<=") || at_punct(">") ||
                        at_punct(">="))) {
      BinaryOp op = at_punct("<")    ? BinaryOp::Lt
                    : at_punct("<=") ? BinaryOp::Le
                    : at_punct(">")  ? BinaryOp::Gt
                                     : BinaryOp::Ge;
      advance();
      lhs = binary(op, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (!failed_ && (at_punct("+") || at_punct("-"))) {
      BinaryOp op = at_punct("+") ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      lhs = binary(op, std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (!failed_ && (at_punct("*") || at_punct("/") || at_punct("%"))) {
      BinaryOp op = at_punct("*")   ? BinaryOp::Mul
                    : at_punct("/") ? BinaryOp::Div
                                    : BinaryOp::Mod;
      advance();
      lhs = binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at_punct("-") || at_punct("!")) {
      auto e = make_expr(Expr::Kind::Unary);
      e->unary_op = at_punct("-") ? UnaryOp::Neg : UnaryOp::Not;
      advance();
      e->target = parse_unary();
      return e;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (!failed_ && at_punct(".")) {
      advance();
      std::string member = expect_ident("member name");
      if (at_punct("(")) {
        auto call = make_expr(e->kind == Expr::Kind::Name &&
                                      (e->text == "Math" || e->text == "Date")
                                  ? Expr::Kind::StaticCall
                                  : Expr::Kind::MethodCall);
        if (call->kind == Expr::Kind::StaticCall) {
          call->text = e->text;
          call->member = std::move(member);
        } else {
          call->target = std::move(e);
          call->text = std::move(member);
        }
        call->args = parse_args();
        e = std::move(call);
      } else {
        auto access = make_expr(Expr::Kind::FieldAccess);
        access->target = std::move(e);
        access->text = std::move(member);
        e = std::move(access);
      }
    }
    return e;
  }

  std::vector<ExprPtr> parse_args() {
    std::vector<ExprPtr> args;
    if (!expect_punct("(")) return args;
    while (!failed_ && !at_punct(")")) {
      args.push_back(parse_expr());
      if (at_punct(",")) advance();
      else if (!at_punct(")")) {
        error("expected ',' or ')'");
        return args;
      }
    }
    expect_punct(")");
    return args;
  }

  ExprPtr parse_primary() {
    if (cur_.kind == Token::Kind::Int) {
      auto e = make_expr(Expr::Kind::IntLit);
      std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(),
                      e->int_value);
      advance();
      return e;
    }
    if (cur_.kind == Token::Kind::Float) {
      auto e = make_expr(Expr::Kind::FloatLit);
      e->float_value = std::stod(cur_.text);
      advance();
      return e;
    }
    if (cur_.kind == Token::Kind::String) {
      auto e = make_expr(Expr::Kind::StringLit);
      e->text = cur_.text;
      advance();
      return e;
    }
    if (at_keyword("true") || at_keyword("false")) {
      auto e = make_expr(Expr::Kind::BoolLit);
      e->bool_value = cur_.text == "true";
      advance();
      return e;
    }
    if (at_keyword("null")) {
      auto e = make_expr(Expr::Kind::NullLit);
      advance();
      return e;
    }
    if (at_keyword("this")) {
      auto e = make_expr(Expr::Kind::This);
      advance();
      return e;
    }
    if (at_keyword("new")) {
      auto e = make_expr(Expr::Kind::New);
      advance();
      e->text = expect_ident("class name");
      if (expect_punct("(")) {
        if (!at_punct(")")) error("constructors take no arguments");
        expect_punct(")");
      }
      return e;
    }
    if (at_punct("[")) {
      auto e = make_expr(Expr::Kind::ListLit);
      advance();
      while (!failed_ && !at_punct("]")) {
        e->args.push_back(parse_expr());
        if (at_punct(",")) advance();
        else if (!at_punct("]")) {
          error("expected ',' or ']'");
          return e;
        }
      }
      expect_punct("]");
      return e;
    }
    if (at_punct("(")) {
      advance();
      ExprPtr e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (cur_.kind == Token::Kind::Ident) {
      std::string name = cur_.text;
      auto e = make_expr(Expr::Kind::Name);
      e->text = name;
      advance();
      if (at_punct("(")) {
        // Implicit-this call; the checker resolves or rejects it.
        auto call = make_expr(Expr::Kind::MethodCall);
        call->text = std::move(e->text);
        call->line = e->line;
        call->args = parse_args();
        return call;
      }
      return e;
    }
    error("expected an expression");
    return make_expr(Expr::Kind::NullLit);
  }

  ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::Binary;
    e->line = lhs ? lhs->line : cur_.line;
    e->binary_op = op;
    e->target = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
  }

  ExprPtr make_expr(Expr::Kind kind) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->line = cur_.line;
    return e;
  }

  std::optional<std::string> take_docstring() {
    if (cur_.kind != Token::Kind::Docstring) return doc_pending_take();
    doc_pending_ = cur_.text;
    doc_offset_ = cur_.offset;
    advance();
    while (cur_.kind == Token::Kind::Docstring) {
      // Only the docstring immediately preceding a declaration attaches.
      doc_pending_ = cur_.text;
      doc_offset_ = cur_.offset;
      advance();
    }
    return doc_pending_take();
  }

  std::optional<std::string> doc_pending_take() {
    auto doc = std::move(doc_pending_);
    doc_pending_.reset();
    return doc;
  }

  bool at_end() const { return cur_.kind == Token::Kind::End; }
  bool at_punct(const char* p) const {
    return cur_.kind == Token::Kind::Punct && cur_.text == p;
  }
  bool at_keyword(const char* k) const {
    return cur_.kind == Token::Kind::Ident && cur_.text == k;
  }

  std::string expect_ident(const char* what) {
    if (cur_.kind != Token::Kind::Ident) {
      error(std::string("expected ") + what);
      return "";
    }
    std::string t = cur_.text;
    advance();
    return t;
  }

  bool expect_punct(const char* p) {
    if (!at_punct(p)) {
      error(std::string("expected '") + p + "'");
      return false;
    }
    advance();
    return true;
  }

  bool expect_keyword(const char* k) {
    if (!at_keyword(k)) {
      error(std::string("expected '") + k + "'");
      return false;
    }
    advance();
    return true;
  }

  void error(const std::string& message) {
    if (failed_) return;
    failed_ = true;
    Diagnostic d;
    d.path = path_;
    d.kind = DiagnosticKind::Syntax;
    d.line = cur_.line;
    d.source_line = line_at(src_, cur_.line);
    d.message = message;
    diagnostics_.push_back(std::move(d));
  }

  void advance() {
    prev_line_ = cur_.line;
    prev_end_offset_ = cur_.offset + punct_width();
    cur_ = lex_.next();
    if (!lex_.error().empty() && !failed_) {
      failed_ = true;
      Diagnostic d;
      d.path = path_;
      d.kind = DiagnosticKind::Syntax;
      d.line = lex_.error_line();
      d.source_line = line_at(src_, d.line);
      d.message = lex_.error();
      diagnostics_.push_back(std::move(d));
    }
  }

  std::size_t punct_width() const {
    return cur_.kind == Token::Kind::Punct ? cur_.text.size() : 0;
  }

  const std::string& src_;
  const std::string& path_;
  Lexer lex_;
  Token cur_;
  bool failed_ = false;
  int prev_line_ = 1;
  std::size_t prev_end_offset_ = 0;
  std::optional<std::string> doc_pending_;
  std::size_t doc_offset_ = 0;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

ParseResult parse(const std::string& text, const std::string& path) {
  return Parser(text, path).run();
}

std::string trap_raise_statement() {
  return "raise Unsupported(\"not implemented\");";
}

bool same_token_stream(const std::string& a, const std::string& b) {
  Lexer la(a), lb(b);
  for (;;) {
    Token ta = la.next();
    Token tb = lb.next();
    while (ta.kind == Token::Kind::Docstring) ta = la.next();
    while (tb.kind == Token::Kind::Docstring) tb = lb.next();
    if (!la.error().empty() || !lb.error().empty())
      return la.error() == lb.error() && ta.text == tb.text;
    if (ta.kind != tb.kind || ta.text != tb.text) return false;
    if (ta.kind == Token::Kind::End) return true;
  }
}

}  // namespace iecoregen::minioo
