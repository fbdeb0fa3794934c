#include "iecoregen/model_text.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace iecoregen {

std::string ModelError::to_string() const {
  const char* k = kind == Kind::Syntax          ? "syntax"
                  : kind == Kind::UnresolvedType ? "unresolved type"
                  : kind == Kind::DuplicateName  ? "duplicate name"
                                                 : "invalid model";
  std::string s = std::string(k) + ": " + message;
  if (line > 0) s = "line " + std::to_string(line) + ": " + s;
  return s;
}

namespace {

struct Token {
  enum class Kind { Ident, Int, Float, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
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
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t start = pos_;
      if (c == '-') ++pos_;
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
      while (pos_ < src_.size() && src_[pos_] != '"') {
        char d = src_[pos_];
        if (d == '\n') {
          error_ = "unterminated string";
          break;
        }
        if (d == '\\') {
          ++pos_;
          if (pos_ >= src_.size()) break;
          switch (src_[pos_]) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: error_ = "unknown escape in string";
          }
          ++pos_;
          continue;
        }
        value += d;
        ++pos_;
      }
      if (pos_ < src_.size() && src_[pos_] == '"') ++pos_;
      else if (error_.empty()) error_ = "unterminated string";
      t.kind = Token::Kind::String;
      t.text = std::move(value);
      return t;
    }
    t.kind = Token::Kind::Punct;
    t.text = std::string(1, c);
    ++pos_;
    return t;
  }

  const std::string& error() const { return error_; }

 private:
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::string error_;
};

struct PendingType {
  TypeRef type = TypeRef::void_type();
  std::vector<std::pair<std::string, int>> named;  // names to resolve + line
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { advance(); }

  ModelParseResult parse() {
    ModelParseResult result;
    ModelPackage pkg;
    if (!expect_keyword("package")) return fail(result);
    pkg.name = parse_qualified_name();
    if (failed_) return fail(result);
    if (!expect_punct("{")) return fail(result);
    while (!failed_ && !at_punct("}")) {
      if (at_end()) {
        error("expected '}' to close the package");
        break;
      }
      if (at_keyword("enum")) {
        parse_enum(pkg);
      } else if (at_keyword("class") || at_keyword("abstract")) {
        parse_class(pkg);
      } else {
        error("expected 'class', 'abstract class' or 'enum'");
      }
    }
    if (!failed_) expect_punct("}");
    if (!failed_ && !at_end()) error("trailing content after package");
    if (failed_) return fail(result);

    resolve_named_types(pkg);
    result.package = std::move(pkg);
    result.errors = std::move(errors_);
    return result;
  }

 private:
  ModelParseResult fail(ModelParseResult& result) {
    result.errors = std::move(errors_);
    if (result.errors.empty())
      result.errors.push_back(
          {ModelError::Kind::Syntax, cur_.line, "unparseable document"});
    return std::move(result);
  }

  void parse_enum(ModelPackage& pkg) {
    advance();  // enum
    EnumDef e;
    e.name = expect_ident("enum name");
    if (!expect_punct("{")) return;
    while (!failed_ && !at_punct("}")) {
      e.literals.push_back(expect_ident("enum literal"));
      if (at_punct(",")) advance();
    }
    expect_punct("}");
    if (!failed_) pkg.enums.push_back(std::move(e));
  }

  void parse_class(ModelPackage& pkg) {
    ClassDef c;
    if (at_keyword("abstract")) {
      c.is_abstract = true;
      advance();
    }
    if (!expect_keyword("class")) return;
    c.name = expect_ident("class name");
    if (at_keyword("extends")) {
      advance();
      c.super_class = expect_ident("superclass name");
    }
    if (!expect_punct("{")) return;
    while (!failed_ && !at_punct("}")) {
      if (at_keyword("attr")) {
        parse_attr(c);
      } else if (at_keyword("ref")) {
        parse_ref(c);
      } else if (at_keyword("op")) {
        parse_op(c);
      } else {
        error("expected 'attr', 'ref' or 'op'");
      }
    }
    expect_punct("}");
    if (!failed_) pkg.classes.push_back(std::move(c));
  }

  void parse_attr(ClassDef& c) {
    advance();  // attr
    AttributeDef a;
    a.name = expect_ident("attribute name");
    if (!expect_punct(":")) return;
    if (at_keyword("many")) {
      a.is_many = true;
      advance();
    }
    a.type = parse_type(false);
    if (at_punct("=")) {
      advance();
      a.default_value = parse_literal();
    }
    expect_punct(";");
    if (!failed_) c.attributes.push_back(std::move(a));
  }

  void parse_ref(ClassDef& c) {
    advance();  // ref
    ReferenceDef r;
    r.name = expect_ident("reference name");
    if (!expect_punct(":")) return;
    if (at_keyword("many")) {
      r.is_many = true;
      advance();
    }
    r.target = expect_ident("target class name");
    while (!failed_ && cur_.kind == Token::Kind::Ident) {
      if (at_keyword("containment")) {
        r.is_containment = true;
        advance();
      } else if (at_keyword("opposite")) {
        advance();
        r.opposite = expect_ident("opposite reference name");
      } else {
        error("expected 'containment', 'opposite' or ';'");
      }
    }
    expect_punct(";");
    if (!failed_) c.references.push_back(std::move(r));
  }

  void parse_op(ClassDef& c) {
    advance();  // op
    OperationDef op;
    op.name = expect_ident("operation name");
    if (!expect_punct("(")) return;
    while (!failed_ && !at_punct(")")) {
      Parameter p;
      p.name = expect_ident("parameter name");
      if (!expect_punct(":")) return;
      p.type = parse_type(false);
      op.params.push_back(std::move(p));
      if (at_punct(",")) advance();
      else if (!at_punct(")")) error("expected ',' or ')'");
    }
    expect_punct(")");
    if (at_punct(":")) {
      advance();
      op.return_type = parse_type(true);
    }
    if (at_punct("{")) {
      parse_spec_block(op);
    } else {
      expect_punct(";");
    }
    if (!failed_) c.operations.push_back(std::move(op));
  }

  void parse_spec_block(OperationDef& op) {
    advance();  // {
    MethodSpec spec;
    while (!failed_ && !at_punct("}")) {
      std::string key = expect_ident("spec section keyword");
      if (failed_) return;
      if (key == "summary") spec.summary = expect_string();
      else if (key == "algorithm") spec.algorithm = expect_string();
      else if (key == "output") spec.outputs = expect_string();
      else if (key == "pre") spec.preconditions.push_back(expect_string());
      else if (key == "post") spec.postconditions.push_back(expect_string());
      else if (key == "input") {
        std::string pname = expect_ident("parameter name");
        spec.inputs.emplace_back(std::move(pname), expect_string());
      } else {
        error("unknown spec section '" + key + "'");
        return;
      }
      expect_punct(";");
    }
    expect_punct("}");
    if (!failed_) op.spec = std::move(spec);
  }

  TypeRef parse_type(bool return_position) {
    std::string name = expect_ident("type name");
    if (failed_) return TypeRef::void_type();
    if (name == "Int") return TypeRef::int_type();
    if (name == "Float") return TypeRef::float_type();
    if (name == "Bool") return TypeRef::bool_type();
    if (name == "String") return TypeRef::string_type();
    if (name == "Date") return TypeRef::date_type();
    if (name == "Void") {
      if (!return_position) error("'Void' is only legal as a return type");
      return TypeRef::void_type();
    }
    if (name == "List") {
      if (!expect_punct("<")) return TypeRef::void_type();
      TypeRef elem = parse_type(false);
      expect_punct(">");
      return TypeRef::list_of(std::move(elem));
    }
    // Recorded as a class for now; resolve_named_types retypes enums.
    return TypeRef::class_type(name);
  }

  Literal parse_literal() {
    if (cur_.kind == Token::Kind::Int) {
      std::int64_t v = 0;
      std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(),
                      v);
      advance();
      return Literal::of_int(v);
    }
    if (cur_.kind == Token::Kind::Float) {
      double v = std::stod(cur_.text);
      advance();
      return Literal::of_float(v);
    }
    if (cur_.kind == Token::Kind::String) {
      std::string v = cur_.text;
      advance();
      return Literal::of_string(std::move(v));
    }
    if (cur_.kind == Token::Kind::Ident) {
      if (cur_.text == "true" || cur_.text == "false") {
        bool v = cur_.text == "true";
        advance();
        return Literal::of_bool(v);
      }
      std::string v = cur_.text;
      advance();
      return Literal::enum_literal(std::move(v));
    }
    error("expected a literal");
    return Literal::of_int(0);
  }

  // Attribute types written as bare names parse as Class; retype the ones
  // that name a declared enum.
  void resolve_named_types(ModelPackage& pkg) {
    auto fix = [&](TypeRef& t) {
      if (t.kind() == TypeRef::Kind::Class && pkg.find_enum(t.name()))
        t = TypeRef::enum_type(t.name());
      else if (t.kind() == TypeRef::Kind::List) {
        TypeRef elem = *t.element();
        if (elem.kind() == TypeRef::Kind::Class &&
            pkg.find_enum(elem.name())) {
          t = TypeRef::list_of(TypeRef::enum_type(elem.name()));
        }
      }
    };
    for (auto& c : pkg.classes) {
      for (auto& a : c.attributes) fix(a.type);
      for (auto& op : c.operations) {
        for (auto& p : op.params) fix(p.type);
        fix(op.return_type);
      }
    }
  }

  std::string parse_qualified_name() {
    std::string name = expect_ident("package name");
    while (!failed_ && at_punct(".")) {
      advance();
      name += "." + expect_ident("package name segment");
    }
    return name;
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

  std::string expect_string() {
    if (cur_.kind != Token::Kind::String) {
      error("expected a string literal");
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
    errors_.push_back({ModelError::Kind::Syntax, cur_.line, message});
  }

  void advance() {
    cur_ = lex_.next();
    if (!lex_.error().empty() && !failed_) {
      failed_ = true;
      errors_.push_back({ModelError::Kind::Syntax, cur_.line, lex_.error()});
    }
  }

  Lexer lex_;
  Token cur_;
  bool failed_ = false;
  std::vector<ModelError> errors_;
};

ModelError::Kind violation_error_kind(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnresolvedType: return ModelError::Kind::UnresolvedType;
    case ViolationKind::DuplicateName:
    case ViolationKind::DuplicateFeature:
    case ViolationKind::DuplicateOperation:
    case ViolationKind::DuplicateParameter:
      return ModelError::Kind::DuplicateName;
    default: return ModelError::Kind::Invalid;
  }
}

}  // namespace

ModelParseResult parse_model_unchecked(const std::string& text) {
  return Parser(text).parse();
}

ModelParseResult parse_model(const std::string& text) {
  ModelParseResult result = parse_model_unchecked(text);
  if (!result.package) return result;
  for (const auto& v : validate_model(*result.package)) {
    result.errors.push_back({violation_error_kind(v.kind), 0,
                             v.location + ": " + v.message});
  }
  if (!result.errors.empty()) result.package.reset();
  return result;
}

namespace {

void serialize_spec(std::ostringstream& out, const MethodSpec& spec) {
  out << " {\n";
  auto quoted = [](const std::string& s) {
    return Literal::of_string(s).to_string();
  };
  if (!spec.summary.empty())
    out << "      summary " << quoted(spec.summary) << ";\n";
  if (!spec.algorithm.empty())
    out << "      algorithm " << quoted(spec.algorithm) << ";\n";
  for (const auto& [name, desc] : spec.inputs)
    out << "      input " << name << " " << quoted(desc) << ";\n";
  if (!spec.outputs.empty())
    out << "      output " << quoted(spec.outputs) << ";\n";
  for (const auto& p : spec.preconditions)
    out << "      pre " << quoted(p) << ";\n";
  for (const auto& p : spec.postconditions)
    out << "      post " << quoted(p) << ";\n";
  out << "    }\n";
}

}  // namespace

std::string serialize_model(const ModelPackage& m) {
  std::ostringstream out;
  out << "package " << m.name << " {\n";
  for (const auto& e : m.enums) {
    out << "  enum " << e.name << " {";
    for (std::size_t i = 0; i < e.literals.size(); ++i)
      out << (i == 0 ? " " : ", ") << e.literals[i];
    out << (e.literals.empty() ? "}" : " }") << "\n";
  }
  for (const auto& c : m.classes) {
    out << "  ";
    if (c.is_abstract) out << "abstract ";
    out << "class " << c.name;
    if (c.super_class) out << " extends " << *c.super_class;
    out << " {\n";
    for (const auto& a : c.attributes) {
      out << "    attr " << a.name << ": " << (a.is_many ? "many " : "")
          << a.type.to_string();
      if (a.default_value) out << " = " << a.default_value->to_string();
      out << ";\n";
    }
    for (const auto& r : c.references) {
      out << "    ref " << r.name << ": " << (r.is_many ? "many " : "")
          << r.target;
      if (r.is_containment) out << " containment";
      if (r.opposite) out << " opposite " << *r.opposite;
      out << ";\n";
    }
    for (const auto& op : c.operations) {
      out << "    op " << op.name << "(";
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        if (i > 0) out << ", ";
        out << op.params[i].name << ": " << op.params[i].type.to_string();
      }
      out << ")";
      if (op.return_type.kind() != TypeRef::Kind::Void)
        out << ": " << op.return_type.to_string();
      if (op.spec) serialize_spec(out, *op.spec);
      else out << ";\n";
    }
    out << "  }\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace iecoregen
