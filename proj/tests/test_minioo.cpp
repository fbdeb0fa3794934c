#include "iecoregen/minioo/minioo.hpp"

#include <random>

#include "test_util.hpp"

using namespace iecoregen;
using namespace iecoregen::minioo;

namespace {

SourceUnit unit(const std::string& name, const std::string& text) {
  return {"src/" + name + ".mo", name, text};
}

TestOutcome run_test(const std::vector<SourceUnit>& units,
                     const std::string& test_text,
                     std::int64_t budget = kDefaultStepBudget) {
  TestProgram t{"t", test_text};
  return interpret(units, t, budget);
}

const char* kCounterClass = R"(class Counter {
  var count: Int;

  func getCount(): Int {
    return this.count;
  }

  func increment(): Void {
    this.count = this.count + 1;
  }

  func pending(): Int {
    raise Unsupported("not implemented");
  }
}
)";

}  // namespace

TEST_CASE("minioo_parse handles the basic shapes") {
  SUBCASE("empty class") {
    ParseResult r = parse("class A { }", "a.mo");
    REQUIRE(r.ok());
    REQUIRE(r.program->classes.size() == 1);
    CHECK(r.program->classes.front().name == "A");
    CHECK(r.program->classes.front().fields.empty());
    CHECK(r.program->classes.front().methods.empty());
  }
  SUBCASE("docstring attaches verbatim") {
    ParseResult r = parse(
        "class A {\n  /** keep\n   * this exact text */\n"
        "  func f(): Int {\n    return 1;\n  }\n}\n",
        "a.mo");
    REQUIRE(r.ok());
    REQUIRE(r.program->classes.front().methods.size() == 1);
    const Method& m = r.program->classes.front().methods.front();
    REQUIRE(m.docstring.has_value());
    CHECK(*m.docstring == " keep\n   * this exact text ");
  }
  SUBCASE("stray brace is a syntax diagnostic") {
    ParseResult r = parse("class A { } }", "a.mo");
    CHECK(!r.ok());
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics.front().kind == DiagnosticKind::Syntax);
    CHECK(r.diagnostics.front().path == "a.mo");
  }
  SUBCASE("empty file is an empty library") {
    ParseResult r = parse("", "a.mo");
    REQUIRE(r.ok());
    CHECK(r.program->classes.empty());
    CHECK(r.program->statements.empty());
  }
  SUBCASE("statement form") {
    ParseResult r = parse("var x: Int = 1;\nassert x == 1;\n", "t.mot");
    REQUIRE(r.ok());
    CHECK(r.program->is_test_form());
    CHECK(r.program->statements.size() == 2);
  }
  SUBCASE("line comments are skipped") {
    ParseResult r = parse("// leading\nclass A { // trailing\n}\n", "a.mo");
    REQUIRE(r.ok());
    CHECK(r.program->classes.size() == 1);
  }
}

TEST_CASE("printer output is stable and round-trips") {
  SUBCASE("empty class prints the documented form") {
    ParseResult r = parse("class A { }", "a.mo");
    REQUIRE(r.ok());
    CHECK(print(*r.program) == "class A {\n}\n");
  }
  SUBCASE("docstrings round-trip byte-exactly") {
    std::string text =
        "class A {\n\n  /** exact\n   * docstring */\n"
        "  func f(): Int {\n    return 1;\n  }\n}\n";
    ParseResult r = parse(text, "a.mo");
    REQUIRE(r.ok());
    CHECK(print(*r.program) == text);
  }
  SUBCASE("print-parse is a fixpoint after one pass") {
    std::string messy =
        "class A { var x: Int=3;\n"
        "  func f(a: Int, b: Float): Float { if(a>1){return b;} else { "
        "return 0.5*b+1.0; } }\n"
        "  func g(): Void { var xs: List<Int> = [1,2,3]; foreach (v in xs) "
        "{ this.x = this.x + v; } while (this.x > 9) { this.x = this.x - 2; "
        "} }\n}\n";
    ParseResult first = parse(messy, "a.mo");
    REQUIRE(first.ok());
    std::string once = print(*first.program);
    ParseResult second = parse(once, "a.mo");
    REQUIRE(second.ok());
    CHECK(print(*second.program) == once);
  }
}

TEST_CASE("checker resolves names and types across units") {
  SUBCASE("undeclared method call") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  func f(): Int {\n    return this.getX();\n"
                  "  }\n}\n")};
    CompileResult r = check_units(units);
    CHECK(!r.ok);
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics.front().kind == DiagnosticKind::UnresolvedSymbol);
    CHECK(r.diagnostics.front().message.find("getX") != std::string::npos);
  }
  SUBCASE("string into int field") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  var x: Int;\n  func f(): Void {\n"
                  "    this.x = \"oops\";\n  }\n}\n")};
    CompileResult r = check_units(units);
    CHECK(!r.ok);
    CHECK(r.diagnostics.front().kind == DiagnosticKind::TypeMismatch);
  }
  SUBCASE("diagnostics carry the line and its source text") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  func f(): Int {\n    return this.nope();\n"
                  "  }\n}\n")};
    CompileResult r = check_units(units);
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics.front().line == 3);
    CHECK(r.diagnostics.front().source_line == "    return this.nope();");
    CHECK(line_at(units.front().text, r.diagnostics.front().line) ==
          r.diagnostics.front().source_line);
  }
  SUBCASE("cross-unit references resolve") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  var b: B;\n  func f(): Int {\n"
                  "    return this.b.value();\n  }\n}\n"),
        unit("B", "class B {\n  func value(): Int {\n    return 7;\n  }\n}\n")};
    CHECK(check_units(units).ok);
  }
  SUBCASE("diagnostics are ordered by path then line") {
    auto units = std::vector<SourceUnit>{
        unit("B", "class B {\n  func f(): Int {\n    return this.miss1();\n"
                  "  }\n  func g(): Int {\n    return this.miss2();\n  }\n}\n"),
        unit("A", "class A {\n  func f(): Int {\n    return this.miss3();\n"
                  "  }\n}\n")};
    CompileResult r = check_units(units);
    REQUIRE(r.diagnostics.size() == 3);
    CHECK(r.diagnostics[0].path == "src/A.mo");
    CHECK(r.diagnostics[1].path == "src/B.mo");
    CHECK(r.diagnostics[1].line < r.diagnostics[2].line);
  }
  SUBCASE("bare field names get an access hint") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  var x: Int;\n  func f(): Int {\n"
                  "    return x;\n  }\n}\n")};
    CompileResult r = check_units(units);
    CHECK(!r.ok);
    CHECK(r.diagnostics.front().message.find("this.x") != std::string::npos);
  }
  SUBCASE("free function calls are rejected in tests") {
    TestProgram t{"t", "compute();\n"};
    CompileResult r = check_units({}, &t);
    CHECK(!r.ok);
    CHECK(r.diagnostics.front().kind == DiagnosticKind::UnresolvedSymbol);
  }
  SUBCASE("subclass widens to superclass") {
    auto units = std::vector<SourceUnit>{
        unit("P", "class P {\n  var n: Int;\n}\n"),
        unit("C", "class C extends P {\n  func self(): P {\n"
                  "    return this;\n  }\n}\n")};
    CHECK(check_units(units).ok);
  }
  SUBCASE("overrides must keep the signature") {
    auto units = std::vector<SourceUnit>{
        unit("P", "class P {\n  func f(x: Int): Int {\n    return x;\n  }\n}\n"),
        unit("C", "class C extends P {\n  func f(x: Float): Int {\n"
                  "    return 1;\n  }\n}\n")};
    CompileResult r = check_units(units);
    CHECK(!r.ok);
    CHECK(r.diagnostics.front().kind == DiagnosticKind::TypeMismatch);
  }
  SUBCASE("foreach needs a list") {
    TestProgram t{"t", "var x: Int = 3;\nforeach (v in x) { assert true; }\n"};
    CompileResult r = check_units({}, &t);
    CHECK(!r.ok);
    CHECK(r.diagnostics.front().kind == DiagnosticKind::TypeMismatch);
  }
  SUBCASE("modulo needs ints, plus rejects strings with a concat hint") {
    TestProgram t1{"t", "var x: Float = 1.5;\nvar y: Int = 2 % 3;\n"
                        "var z: Float = x % 2.0;\n"};
    CompileResult r1 = check_units({}, &t1);
    CHECK(!r1.ok);
    TestProgram t2{"t", "var s: String = \"a\" + \"b\";\n"};
    CompileResult r2 = check_units({}, &t2);
    CHECK(!r2.ok);
    CHECK(r2.diagnostics.front().message.find("concat") != std::string::npos);
  }
  SUBCASE("null comparisons typecheck for class values only") {
    auto units = std::vector<SourceUnit>{unit("A", "class A {\n}\n")};
    TestProgram ok{"t", "var a: A = null;\nassert a == null;\n"};
    CHECK(check_units(units, &ok).ok);
    TestProgram bad{"t", "var x: Int = 1;\nassert x == null;\n"};
    CHECK(!check_units(units, &bad).ok);
  }
  SUBCASE("library units with statements are rejected") {
    auto units = std::vector<SourceUnit>{unit("A", "var x: Int = 1;\n")};
    CompileResult r = check_units(units);
    CHECK(!r.ok);
    CHECK(r.diagnostics.front().kind == DiagnosticKind::Other);
  }
  SUBCASE("using a variable of an undeclared class type stays graceful") {
    TestProgram t{"t",
                  "var b: Book = new Book();\n"
                  "b.field = 1;\n"
                  "var x: Int = b.read();\n"};
    CompileResult r = check_units({}, &t);
    CHECK(!r.ok);  // and in particular, no crash
    CHECK(r.diagnostics.front().kind == DiagnosticKind::UnresolvedSymbol);
  }
}

TEST_CASE("interpreter semantics are deterministic and total") {
  SUBCASE("arithmetic basics") {
    CHECK(run_test({}, "assert 2 + 3 == 5;\n").passed);
    CHECK(run_test({}, "var x: Int = 7 / 2;\nassert x == 3;\n").passed);
    CHECK(run_test({}, "assert -7 / 2 == -3;\n").passed);
    CHECK(run_test({}, "assert 7 % 3 == 1;\n").passed);
    CHECK(run_test({}, "assert 1.5 + 2 == 3.5;\n").passed);
    CHECK(run_test({}, "assert 1 / 4 == 0;\nassert 1.0 / 4.0 == 0.25;\n")
              .passed);
  }
  SUBCASE("division by zero fails the test") {
    TestOutcome o = run_test({}, "var x: Int = 1 / 0;\n");
    CHECK(!o.passed);
    CHECK(o.failure_message.find("division by zero") != std::string::npos);
  }
  SUBCASE("assert failure names the line") {
    TestOutcome o = run_test({}, "var x: Int = 1;\nassert x == 2;\n");
    CHECK(!o.passed);
    CHECK(o.failure_message.find("line 2") != std::string::npos);
    CHECK(o.failure_message.find("assert x == 2;") != std::string::npos);
  }
  SUBCASE("trap raise reports an unsupported operation") {
    auto units = std::vector<SourceUnit>{unit("Counter", kCounterClass)};
    TestOutcome o = run_test(units,
                             "var c: Counter = new Counter();\n"
                             "var p: Int = c.pending();\n");
    CHECK(!o.passed);
    CHECK(o.failure_message.find("unsupported operation") !=
          std::string::npos);
  }
  SUBCASE("step budget bounds infinite loops") {
    TestOutcome o =
        run_test({}, "var x: Int = 0;\nwhile (true) {\n  x = x + 1;\n}\n",
                 10'000);
    CHECK(!o.passed);
    CHECK(o.failure_message.find("step budget exceeded") != std::string::npos);
  }
  SUBCASE("objects, fields and dispatch") {
    auto units = std::vector<SourceUnit>{unit("Counter", kCounterClass)};
    TestOutcome o = run_test(units,
                             "var c: Counter = new Counter();\n"
                             "assert c.getCount() == 0;\n"
                             "c.increment();\nc.increment();\n"
                             "assert c.getCount() == 2;\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("inherited fields and overriding dispatch") {
    auto units = std::vector<SourceUnit>{
        unit("P", "class P {\n  var n: Int;\n  func tag(): Int {\n"
                  "    return 1;\n  }\n  func readN(): Int {\n"
                  "    return this.n;\n  }\n}\n"),
        unit("C", "class C extends P {\n  func tag(): Int {\n"
                  "    return 2;\n  }\n}\n")};
    TestOutcome o = run_test(units,
                             "var c: C = new C();\n"
                             "var p: P = c;\n"
                             "assert p.tag() == 2;\n"
                             "assert c.readN() == 0;\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("lists are shared references with bounds checks") {
    TestOutcome shared = run_test({},
                                  "var a: List<Int> = [1, 2];\n"
                                  "var b: List<Int> = a;\n"
                                  "b.add(3);\n"
                                  "assert a.size() == 3;\n"
                                  "assert a.get(2) == 3;\n"
                                  "a.remove(0);\n"
                                  "assert b.get(0) == 2;\n");
    CHECK_MESSAGE(shared.passed, shared.failure_message);
    TestOutcome bounds = run_test({}, "var a: List<Int> = [1];\n"
                                      "var x: Int = a.get(5);\n");
    CHECK(!bounds.passed);
    CHECK(bounds.failure_message.find("out of bounds") != std::string::npos);
  }
  SUBCASE("foreach iterates a snapshot") {
    TestOutcome o = run_test({},
                             "var a: List<Int> = [1, 2, 3];\n"
                             "var sum: Int = 0;\n"
                             "foreach (v in a) {\n"
                             "  sum = sum + v;\n"
                             "  a.add(v);\n"
                             "}\n"
                             "assert sum == 6;\n"
                             "assert a.size() == 6;\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("date arithmetic in whole days") {
    TestOutcome o = run_test(
        {},
        "var hire: Date = Date.ymd(2010, 1, 15);\n"
        "var now: Date = Date.ymd(2020, 1, 15);\n"
        "assert hire.daysBetween(now) == 3652;\n"
        "assert now.daysBetween(hire) == -3652;\n"
        "assert hire.addDays(3652) == now;\n"
        "assert now.year() == 2020;\n"
        "assert Date.of(0).year() == 1970;\n"
        "assert hire < now;\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("string builtins") {
    TestOutcome o = run_test(
        {},
        "var s: String = \"air\".concat(\"line\");\n"
        "assert s == \"airline\";\n"
        "assert s.length() == 7;\n"
        "assert s.contains(\"rli\");\n"
        "assert !s.contains(\"zzz\");\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("math builtins") {
    TestOutcome o = run_test(
        {},
        "assert Math.min(3, 5) == 3;\n"
        "assert Math.max(3, 5) == 5;\n"
        "assert Math.abs(-4) == 4;\n"
        "assert Math.min(1.5, 2) == 1.5;\n"
        "assert Math.abs(-1.5) == 1.5;\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("null field access fails the test") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  var other: A;\n  func poke(): Int {\n"
                  "    return this.other.poke();\n  }\n}\n")};
    TestOutcome o = run_test(units, "var a: A = new A();\nvar r: Int = "
                                    "a.poke();\n");
    CHECK(!o.passed);
    CHECK(o.failure_message.find("null") != std::string::npos);
  }
  SUBCASE("missing return is a runtime failure") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  func f(x: Int): Int {\n"
                  "    if (x > 0) {\n      return 1;\n    }\n  }\n}\n")};
    TestOutcome o =
        run_test(units, "var a: A = new A();\nvar r: Int = a.f(0);\n");
    CHECK(!o.passed);
    CHECK(o.failure_message.find("without returning") != std::string::npos);
  }
  SUBCASE("deep recursion is cut off") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  func f(x: Int): Int {\n"
                  "    return this.f(x + 1);\n  }\n}\n")};
    TestOutcome o =
        run_test(units, "var a: A = new A();\nvar r: Int = a.f(0);\n");
    CHECK(!o.passed);
    bool bounded =
        o.failure_message.find("call depth") != std::string::npos ||
        o.failure_message.find("step budget") != std::string::npos;
    CHECK(bounded);
  }
  SUBCASE("short-circuit evaluation") {
    TestOutcome o = run_test(
        {},
        "var a: List<Int> = [];\n"
        "assert a.size() == 0 || a.get(0) == 1;\n"
        "assert !(a.size() > 0 && a.get(0) == 1);\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("int widens to float through assignment and calls") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  var rate: Float;\n"
                  "  func half(x: Float): Float {\n    return x / 2;\n  }\n"
                  "}\n")};
    TestOutcome o = run_test(units,
                             "var a: A = new A();\n"
                             "a.rate = 3;\n"
                             "assert a.rate == 3.0;\n"
                             "assert a.half(5) == 2.5;\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("field initializers apply at construction") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  var x: Int = 41;\n  var s: String = \"hi\";\n"
                  "  var f: Float = -2.5;\n}\n")};
    TestOutcome o = run_test(units,
                             "var a: A = new A();\n"
                             "assert a.x == 41;\nassert a.s == \"hi\";\n"
                             "assert a.f == -2.5;\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("date fields take integer epoch-day initializers") {
    auto units = std::vector<SourceUnit>{
        unit("A", "class A {\n  var start: Date = 10;\n}\n")};
    REQUIRE(check_units(units).ok);
    TestOutcome o = run_test(units,
                             "var a: A = new A();\n"
                             "assert a.start == Date.of(10);\n");
    CHECK_MESSAGE(o.passed, o.failure_message);
  }
  SUBCASE("two runs produce identical outcomes") {
    auto units = std::vector<SourceUnit>{unit("Counter", kCounterClass)};
    std::string text =
        "var c: Counter = new Counter();\nc.increment();\n"
        "assert c.getCount() == 2;\n";
    TestOutcome a = run_test(units, text);
    TestOutcome b = run_test(units, text);
    CHECK(a.passed == b.passed);
    CHECK(a.failure_message == b.failure_message);
  }
}

// ---------------------------------------------------------------------------
// Fuzzed printer round-trip.

namespace {

class TreeFuzzer {
 public:
  explicit TreeFuzzer(unsigned seed) : rng_(seed) {}

  Program program() {
    Program p;
    int classes = pick(1, 3);
    for (int i = 0; i < classes; ++i) p.classes.push_back(class_decl(i));
    return p;
  }

 private:
  ClassDecl class_decl(int index) {
    ClassDecl c;
    c.name = "K" + std::to_string(index);
    if (index > 0 && chance(0.3))
      c.super_name = "K" + std::to_string(pick(0, index - 1));
    if (chance(0.3)) c.docstring = " class doc ";
    int fields = pick(0, 3);
    for (int i = 0; i < fields; ++i) {
      Field f;
      f.name = "x" + std::to_string(i);
      f.type = type();
      if (chance(0.4) && f.type.kind == Type::Kind::Int) {
        f.init = int_lit(pick(0, 40));
      }
      c.fields.push_back(std::move(f));
    }
    int methods = pick(0, 3);
    for (int i = 0; i < methods; ++i) c.methods.push_back(method(i));
    return c;
  }

  Method method(int index) {
    Method m;
    m.name = "m" + std::to_string(index);
    int params = pick(0, 2);
    for (int i = 0; i < params; ++i)
      m.params.push_back({"p" + std::to_string(i), type()});
    m.return_type = chance(0.4) ? Type::simple(Type::Kind::Void) : type();
    if (chance(0.5)) m.docstring = "\n   * doc line\n   ";
    depth_ = 0;
    int stmts = pick(1, 3);
    for (int i = 0; i < stmts; ++i) m.body.push_back(stmt());
    return m;
  }

  Type type() {
    switch (pick(0, 5)) {
      case 0: return Type::simple(Type::Kind::Int);
      case 1: return Type::simple(Type::Kind::Float);
      case 2: return Type::simple(Type::Kind::Bool);
      case 3: return Type::simple(Type::Kind::String);
      case 4: return Type::simple(Type::Kind::Date);
      default: return Type::list_of(Type::simple(Type::Kind::Int));
    }
  }

  StmtPtr stmt() {
    auto s = std::make_unique<Stmt>();
    ++depth_;
    switch (depth_ > 3 ? pick(0, 2) : pick(0, 6)) {
      case 0:
        s->kind = Stmt::Kind::VarDecl;
        s->name = "v" + std::to_string(pick(0, 30));
        s->type = Type::simple(Type::Kind::Int);
        s->expr = expr(0);
        break;
      case 1:
        s->kind = Stmt::Kind::Return;
        if (chance(0.7)) s->expr = expr(0);
        break;
      case 2:
        s->kind = Stmt::Kind::Assert;
        s->expr = expr(0);
        break;
      case 3:
        s->kind = Stmt::Kind::If;
        s->expr = expr(0);
        s->body.push_back(stmt());
        if (chance(0.5)) s->else_body.push_back(stmt());
        break;
      case 4:
        s->kind = Stmt::Kind::While;
        s->expr = expr(0);
        s->body.push_back(stmt());
        break;
      case 5:
        s->kind = Stmt::Kind::Raise;
        s->name = "Oops";
        s->expr = string_lit("boom \"quoted\" \\ tab\t");
        break;
      default:
        s->kind = Stmt::Kind::ForEach;
        s->name = "e" + std::to_string(pick(0, 9));
        s->expr = expr(0);
        s->body.push_back(stmt());
        break;
    }
    --depth_;
    return s;
  }

  ExprPtr expr(int depth) {
    auto e = std::make_unique<Expr>();
    if (depth > 3 || chance(0.35)) {
      switch (pick(0, 4)) {
        case 0: return int_lit(pick(0, 99));
        case 1:
          e->kind = Expr::Kind::FloatLit;
          e->float_value = pick(0, 99) / 8.0;
          return e;
        case 2:
          e->kind = Expr::Kind::BoolLit;
          e->bool_value = chance(0.5);
          return e;
        case 3: return string_lit("s" + std::to_string(pick(0, 9)));
        default:
          e->kind = Expr::Kind::Name;
          e->text = "n" + std::to_string(pick(0, 9));
          return e;
      }
    }
    switch (pick(0, 5)) {
      case 0: {
        e->kind = Expr::Kind::Binary;
        e->binary_op = static_cast<BinaryOp>(pick(0, 12));
        e->target = expr(depth + 1);
        e->rhs = expr(depth + 1);
        return e;
      }
      case 1: {
        e->kind = Expr::Kind::Unary;
        e->unary_op = chance(0.5) ? UnaryOp::Neg : UnaryOp::Not;
        e->target = expr(depth + 1);
        return e;
      }
      case 2: {
        e->kind = Expr::Kind::MethodCall;
        e->target = expr(depth + 1);
        e->text = "call" + std::to_string(pick(0, 5));
        int args = pick(0, 2);
        for (int i = 0; i < args; ++i) e->args.push_back(expr(depth + 1));
        return e;
      }
      case 3: {
        e->kind = Expr::Kind::FieldAccess;
        e->target = expr(depth + 1);
        e->text = "fld" + std::to_string(pick(0, 5));
        return e;
      }
      case 4: {
        e->kind = Expr::Kind::ListLit;
        int args = pick(0, 3);
        for (int i = 0; i < args; ++i) e->args.push_back(expr(depth + 1));
        return e;
      }
      default: {
        e->kind = Expr::Kind::New;
        e->text = "K0";
        return e;
      }
    }
  }

  ExprPtr int_lit(std::int64_t v) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::IntLit;
    e->int_value = v;
    return e;
  }

  ExprPtr string_lit(std::string s) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::StringLit;
    e->text = std::move(s);
    return e;
  }

  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng_) < p;
  }

  std::mt19937 rng_;
  int depth_ = 0;
};

}  // namespace

TEST_CASE("fuzzed trees survive print/parse/print") {
  TreeFuzzer fuzz(424242);
  for (int i = 0; i < 250; ++i) {
    Program original = fuzz.program();
    std::string once = print(original);
    ParseResult parsed = parse(once, "fuzz.mo");
    REQUIRE_MESSAGE(parsed.ok(), "round-trip parse failed for:\n", once);
    std::string twice = print(*parsed.program);
    REQUIRE_MESSAGE(once == twice, "non-fixpoint print for:\n", once);
  }
}

TEST_CASE("checked programs never hit resolution failures at runtime") {
  // Smoke property: interpret well-typed accessor round-trips and assert
  // the failure, if any, is never a missing name/field/method.
  auto units = std::vector<SourceUnit>{unit("Counter", kCounterClass)};
  std::mt19937 rng(777);
  for (int i = 0; i < 50; ++i) {
    int bumps = std::uniform_int_distribution<int>(0, 5)(rng);
    std::string text = "var c: Counter = new Counter();\n";
    for (int b = 0; b < bumps; ++b) text += "c.increment();\n";
    text += "assert c.getCount() == " + std::to_string(bumps) + ";\n";
    TestProgram t{"t", text};
    CompileResult check = check_units(units, &t);
    REQUIRE(check.ok);
    TestOutcome o = interpret(units, t);
    CHECK_MESSAGE(o.passed, o.failure_message);
    CHECK(o.failure_message.find("Missing") == std::string::npos);
  }
}
