#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iecoregen/method_spec.hpp"

namespace iecoregen {

/// Type expression used by attributes, parameters and return types.
/// ListOf nesting is limited to depth 2; Void is only legal as a return type.
class TypeRef {
 public:
  enum class Kind { Int, Float, Bool, String, Date, Void, Class, Enum, List };

  static TypeRef primitive(Kind k) { return TypeRef(k, "", nullptr); }
  static TypeRef int_type() { return primitive(Kind::Int); }
  static TypeRef float_type() { return primitive(Kind::Float); }
  static TypeRef bool_type() { return primitive(Kind::Bool); }
  static TypeRef string_type() { return primitive(Kind::String); }
  static TypeRef date_type() { return primitive(Kind::Date); }
  static TypeRef void_type() { return primitive(Kind::Void); }
  static TypeRef class_type(std::string name) {
    return TypeRef(Kind::Class, std::move(name), nullptr);
  }
  static TypeRef enum_type(std::string name) {
    return TypeRef(Kind::Enum, std::move(name), nullptr);
  }
  static TypeRef list_of(TypeRef elem) {
    return TypeRef(Kind::List, "", std::make_shared<TypeRef>(std::move(elem)));
  }

  Kind kind() const { return kind_; }
  /// Class or enum name; empty for the other kinds.
  const std::string& name() const { return name_; }
  /// Element type of a List; null otherwise.
  const TypeRef* element() const { return elem_.get(); }

  int list_depth() const {
    return kind_ == Kind::List ? 1 + elem_->list_depth() : 0;
  }

  bool operator==(const TypeRef& o) const {
    if (kind_ != o.kind_ || name_ != o.name_) return false;
    if ((elem_ == nullptr) != (o.elem_ == nullptr)) return false;
    return elem_ == nullptr || *elem_ == *o.elem_;
  }

  /// Canonical textual form: Int, Float, ..., List<Flight>.
  std::string to_string() const;

 private:
  TypeRef(Kind k, std::string name, std::shared_ptr<TypeRef> elem)
      : kind_(k), name_(std::move(name)), elem_(std::move(elem)) {}

  Kind kind_;
  std::string name_;
  std::shared_ptr<TypeRef> elem_;
};

/// Literal used as an attribute default value.
struct Literal {
  enum class Kind { Int, Float, Bool, String, EnumLiteral };
  Kind kind = Kind::Int;
  std::variant<std::int64_t, double, bool, std::string> value;

  static Literal of_int(std::int64_t v) { return {Kind::Int, v}; }
  static Literal of_float(double v) { return {Kind::Float, v}; }
  static Literal of_bool(bool v) { return {Kind::Bool, v}; }
  static Literal of_string(std::string v) { return {Kind::String, std::move(v)}; }
  static Literal enum_literal(std::string v) {
    return {Kind::EnumLiteral, std::move(v)};
  }

  bool operator==(const Literal&) const = default;
  std::string to_string() const;
};

struct AttributeDef {
  std::string name;
  TypeRef type = TypeRef::string_type();
  bool is_many = false;
  std::optional<Literal> default_value;

  bool operator==(const AttributeDef&) const = default;
};

struct ReferenceDef {
  std::string name;
  std::string target;
  bool is_many = false;
  bool is_containment = false;
  std::optional<std::string> opposite;

  bool operator==(const ReferenceDef&) const = default;
};

struct Parameter {
  std::string name;
  TypeRef type = TypeRef::string_type();

  bool operator==(const Parameter&) const = default;
};

struct OperationDef {
  std::string name;
  std::vector<Parameter> params;
  TypeRef return_type = TypeRef::void_type();
  std::optional<MethodSpec> spec;

  bool operator==(const OperationDef&) const = default;
};

struct ClassDef {
  std::string name;
  bool is_abstract = false;
  std::optional<std::string> super_class;
  std::vector<AttributeDef> attributes;
  std::vector<ReferenceDef> references;
  std::vector<OperationDef> operations;

  const AttributeDef* find_attribute(const std::string& n) const;
  const ReferenceDef* find_reference(const std::string& n) const;

  bool operator==(const ClassDef&) const = default;
};

struct EnumDef {
  std::string name;
  std::vector<std::string> literals;

  bool operator==(const EnumDef&) const = default;
};

/// The class model: the pipeline's blueprint. Treated as an immutable value
/// after construction; all operations below are pure and thread-safe.
struct ModelPackage {
  std::string name;
  std::vector<ClassDef> classes;
  std::vector<EnumDef> enums;

  bool operator==(const ModelPackage&) const = default;

  const ClassDef* find_class(const std::string& n) const;
  const EnumDef* find_enum(const std::string& n) const;
  /// Superclass chain of `cls`, nearest ancestor first. Stops on a cycle.
  std::vector<const ClassDef*> super_chain(const ClassDef& cls) const;
};

enum class ViolationKind {
  DuplicateName,
  UnresolvedType,
  CyclicInheritance,
  DuplicateFeature,
  DuplicateOperation,
  DuplicateParameter,
  InvalidDefault,
  OppositeAsymmetry,
  ContainmentOppositeConflict,
  InvalidTypeUse,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string location;  // e.g. "Airline.flights"
  std::string message;
};

/// Checks every structural invariant of the model and returns one violation
/// per offending element. Empty result means the model is well-formed.
/// Each inheritance cycle is reported exactly once.
std::vector<Violation> validate_model(const ModelPackage& m);

/// Identifies one operation: "Class.op" or, when a class declares several
/// operations of that name, "Class.op/arity".
struct OperationId {
  std::string class_name;
  std::string op_name;
  std::optional<int> arity;

  static std::optional<OperationId> parse(const std::string& text);
  std::string to_string() const;
};

/// Returns a copy of the model with the operation's annotation replaced.
/// Throws UnknownOperationError when the id resolves to zero or to more
/// than one operation.
ModelPackage attach_spec(const ModelPackage& m, const OperationId& op_id,
                         MethodSpec spec);

/// Classes related to `cls`: its superclass chain, then its reference
/// targets, then classes used in its operations' parameter and return
/// types. Deterministic order, duplicate-free, never contains `cls`.
/// Throws UnknownClassError for an undeclared class.
std::vector<const ClassDef*> related_classes(const ModelPackage& m,
                                             const std::string& cls);

}  // namespace iecoregen
