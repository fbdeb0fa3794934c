#include "iecoregen/model.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "iecoregen/errors.hpp"

namespace iecoregen {

std::string TypeRef::to_string() const {
  switch (kind_) {
    case Kind::Int: return "Int";
    case Kind::Float: return "Float";
    case Kind::Bool: return "Bool";
    case Kind::String: return "String";
    case Kind::Date: return "Date";
    case Kind::Void: return "Void";
    case Kind::Class:
    case Kind::Enum: return name_;
    case Kind::List: return "List<" + elem_->to_string() + ">";
  }
  return "?";
}

std::string Literal::to_string() const {
  switch (kind) {
    case Kind::Int: return std::to_string(std::get<std::int64_t>(value));
    case Kind::Float: {
      char buf[32];
      auto [end, ec] =
          std::to_chars(buf, buf + sizeof buf, std::get<double>(value));
      std::string s(buf, end);
      // Keep a lexical marker so the literal never reads as an Int.
      if (s.find('.') == std::string::npos &&
          s.find('e') == std::string::npos &&
          s.find("inf") == std::string::npos &&
          s.find("nan") == std::string::npos) {
        s += ".0";
      }
      return s;
    }
    case Kind::Bool: return std::get<bool>(value) ? "true" : "false";
    case Kind::String: {
      std::string out = "\"";
      for (char c : std::get<std::string>(value)) {
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
    case Kind::EnumLiteral: return std::get<std::string>(value);
  }
  return "?";
}

const AttributeDef* ClassDef::find_attribute(const std::string& n) const {
  for (const auto& a : attributes)
    if (a.name == n) return &a;
  return nullptr;
}

const ReferenceDef* ClassDef::find_reference(const std::string& n) const {
  for (const auto& r : references)
    if (r.name == n) return &r;
  return nullptr;
}

const ClassDef* ModelPackage::find_class(const std::string& n) const {
  for (const auto& c : classes)
    if (c.name == n) return &c;
  return nullptr;
}

const EnumDef* ModelPackage::find_enum(const std::string& n) const {
  for (const auto& e : enums)
    if (e.name == n) return &e;
  return nullptr;
}

std::vector<const ClassDef*> ModelPackage::super_chain(
    const ClassDef& cls) const {
  std::vector<const ClassDef*> chain;
  std::set<std::string> seen{cls.name};
  const ClassDef* cur = &cls;
  while (cur->super_class) {
    const ClassDef* super = find_class(*cur->super_class);
    if (super == nullptr || seen.count(super->name)) break;
    chain.push_back(super);
    seen.insert(super->name);
    cur = super;
  }
  return chain;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateName: return "DuplicateName";
    case ViolationKind::UnresolvedType: return "UnresolvedType";
    case ViolationKind::CyclicInheritance: return "CyclicInheritance";
    case ViolationKind::DuplicateFeature: return "DuplicateFeature";
    case ViolationKind::DuplicateOperation: return "DuplicateOperation";
    case ViolationKind::DuplicateParameter: return "DuplicateParameter";
    case ViolationKind::InvalidDefault: return "InvalidDefault";
    case ViolationKind::OppositeAsymmetry: return "OppositeAsymmetry";
    case ViolationKind::ContainmentOppositeConflict:
      return "ContainmentOppositeConflict";
    case ViolationKind::InvalidTypeUse: return "InvalidTypeUse";
  }
  return "?";
}

namespace {

bool type_resolves(const ModelPackage& m, const TypeRef& t) {
  switch (t.kind()) {
    case TypeRef::Kind::Class: return m.find_class(t.name()) != nullptr;
    case TypeRef::Kind::Enum: return m.find_enum(t.name()) != nullptr;
    case TypeRef::Kind::List: return type_resolves(m, *t.element());
    default: return true;
  }
}

bool default_matches(const ModelPackage& m, const TypeRef& t,
                     const Literal& lit) {
  switch (t.kind()) {
    case TypeRef::Kind::Int: return lit.kind == Literal::Kind::Int;
    case TypeRef::Kind::Float:
      return lit.kind == Literal::Kind::Float ||
             lit.kind == Literal::Kind::Int;
    case TypeRef::Kind::Bool: return lit.kind == Literal::Kind::Bool;
    case TypeRef::Kind::String: return lit.kind == Literal::Kind::String;
    case TypeRef::Kind::Date: return lit.kind == Literal::Kind::Int;
    case TypeRef::Kind::Enum: {
      if (lit.kind != Literal::Kind::EnumLiteral) return false;
      const EnumDef* e = m.find_enum(t.name());
      if (e == nullptr) return false;
      const auto& name = std::get<std::string>(lit.value);
      return std::find(e->literals.begin(), e->literals.end(), name) !=
             e->literals.end();
    }
    default: return false;
  }
}

void check_type_use(const ModelPackage& m, const TypeRef& t,
                    const std::string& location, bool return_position,
                    std::vector<Violation>& out) {
  if (!type_resolves(m, t)) {
    out.push_back({ViolationKind::UnresolvedType, location,
                   "type " + t.to_string() + " does not resolve to a "
                   "declared class or enum"});
  }
  if (t.list_depth() > 2) {
    out.push_back({ViolationKind::InvalidTypeUse, location,
                   "List nesting deeper than 2"});
  }
  if (!return_position && t.kind() == TypeRef::Kind::Void) {
    out.push_back({ViolationKind::InvalidTypeUse, location,
                   "Void is only legal as a return type"});
  }
  if (t.kind() == TypeRef::Kind::List &&
      t.element()->kind() == TypeRef::Kind::Void) {
    out.push_back({ViolationKind::InvalidTypeUse, location,
                   "List of Void is not a type"});
  }
}

}  // namespace

std::vector<Violation> validate_model(const ModelPackage& m) {
  std::vector<Violation> out;

  // Top-level name uniqueness across classes and enums.
  std::map<std::string, int> top_names;
  for (const auto& c : m.classes) ++top_names[c.name];
  for (const auto& e : m.enums) ++top_names[e.name];
  for (const auto& [name, count] : top_names) {
    if (count > 1) {
      out.push_back({ViolationKind::DuplicateName, m.name + "." + name,
                     "name " + name + " declared " + std::to_string(count) +
                         " times in the package"});
    }
  }

  for (const auto& e : m.enums) {
    std::set<std::string> lits;
    for (const auto& lit : e.literals) {
      if (!lits.insert(lit).second) {
        out.push_back({ViolationKind::DuplicateName, e.name + "." + lit,
                       "duplicate enum literal " + lit});
      }
    }
  }

  // Inheritance: unresolved superclasses and cycles. Each cycle is reported
  // once, at its first class in declaration order.
  std::set<std::string> in_reported_cycle;
  for (const auto& c : m.classes) {
    if (!c.super_class) continue;
    if (m.find_class(*c.super_class) == nullptr) {
      out.push_back({ViolationKind::UnresolvedType, c.name,
                     "superclass " + *c.super_class + " is not declared"});
      continue;
    }
    if (in_reported_cycle.count(c.name)) continue;
    std::vector<std::string> path{c.name};
    std::set<std::string> on_path{c.name};
    const ClassDef* cur = &c;
    while (cur->super_class != std::nullopt) {
      const ClassDef* super = m.find_class(*cur->super_class);
      if (super == nullptr) break;
      if (on_path.count(super->name)) {
        for (const auto& n : path) in_reported_cycle.insert(n);
        out.push_back({ViolationKind::CyclicInheritance, c.name,
                       "inheritance cycle through " + super->name});
        break;
      }
      path.push_back(super->name);
      on_path.insert(super->name);
      cur = super;
    }
  }

  for (const auto& c : m.classes) {
    // Feature uniqueness, including inherited features (skipped for classes
    // on a reported cycle; super_chain guards against looping).
    std::map<std::string, std::string> feature_owner;
    auto add_features = [&](const ClassDef& owner, bool inherited) {
      for (const auto& a : owner.attributes) {
        auto [it, fresh] = feature_owner.emplace(a.name, owner.name);
        if (!fresh && !inherited) {
          out.push_back({ViolationKind::DuplicateFeature,
                         c.name + "." + a.name,
                         "feature " + a.name + " clashes with " + it->second +
                             "." + a.name});
        }
      }
      for (const auto& r : owner.references) {
        auto [it, fresh] = feature_owner.emplace(r.name, owner.name);
        if (!fresh && !inherited) {
          out.push_back({ViolationKind::DuplicateFeature,
                         c.name + "." + r.name,
                         "feature " + r.name + " clashes with " + it->second +
                             "." + r.name});
        }
      }
    };
    // Seed with ancestors first so clashes are reported at the subclass.
    auto chain = m.super_chain(c);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      add_features(**it, true);
    add_features(c, false);

    for (const auto& a : c.attributes) {
      check_type_use(m, a.type, c.name + "." + a.name, false, out);
      if (a.type.kind() == TypeRef::Kind::Class ||
          a.type.kind() == TypeRef::Kind::Void) {
        out.push_back({ViolationKind::InvalidTypeUse, c.name + "." + a.name,
                       "attributes must have a primitive or enum type"});
      }
      if (a.default_value) {
        if (a.is_many) {
          out.push_back({ViolationKind::InvalidDefault, c.name + "." + a.name,
                         "many-valued attribute cannot have a default"});
        } else if (!default_matches(m, a.type, *a.default_value)) {
          out.push_back({ViolationKind::InvalidDefault, c.name + "." + a.name,
                         "default " + a.default_value->to_string() +
                             " is not a " + a.type.to_string()});
        }
      }
    }

    for (const auto& r : c.references) {
      const ClassDef* target = m.find_class(r.target);
      if (target == nullptr) {
        out.push_back({ViolationKind::UnresolvedType, c.name + "." + r.name,
                       "reference target " + r.target + " is not declared"});
        continue;
      }
      if (r.opposite) {
        const ReferenceDef* opp = target->find_reference(*r.opposite);
        if (opp == nullptr || opp->target != c.name ||
            opp->opposite != std::optional<std::string>(r.name)) {
          out.push_back({ViolationKind::OppositeAsymmetry,
                         c.name + "." + r.name,
                         "opposite " + r.target + "." + *r.opposite +
                             " does not point back"});
        } else if (r.is_containment && opp->is_containment) {
          out.push_back({ViolationKind::ContainmentOppositeConflict,
                         c.name + "." + r.name,
                         "both ends of an opposite pair are containments"});
        }
      }
    }

    std::set<std::pair<std::string, std::size_t>> op_keys;
    for (const auto& op : c.operations) {
      if (!op_keys.insert({op.name, op.params.size()}).second) {
        out.push_back({ViolationKind::DuplicateOperation,
                       c.name + "." + op.name,
                       "operation " + op.name + "/" +
                           std::to_string(op.params.size()) +
                           " declared twice"});
      }
      std::set<std::string> param_names;
      for (const auto& p : op.params) {
        if (!param_names.insert(p.name).second) {
          out.push_back({ViolationKind::DuplicateParameter,
                         c.name + "." + op.name,
                         "duplicate parameter " + p.name});
        }
        check_type_use(m, p.type, c.name + "." + op.name + "." + p.name,
                       false, out);
      }
      check_type_use(m, op.return_type, c.name + "." + op.name, true, out);
    }
  }

  return out;
}

std::optional<OperationId> OperationId::parse(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= text.size())
    return std::nullopt;
  OperationId id;
  id.class_name = text.substr(0, dot);
  std::string rest = text.substr(dot + 1);
  auto slash = rest.find('/');
  if (slash == std::string::npos) {
    id.op_name = rest;
  } else {
    id.op_name = rest.substr(0, slash);
    int arity = 0;
    auto [p, ec] = std::from_chars(rest.data() + slash + 1,
                                   rest.data() + rest.size(), arity);
    if (ec != std::errc() || p != rest.data() + rest.size() || arity < 0)
      return std::nullopt;
    id.arity = arity;
  }
  if (id.op_name.empty()) return std::nullopt;
  return id;
}

std::string OperationId::to_string() const {
  std::string s = class_name + "." + op_name;
  if (arity) s += "/" + std::to_string(*arity);
  return s;
}

ModelPackage attach_spec(const ModelPackage& m, const OperationId& op_id,
                         MethodSpec spec) {
  ModelPackage copy = m;
  ClassDef* cls = nullptr;
  for (auto& c : copy.classes)
    if (c.name == op_id.class_name) cls = &c;
  if (cls == nullptr)
    throw UnknownOperationError("unknown operation " + op_id.to_string() +
                                ": class " + op_id.class_name +
                                " is not declared");
  std::vector<OperationDef*> hits;
  for (auto& op : cls->operations) {
    if (op.name != op_id.op_name) continue;
    if (op_id.arity && op.params.size() != static_cast<std::size_t>(*op_id.arity))
      continue;
    hits.push_back(&op);
  }
  if (hits.empty())
    throw UnknownOperationError("unknown operation " + op_id.to_string());
  if (hits.size() > 1)
    throw UnknownOperationError("operation " + op_id.to_string() +
                                " is ambiguous; qualify it with /arity");
  // Input entries must name declared parameters; extras are dropped here
  // so the stored annotation always satisfies the invariant.
  OperationDef& op = *hits.front();
  std::set<std::string> param_names;
  for (const auto& p : op.params) param_names.insert(p.name);
  std::vector<std::pair<std::string, std::string>> kept;
  for (auto& entry : spec.inputs) {
    if (param_names.count(entry.first)) kept.push_back(std::move(entry));
  }
  spec.inputs = std::move(kept);
  op.spec = std::move(spec);
  return copy;
}

std::vector<const ClassDef*> related_classes(const ModelPackage& m,
                                             const std::string& cls) {
  const ClassDef* c = m.find_class(cls);
  if (c == nullptr) throw UnknownClassError("unknown class " + cls);

  std::vector<const ClassDef*> out;
  std::set<std::string> seen{cls};
  auto add = [&](const std::string& name) {
    if (seen.count(name)) return;
    if (const ClassDef* found = m.find_class(name)) {
      out.push_back(found);
      seen.insert(name);
    }
  };
  auto add_type = [&](const TypeRef& t) {
    const TypeRef* cur = &t;
    while (cur->kind() == TypeRef::Kind::List) cur = cur->element();
    if (cur->kind() == TypeRef::Kind::Class) add(cur->name());
  };

  for (const ClassDef* super : m.super_chain(*c)) add(super->name);
  for (const auto& r : c->references) add(r.target);
  for (const auto& op : c->operations) {
    for (const auto& p : op.params) add_type(p.type);
    add_type(op.return_type);
  }
  return out;
}

MethodSpec fallback_spec(const std::string& requirement) {
  MethodSpec spec;
  spec.summary = requirement;
  return spec;
}

}  // namespace iecoregen
