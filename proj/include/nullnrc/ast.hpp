#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nrc {

// ---------------------------------------------------------------------------
// Base types, calculus modes, constants
// ---------------------------------------------------------------------------

enum class BaseTy { Int, Bool, String, Float };

const char* base_ty_name(BaseTy b);
std::optional<BaseTy> base_ty_from_name(std::string_view name);

enum class Mode { NRC, NRC_OPT, NRC_NULL };

const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(std::string_view name);

// A literal together with its base type. The variant alternative is
// determined by ty: Int -> int64_t, Bool -> bool, String -> string,
// Float -> double.
struct Constant {
  BaseTy ty;
  std::variant<std::int64_t, bool, std::string, double> lit;

  static Constant make_int(std::int64_t v) { return {BaseTy::Int, v}; }
  static Constant make_bool(bool v) { return {BaseTy::Bool, v}; }
  static Constant make_string(std::string v) { return {BaseTy::String, std::move(v)}; }
  static Constant make_float(double v) { return {BaseTy::Float, v}; }

  std::int64_t as_int() const { return std::get<std::int64_t>(lit); }
  bool as_bool() const { return std::get<bool>(lit); }
  const std::string& as_string() const { return std::get<std::string>(lit); }
  double as_float() const { return std::get<double>(lit); }
};

// Total order on constants: BaseTy tag first, then literal value.
// Floats compare bit-exactly (sign-magnitude key) so the order is total
// and -0.0 != 0.0.
int constant_cmp(const Constant& a, const Constant& b);
bool operator==(const Constant& a, const Constant& b);
inline bool operator!=(const Constant& a, const Constant& b) { return !(a == b); }

// Shortest float rendering that survives a strtod round trip; always
// contains '.' or 'e' so it lexes as a float literal.
std::string float_literal_text(double v);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct Ty;
using TyPtr = std::shared_ptr<const Ty>;
using TyField = std::pair<std::string, TyPtr>;

struct Ty {
  struct Base {
    BaseTy b;
  };
  struct Record {
    std::vector<TyField> fields;  // labels pairwise distinct
  };
  struct Set {
    TyPtr elem;
  };
  struct Option {
    TyPtr inner;
  };
  // Inference-internal placeholder; never part of a checked result type.
  struct Var {
    int id;
  };

  std::variant<Base, Record, Set, Option, Var> node;
};

namespace ty {
TyPtr base(BaseTy b);
TyPtr int_();
TyPtr bool_();
TyPtr string_();
TyPtr float_();
TyPtr record(std::vector<TyField> fields);
TyPtr set(TyPtr elem);
TyPtr option(TyPtr inner);
TyPtr var(int id);
}  // namespace ty

template <typename T>
bool ty_is(const TyPtr& t) {
  return t && std::holds_alternative<T>(t->node);
}
template <typename T>
const T& ty_as(const TyPtr& t) {
  return std::get<T>(t->node);
}

// Structural equality; record fields compared as label -> type maps
// (order-insensitive).
bool ty_eq(const TyPtr& a, const TyPtr& b);
bool ty_contains_var(const TyPtr& t);
bool ty_is_base(const TyPtr& t);
// Set of records whose fields are all base-typed ("relation-typed").
bool ty_is_relation(const TyPtr& t);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;
using TermField = std::pair<std::string, TermPtr>;

struct Term {
  struct Var {
    std::string name;
  };
  struct Const {
    Constant c;
  };
  struct Prim {
    std::string op;  // "+", "-", "*", "/", "=", "<>", "<", "<=", ">", ">=", "and", "or", "not"
    std::vector<TermPtr> args;
  };
  struct RecordCons {
    std::vector<TermField> fields;
  };
  struct Project {
    TermPtr rec;
    std::string label;
  };
  struct EmptySet {};
  struct Singleton {
    TermPtr elem;
  };
  struct Union {
    TermPtr lhs;
    TermPtr rhs;
  };
  // The comprehension U{ head | var <- source }; var scopes over head only.
  struct Comp {
    TermPtr head;
    std::string var;
    TermPtr source;
  };
  struct Where {
    TermPtr body;
    TermPtr cond;
  };
  struct IsEmpty {
    TermPtr arg;
  };
  struct If {
    TermPtr cond;
    TermPtr then_branch;
    TermPtr else_branch;
  };
  struct NoneLit {};
  struct SomeLit {
    TermPtr arg;
  };
  // case scrut of { none -> none_branch | some var -> some_branch }
  struct Case {
    TermPtr scrut;
    TermPtr none_branch;
    std::string var;
    TermPtr some_branch;
  };
  struct NullLit {};
  struct IsNull {
    TermPtr arg;
  };
  struct TableRef {
    std::string name;
  };

  std::variant<Var, Const, Prim, RecordCons, Project, EmptySet, Singleton, Union, Comp,
               Where, IsEmpty, If, NoneLit, SomeLit, Case, NullLit, IsNull, TableRef>
      node;
};

namespace term {
TermPtr var(std::string name);
TermPtr cnst(Constant c);
TermPtr int_(std::int64_t v);
TermPtr bool_(bool v);
TermPtr str(std::string v);
TermPtr flt(double v);
TermPtr prim(std::string op, std::vector<TermPtr> args);
TermPtr record(std::vector<TermField> fields);
TermPtr project(TermPtr rec, std::string label);
TermPtr empty_set();
TermPtr single(TermPtr elem);
TermPtr union_(TermPtr lhs, TermPtr rhs);
TermPtr comp(TermPtr head, std::string var, TermPtr source);
TermPtr where(TermPtr body, TermPtr cond);
TermPtr is_empty(TermPtr arg);
TermPtr if_(TermPtr cond, TermPtr then_branch, TermPtr else_branch);
TermPtr none();
TermPtr some(TermPtr arg);
TermPtr case_(TermPtr scrut, TermPtr none_branch, std::string var, TermPtr some_branch);
TermPtr null_();
TermPtr is_null(TermPtr arg);
TermPtr table(std::string name);
}  // namespace term

template <typename T>
bool is(const TermPtr& t) {
  return t && std::holds_alternative<T>(t->node);
}
template <typename T>
const T& as(const TermPtr& t) {
  return std::get<T>(t->node);
}

// Uniform child access; child order defines the leftmost-outermost
// traversal used by the rewriter. Binders: Comp child 0 and Case child 2
// are under the node's bound variable.
int child_count(const TermPtr& t);
TermPtr child_at(const TermPtr& t, int i);
TermPtr with_child(const TermPtr& t, int i, TermPtr replacement);
// Bound variable in scope at child i, if any.
std::optional<std::string> binder_at(const TermPtr& t, int i);

std::set<std::string> free_vars(const TermPtr& t);

// Capture-avoiding substitution of `replacement` for free occurrences of
// `name`.
TermPtr subst(const TermPtr& t, const std::string& name, const TermPtr& replacement);

// Structural equality up to renaming of bound variables.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Fresh variable name derived from `base`, distinct from everything in
// `avoid`. Uses a process-global counter for the suffix.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

struct Value;

struct VNull {};
struct VNone {};
struct VSome {
  std::shared_ptr<const Value> payload;
};
struct VRecord {
  std::vector<std::pair<std::string, Value>> fields;
};
struct VSet {
  std::vector<Value> elems;  // canonically ordered, duplicate-free
};

struct Value {
  std::variant<VNull, VNone, Constant, VSome, VRecord, VSet> v;
};

namespace val {
Value null_();
Value none();
Value some(Value payload);
Value cnst(Constant c);
Value int_(std::int64_t v);
Value bool_(bool v);
Value str(std::string v);
Value flt(double v);
Value record(std::vector<std::pair<std::string, Value>> fields);
// Canonicalizes: sorts and dedupes.
Value set(std::vector<Value> elems);
}  // namespace val

template <typename T>
bool vis(const Value& v) {
  return std::holds_alternative<T>(v.v);
}
template <typename T>
const T& vas(const Value& v) {
  return std::get<T>(v.v);
}

// Canonical total order: VNull < VNone < Constant < VSome < VRecord < VSet.
// Records compare by label-sorted fields; floats bit-exactly.
int value_cmp(const Value& a, const Value& b);
bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

std::vector<Value> canonicalize_values(std::vector<Value> elems);

}  // namespace nrc
