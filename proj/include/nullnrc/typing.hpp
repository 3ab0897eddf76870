#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/data.hpp"
#include "nullnrc/result.hpp"
#include "nullnrc/surface.hpp"

namespace nrc {

enum class Strictness { Strict, ThreeValued, NullTest };

struct PrimSig {
  std::string name;
  std::vector<BaseTy> arg_types;
  BaseTy result_type;
  Strictness strictness;
};

// All signatures of a primitive (overloads share one name), empty if
// unknown. Arithmetic exists at int and float; comparisons at every base
// type; and/or/not are the three-valued connectives.
const std::vector<PrimSig>& prim_signatures(const std::string& name);
bool is_known_prim(const std::string& name);
std::optional<Strictness> prim_strictness(const std::string& name);
int prim_arity(const std::string& name);

// Ordered environment; lookup returns the innermost binding.
class TypeEnv {
 public:
  void bind(std::string name, TyPtr ty) { entries_.emplace_back(std::move(name), std::move(ty)); }
  void pop() { entries_.pop_back(); }
  const TyPtr* lookup(const std::string& name) const;
  size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, TyPtr>> entries_;
};

struct TypeError {
  enum class Kind {
    UnboundVar,
    FieldMissing,
    Mismatch,
    ModeViolation,
    NullAtNonBase,
    ArityMismatch,
    UnknownTable,
  };
  Kind kind;
  std::string detail;
  std::optional<SourceSpan> at;
};

const char* type_error_kind_name(TypeError::Kind k);
std::string format_type_error(const TypeError& e);

// Typechecks m in the given mode. When `expected` is provided the term is
// checked against it (needed e.g. for terms produced by rewriting whose
// type is only determined by context). On success the returned type is
// fully resolved (no inference variables).
Result<TyPtr, TypeError> typecheck(Mode mode, const Schema& schema, const TypeEnv& env,
                                   const TermPtr& m, const TyPtr& expected = nullptr);

// Per-node resolved types. With default_unresolved, inference variables
// that never got constrained are defaulted to int; otherwise they remain
// as Ty::Var so callers can tell genuinely concrete types apart. Keys are
// node addresses, valid while the term is alive.
struct Annotations {
  TyPtr root;
  std::unordered_map<const Term*, TyPtr> types;

  const TyPtr* of(const TermPtr& t) const {
    auto it = types.find(t.get());
    return it == types.end() ? nullptr : &it->second;
  }
};

Result<Annotations, TypeError> annotate(Mode mode, const Schema& schema, const TypeEnv& env,
                                        const TermPtr& m, const TyPtr& expected = nullptr,
                                        bool default_unresolved = true);

// Best-effort local type of a subterm under the given bindings; nullopt on
// any error. Used by the rewriter's type-guarded rules.
std::optional<TyPtr> infer_local(Mode mode, const Schema& schema,
                                 const std::vector<std::pair<std::string, TyPtr>>& bindings,
                                 const TermPtr& m);

// True iff m' typechecks with the same type as the well-typed m.
bool check_subject_reduction(Mode mode, const Schema& schema, const TermPtr& m,
                             const TermPtr& m_prime);

}  // namespace nrc
