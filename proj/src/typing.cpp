#include "nullnrc/typing.hpp"

#include <cassert>
#include <map>

namespace nrc {

// ---------------------------------------------------------------------------
// Primitive signature table (closed, fixed at build time)
// ---------------------------------------------------------------------------

namespace {

std::map<std::string, std::vector<PrimSig>> build_prim_table() {
  std::map<std::string, std::vector<PrimSig>> t;
  for (const char* op : {"+", "-", "*", "/"}) {
    t[op] = {
        {op, {BaseTy::Int, BaseTy::Int}, BaseTy::Int, Strictness::Strict},
        {op, {BaseTy::Float, BaseTy::Float}, BaseTy::Float, Strictness::Strict},
    };
  }
  for (const char* op : {"=", "<>", "<", "<=", ">", ">="}) {
    std::vector<PrimSig> sigs;
    for (BaseTy b : {BaseTy::Int, BaseTy::Bool, BaseTy::String, BaseTy::Float})
      sigs.push_back({op, {b, b}, BaseTy::Bool, Strictness::Strict});
    t[op] = std::move(sigs);
  }
  t["and"] = {{"and", {BaseTy::Bool, BaseTy::Bool}, BaseTy::Bool, Strictness::ThreeValued}};
  t["or"] = {{"or", {BaseTy::Bool, BaseTy::Bool}, BaseTy::Bool, Strictness::ThreeValued}};
  t["not"] = {{"not", {BaseTy::Bool}, BaseTy::Bool, Strictness::ThreeValued}};
  return t;
}

const std::map<std::string, std::vector<PrimSig>>& prim_table() {
  static const auto table = build_prim_table();
  return table;
}

}  // namespace

const std::vector<PrimSig>& prim_signatures(const std::string& name) {
  static const std::vector<PrimSig> kEmpty;
  auto it = prim_table().find(name);
  return it == prim_table().end() ? kEmpty : it->second;
}

bool is_known_prim(const std::string& name) { return !prim_signatures(name).empty(); }

std::optional<Strictness> prim_strictness(const std::string& name) {
  const auto& sigs = prim_signatures(name);
  if (sigs.empty()) return std::nullopt;
  return sigs.front().strictness;
}

int prim_arity(const std::string& name) {
  const auto& sigs = prim_signatures(name);
  return sigs.empty() ? -1 : static_cast<int>(sigs.front().arg_types.size());
}

const TyPtr* TypeEnv::lookup(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

const char* type_error_kind_name(TypeError::Kind k) {
  switch (k) {
    case TypeError::Kind::UnboundVar: return "UnboundVar";
    case TypeError::Kind::FieldMissing: return "FieldMissing";
    case TypeError::Kind::Mismatch: return "Mismatch";
    case TypeError::Kind::ModeViolation: return "ModeViolation";
    case TypeError::Kind::NullAtNonBase: return "NullAtNonBase";
    case TypeError::Kind::ArityMismatch: return "ArityMismatch";
    case TypeError::Kind::UnknownTable: return "UnknownTable";
  }
  return "?";
}

std::string format_type_error(const TypeError& e) {
  return std::string(type_error_kind_name(e.kind)) + ": " + e.detail;
}

// ---------------------------------------------------------------------------
// The checker
// ---------------------------------------------------------------------------

namespace {

using TErr = std::optional<TypeError>;

TypeError mk_err(TypeError::Kind k, std::string detail) {
  return TypeError{k, std::move(detail), std::nullopt};
}

// What an unresolved inference variable may stand for.
enum class VarKind { Any, AnyBase, NumBase };

VarKind kind_meet(VarKind a, VarKind b) {
  if (a == VarKind::NumBase || b == VarKind::NumBase) return VarKind::NumBase;
  if (a == VarKind::AnyBase || b == VarKind::AnyBase) return VarKind::AnyBase;
  return VarKind::Any;
}

class Checker {
 public:
  Checker(Mode mode, const Schema& schema, bool record_annots)
      : mode_(mode), schema_(schema), record_annots_(record_annots) {}

  Result<TyPtr, TypeError> infer(TypeEnv& env, const TermPtr& t);
  TErr check(TypeEnv& env, const TermPtr& t, TyPtr expected);

  TyPtr fresh(VarKind kind) {
    int id = static_cast<int>(vars_.size());
    vars_.push_back({nullptr, kind});
    return ty::var(id);
  }

  TyPtr resolve(TyPtr t) const {
    while (t && ty_is<Ty::Var>(t)) {
      const auto& info = vars_[ty_as<Ty::Var>(t).id];
      if (!info.bound) break;
      t = info.bound;
    }
    return t;
  }

  TyPtr zonk(const TyPtr& t, bool default_unresolved) const {
    TyPtr r = resolve(t);
    if (ty_is<Ty::Var>(r)) return default_unresolved ? ty::int_() : r;
    if (ty_is<Ty::Set>(r)) return ty::set(zonk(ty_as<Ty::Set>(r).elem, default_unresolved));
    if (ty_is<Ty::Option>(r)) return ty::option(zonk(ty_as<Ty::Option>(r).inner, default_unresolved));
    if (ty_is<Ty::Record>(r)) {
      std::vector<TyField> fields;
      for (const auto& [l, f] : ty_as<Ty::Record>(r).fields)
        fields.emplace_back(l, zonk(f, default_unresolved));
      return ty::record(std::move(fields));
    }
    return r;
  }

  // True if an unresolved base-kinded variable occurs in t (post-resolve).
  bool has_base_kinded_var(const TyPtr& t) const {
    TyPtr r = resolve(t);
    if (ty_is<Ty::Var>(r)) return vars_[ty_as<Ty::Var>(r).id].kind != VarKind::Any;
    if (ty_is<Ty::Set>(r)) return has_base_kinded_var(ty_as<Ty::Set>(r).elem);
    if (ty_is<Ty::Option>(r)) return has_base_kinded_var(ty_as<Ty::Option>(r).inner);
    if (ty_is<Ty::Record>(r)) {
      for (const auto& [l, f] : ty_as<Ty::Record>(r).fields)
        if (has_base_kinded_var(f)) return true;
    }
    return false;
  }

  TErr unify(TyPtr a, TyPtr b);

  const std::unordered_map<const Term*, TyPtr>& raw_annots() const { return annots_; }

 private:
  struct VarInfo {
    TyPtr bound;
    VarKind kind;
  };

  Mode mode_;
  const Schema& schema_;
  bool record_annots_;
  std::vector<VarInfo> vars_;
  std::unordered_map<const Term*, TyPtr> annots_;

  void note(const TermPtr& t, const TyPtr& ty) {
    if (record_annots_) annots_[t.get()] = ty;
  }

  TErr gate(const TermPtr& t) {
    bool opt_form = is<Term::NoneLit>(t) || is<Term::SomeLit>(t) || is<Term::Case>(t);
    bool null_form = is<Term::NullLit>(t) || is<Term::IsNull>(t);
    if (opt_form && mode_ != Mode::NRC_OPT)
      return mk_err(TypeError::Kind::ModeViolation,
                    "option constructs are only available in mode nrc_opt");
    if (null_form && mode_ != Mode::NRC_NULL)
      return mk_err(TypeError::Kind::ModeViolation,
                    "null constructs are only available in mode nrc_null");
    return std::nullopt;
  }

  bool occurs(int id, const TyPtr& t) const {
    TyPtr r = resolve(t);
    if (ty_is<Ty::Var>(r)) return ty_as<Ty::Var>(r).id == id;
    if (ty_is<Ty::Set>(r)) return occurs(id, ty_as<Ty::Set>(r).elem);
    if (ty_is<Ty::Option>(r)) return occurs(id, ty_as<Ty::Option>(r).inner);
    if (ty_is<Ty::Record>(r)) {
      for (const auto& [l, f] : ty_as<Ty::Record>(r).fields)
        if (occurs(id, f)) return true;
    }
    return false;
  }

  TErr bind_var(int id, const TyPtr& t) {
    VarKind kind = vars_[id].kind;
    if (kind != VarKind::Any) {
      if (!ty_is<Ty::Base>(t))
        return mk_err(TypeError::Kind::NullAtNonBase,
                      "null is only allowed at base types, required here at " +
                          pretty_ty(zonk(t, false)));
      if (kind == VarKind::NumBase) {
        BaseTy b = ty_as<Ty::Base>(t).b;
        if (b != BaseTy::Int && b != BaseTy::Float)
          return mk_err(TypeError::Kind::Mismatch,
                        std::string("arithmetic requires int or float, got ") + base_ty_name(b));
      }
    }
    if (occurs(id, t))
      return mk_err(TypeError::Kind::Mismatch, "infinite type in unification");
    vars_[id].bound = t;
    return std::nullopt;
  }
};

TErr Checker::unify(TyPtr a, TyPtr b) {
  a = resolve(std::move(a));
  b = resolve(std::move(b));
  bool va = ty_is<Ty::Var>(a), vb = ty_is<Ty::Var>(b);
  if (va && vb) {
    int ia = ty_as<Ty::Var>(a).id, ib = ty_as<Ty::Var>(b).id;
    if (ia == ib) return std::nullopt;
    vars_[ib].kind = kind_meet(vars_[ia].kind, vars_[ib].kind);
    vars_[ia].bound = b;
    return std::nullopt;
  }
  if (va) return bind_var(ty_as<Ty::Var>(a).id, b);
  if (vb) return bind_var(ty_as<Ty::Var>(b).id, a);

  if (a->node.index() != b->node.index())
    return mk_err(TypeError::Kind::Mismatch, "expected " + pretty_ty(zonk(a, false)) + ", got " +
                                                 pretty_ty(zonk(b, false)));
  if (ty_is<Ty::Base>(a)) {
    if (ty_as<Ty::Base>(a).b != ty_as<Ty::Base>(b).b)
      return mk_err(TypeError::Kind::Mismatch, std::string("expected ") + base_ty_name(ty_as<Ty::Base>(a).b) +
                                                   ", got " + base_ty_name(ty_as<Ty::Base>(b).b));
    return std::nullopt;
  }
  if (ty_is<Ty::Set>(a)) return unify(ty_as<Ty::Set>(a).elem, ty_as<Ty::Set>(b).elem);
  if (ty_is<Ty::Option>(a)) return unify(ty_as<Ty::Option>(a).inner, ty_as<Ty::Option>(b).inner);

  const auto& fa = ty_as<Ty::Record>(a).fields;
  const auto& fb = ty_as<Ty::Record>(b).fields;
  if (fa.size() != fb.size())
    return mk_err(TypeError::Kind::Mismatch,
                  "record types have different field counts: " + pretty_ty(zonk(a, false)) +
                      " vs " + pretty_ty(zonk(b, false)));
  std::map<std::string, TyPtr> mb;
  for (const auto& [l, f] : fb) mb[l] = f;
  for (const auto& [l, f] : fa) {
    auto it = mb.find(l);
    if (it == mb.end())
      return mk_err(TypeError::Kind::Mismatch,
                    "record field '" + l + "' missing in " + pretty_ty(zonk(b, false)));
    if (auto e = unify(f, it->second)) return e;
  }
  return std::nullopt;
}

Result<TyPtr, TypeError> Checker::infer(TypeEnv& env, const TermPtr& t) {
  if (auto e = gate(t)) return *e;

  if (is<Term::Var>(t)) {
    const auto* ty = env.lookup(as<Term::Var>(t).name);
    if (!ty)
      return mk_err(TypeError::Kind::UnboundVar, "unbound variable '" + as<Term::Var>(t).name + "'");
    note(t, *ty);
    return *ty;
  }
  if (is<Term::Const>(t)) {
    TyPtr r = ty::base(as<Term::Const>(t).c.ty);
    note(t, r);
    return r;
  }
  if (is<Term::Prim>(t)) {
    const auto& p = as<Term::Prim>(t);
    if (!is_known_prim(p.op))
      return mk_err(TypeError::Kind::Mismatch, "unknown primitive '" + p.op + "'");
    if (static_cast<int>(p.args.size()) != prim_arity(p.op))
      return mk_err(TypeError::Kind::ArityMismatch,
                    "primitive '" + p.op + "' expects " + std::to_string(prim_arity(p.op)) +
                        " arguments, got " + std::to_string(p.args.size()));
    Strictness strict = *prim_strictness(p.op);
    TyPtr result;
    if (strict == Strictness::ThreeValued) {
      for (const auto& arg : p.args) {
        auto r = infer(env, arg);
        if (!r) return r;
        if (auto e = unify(r.value(), ty::bool_())) return *e;
      }
      result = ty::bool_();
    } else {
      bool arith = p.op == "+" || p.op == "-" || p.op == "*" || p.op == "/";
      TyPtr shared = fresh(arith ? VarKind::NumBase : VarKind::AnyBase);
      for (const auto& arg : p.args) {
        auto r = infer(env, arg);
        if (!r) return r;
        TyPtr at = resolve(r.value());
        if (!ty_is<Ty::Var>(at) && !ty_is<Ty::Base>(at))
          return mk_err(TypeError::Kind::Mismatch, "primitive '" + p.op +
                                                       "' expects base-typed arguments, got " +
                                                       pretty_ty(zonk(at, false)));
        if (auto e = unify(shared, at)) return *e;
      }
      result = arith ? shared : ty::bool_();
    }
    note(t, result);
    return result;
  }
  if (is<Term::RecordCons>(t)) {
    const auto& fields = as<Term::RecordCons>(t).fields;
    std::set<std::string> seen;
    std::vector<TyField> tys;
    for (const auto& [label, value] : fields) {
      if (!seen.insert(label).second)
        return mk_err(TypeError::Kind::Mismatch, "duplicate record label '" + label + "'");
      auto r = infer(env, value);
      if (!r) return r;
      tys.emplace_back(label, r.value());
    }
    TyPtr r = ty::record(std::move(tys));
    note(t, r);
    return r;
  }
  if (is<Term::Project>(t)) {
    const auto& p = as<Term::Project>(t);
    auto r = infer(env, p.rec);
    if (!r) return r;
    TyPtr rt = resolve(r.value());
    if (ty_is<Ty::Var>(rt))
      return mk_err(TypeError::Kind::Mismatch,
                    "ambiguous record type in projection '." + p.label + "'");
    if (!ty_is<Ty::Record>(rt))
      return mk_err(TypeError::Kind::Mismatch,
                    "projection '." + p.label + "' applied to " + pretty_ty(zonk(rt, false)));
    for (const auto& [l, f] : ty_as<Ty::Record>(rt).fields) {
      if (l == p.label) {
        note(t, f);
        return f;
      }
    }
    return mk_err(TypeError::Kind::FieldMissing,
                  "record " + pretty_ty(zonk(rt, false)) + " has no field '" + p.label + "'");
  }
  if (is<Term::EmptySet>(t)) {
    TyPtr r = ty::set(fresh(VarKind::Any));
    note(t, r);
    return r;
  }
  if (is<Term::Singleton>(t)) {
    auto r = infer(env, as<Term::Singleton>(t).elem);
    if (!r) return r;
    TyPtr s = ty::set(r.value());
    note(t, s);
    return s;
  }
  if (is<Term::Union>(t)) {
    const auto& u = as<Term::Union>(t);
    auto r1 = infer(env, u.lhs);
    if (!r1) return r1;
    auto r2 = infer(env, u.rhs);
    if (!r2) return r2;
    if (auto e = unify(r1.value(), r2.value())) return *e;
    if (auto e = unify(r1.value(), ty::set(fresh(VarKind::Any)))) return *e;
    note(t, resolve(r1.value()));
    return resolve(r1.value());
  }
  if (is<Term::Comp>(t)) {
    const auto& c = as<Term::Comp>(t);
    auto rs = infer(env, c.source);
    if (!rs) return rs;
    TyPtr elem = fresh(VarKind::Any);
    if (auto e = unify(rs.value(), ty::set(elem))) return *e;
    env.bind(c.var, elem);
    auto rh = infer(env, c.head);
    env.pop();
    if (!rh) return rh;
    if (auto e = unify(rh.value(), ty::set(fresh(VarKind::Any)))) return *e;
    note(t, resolve(rh.value()));
    return resolve(rh.value());
  }
  if (is<Term::Where>(t)) {
    const auto& w = as<Term::Where>(t);
    auto rc = infer(env, w.cond);
    if (!rc) return rc;
    if (auto e = unify(rc.value(), ty::bool_())) return *e;
    auto rb = infer(env, w.body);
    if (!rb) return rb;
    if (auto e = unify(rb.value(), ty::set(fresh(VarKind::Any)))) return *e;
    note(t, resolve(rb.value()));
    return resolve(rb.value());
  }
  if (is<Term::IsEmpty>(t)) {
    auto r = infer(env, as<Term::IsEmpty>(t).arg);
    if (!r) return r;
    if (auto e = unify(r.value(), ty::set(fresh(VarKind::Any)))) return *e;
    note(t, ty::bool_());
    return ty::bool_();
  }
  if (is<Term::If>(t)) {
    const auto& f = as<Term::If>(t);
    auto rc = infer(env, f.cond);
    if (!rc) return rc;
    if (auto e = unify(rc.value(), ty::bool_())) return *e;
    auto r1 = infer(env, f.then_branch);
    if (!r1) return r1;
    auto r2 = infer(env, f.else_branch);
    if (!r2) return r2;
    if (auto e = unify(r1.value(), r2.value())) return *e;
    note(t, resolve(r1.value()));
    return resolve(r1.value());
  }
  if (is<Term::NoneLit>(t)) {
    TyPtr r = ty::option(fresh(VarKind::Any));
    note(t, r);
    return r;
  }
  if (is<Term::SomeLit>(t)) {
    auto r = infer(env, as<Term::SomeLit>(t).arg);
    if (!r) return r;
    TyPtr o = ty::option(r.value());
    note(t, o);
    return o;
  }
  if (is<Term::Case>(t)) {
    const auto& c = as<Term::Case>(t);
    auto rs = infer(env, c.scrut);
    if (!rs) return rs;
    TyPtr inner = fresh(VarKind::Any);
    if (auto e = unify(rs.value(), ty::option(inner))) return *e;
    auto r1 = infer(env, c.none_branch);
    if (!r1) return r1;
    env.bind(c.var, inner);
    auto r2 = infer(env, c.some_branch);
    env.pop();
    if (!r2) return r2;
    if (auto e = unify(r1.value(), r2.value())) return *e;
    note(t, resolve(r1.value()));
    return resolve(r1.value());
  }
  if (is<Term::NullLit>(t)) {
    TyPtr r = fresh(VarKind::AnyBase);
    note(t, r);
    return r;
  }
  if (is<Term::IsNull>(t)) {
    auto r = infer(env, as<Term::IsNull>(t).arg);
    if (!r) return r;
    TyPtr at = resolve(r.value());
    if (!ty_is<Ty::Var>(at) && !ty_is<Ty::Base>(at))
      return mk_err(TypeError::Kind::Mismatch,
                    "isnull expects a base-typed argument, got " + pretty_ty(zonk(at, false)));
    if (auto e = unify(at, fresh(VarKind::AnyBase))) return *e;
    note(t, ty::bool_());
    return ty::bool_();
  }
  if (is<Term::TableRef>(t)) {
    const auto& name = as<Term::TableRef>(t).name;
    const TableDecl* table = schema_.find_table(name);
    if (!table)
      return mk_err(TypeError::Kind::UnknownTable, "unknown table '" + name + "'");
    if (mode_ == Mode::NRC) {
      for (const auto& col : table->columns) {
        if (col.nullable)
          return mk_err(TypeError::Kind::ModeViolation,
                        "table '" + name + "' has nullable column '" + col.name +
                            "'; plain nrc cannot represent nulls");
      }
    }
    TyPtr r = ty::set(table_row_ty(*table, mode_));
    note(t, r);
    return r;
  }
  return mk_err(TypeError::Kind::Mismatch, "unhandled term form");
}

TErr Checker::check(TypeEnv& env, const TermPtr& t, TyPtr expected) {
  if (auto e = gate(t)) return e;
  expected = resolve(std::move(expected));

  if (is<Term::NullLit>(t)) {
    if (ty_is<Ty::Var>(expected)) {
      auto e = unify(expected, fresh(VarKind::AnyBase));
      if (!e) note(t, expected);
      return e;
    }
    if (!ty_is<Ty::Base>(expected))
      return mk_err(TypeError::Kind::NullAtNonBase,
                    "null is only allowed at base types, required here at " +
                        pretty_ty(zonk(expected, false)));
    note(t, expected);
    return std::nullopt;
  }
  if (is<Term::NoneLit>(t)) {
    if (ty_is<Ty::Var>(expected)) {
      auto e = unify(expected, ty::option(fresh(VarKind::Any)));
      if (!e) note(t, resolve(expected));
      return e;
    }
    if (!ty_is<Ty::Option>(expected))
      return mk_err(TypeError::Kind::Mismatch,
                    "none requires an option type, required here at " +
                        pretty_ty(zonk(expected, false)));
    note(t, expected);
    return std::nullopt;
  }
  if (is<Term::SomeLit>(t) && ty_is<Ty::Option>(expected)) {
    auto e = check(env, as<Term::SomeLit>(t).arg, ty_as<Ty::Option>(expected).inner);
    if (!e) note(t, expected);
    return e;
  }
  if (is<Term::Singleton>(t) && ty_is<Ty::Set>(expected)) {
    auto e = check(env, as<Term::Singleton>(t).elem, ty_as<Ty::Set>(expected).elem);
    if (!e) note(t, expected);
    return e;
  }
  if (is<Term::EmptySet>(t) && ty_is<Ty::Set>(expected)) {
    note(t, expected);
    return std::nullopt;
  }
  if (is<Term::Union>(t) && ty_is<Ty::Set>(expected)) {
    const auto& u = as<Term::Union>(t);
    if (auto e = check(env, u.lhs, expected)) return e;
    if (auto e = check(env, u.rhs, expected)) return e;
    note(t, expected);
    return std::nullopt;
  }
  if (is<Term::Where>(t) && ty_is<Ty::Set>(expected)) {
    const auto& w = as<Term::Where>(t);
    if (auto e = check(env, w.cond, ty::bool_())) return e;
    if (auto e = check(env, w.body, expected)) return e;
    note(t, expected);
    return std::nullopt;
  }
  if (is<Term::Comp>(t) && ty_is<Ty::Set>(expected)) {
    const auto& c = as<Term::Comp>(t);
    auto rs = infer(env, c.source);
    if (!rs) return rs.error();
    TyPtr elem = fresh(VarKind::Any);
    if (auto e = unify(rs.value(), ty::set(elem))) return e;
    env.bind(c.var, elem);
    auto e = check(env, c.head, expected);
    env.pop();
    if (!e) note(t, expected);
    return e;
  }
  if (is<Term::If>(t)) {
    const auto& f = as<Term::If>(t);
    if (auto e = check(env, f.cond, ty::bool_())) return e;
    if (auto e = check(env, f.then_branch, expected)) return e;
    if (auto e = check(env, f.else_branch, expected)) return e;
    note(t, expected);
    return std::nullopt;
  }
  if (is<Term::Case>(t)) {
    const auto& c = as<Term::Case>(t);
    auto rs = infer(env, c.scrut);
    if (!rs) return rs.error();
    TyPtr inner = fresh(VarKind::Any);
    if (auto e = unify(rs.value(), ty::option(inner))) return e;
    if (auto e = check(env, c.none_branch, expected)) return e;
    env.bind(c.var, inner);
    auto e = check(env, c.some_branch, expected);
    env.pop();
    if (!e) note(t, expected);
    return e;
  }
  if (is<Term::RecordCons>(t) && ty_is<Ty::Record>(expected)) {
    const auto& fields = as<Term::RecordCons>(t).fields;
    const auto& want = ty_as<Ty::Record>(expected).fields;
    if (fields.size() != want.size())
      return mk_err(TypeError::Kind::Mismatch,
                    "record has " + std::to_string(fields.size()) + " fields, expected " +
                        pretty_ty(zonk(expected, false)));
    std::map<std::string, TyPtr> want_by_label;
    for (const auto& [l, f] : want) want_by_label[l] = f;
    std::set<std::string> seen;
    for (const auto& [label, value] : fields) {
      if (!seen.insert(label).second)
        return mk_err(TypeError::Kind::Mismatch, "duplicate record label '" + label + "'");
      auto it = want_by_label.find(label);
      if (it == want_by_label.end())
        return mk_err(TypeError::Kind::Mismatch, "unexpected record field '" + label +
                                                     "', expected " + pretty_ty(zonk(expected, false)));
      if (auto e = check(env, value, it->second)) return e;
    }
    note(t, expected);
    return std::nullopt;
  }

  auto r = infer(env, t);
  if (!r) return r.error();
  return unify(r.value(), expected);
}

// Shared finalization: reject types that keep inference variables at the top.
std::optional<TypeError> finalize_check(const Checker& ck, const TyPtr& result) {
  TyPtr z = ck.zonk(result, false);
  if (!ty_contains_var(z)) return std::nullopt;
  if (ty_is<Ty::Var>(z))
    return mk_err(TypeError::Kind::Mismatch, "ambiguous type: cannot be determined from context");
  if (ck.has_base_kinded_var(z))
    return mk_err(TypeError::Kind::NullAtNonBase,
                  "null at undetermined base type inside " + pretty_ty(z));
  return mk_err(TypeError::Kind::Mismatch,
                "ambiguous type: " + pretty_ty(z) + " has undetermined parts");
}

}  // namespace

Result<TyPtr, TypeError> typecheck(Mode mode, const Schema& schema, const TypeEnv& env,
                                   const TermPtr& m, const TyPtr& expected) {
  Checker ck(mode, schema, false);
  TypeEnv scratch = env;
  TyPtr result;
  if (expected) {
    if (auto e = ck.check(scratch, m, expected)) return *e;
    result = expected;
  } else {
    auto r = ck.infer(scratch, m);
    if (!r) return r;
    result = r.value();
  }
  if (auto e = finalize_check(ck, result)) return *e;
  return ck.zonk(result, false);
}

Result<Annotations, TypeError> annotate(Mode mode, const Schema& schema, const TypeEnv& env,
                                        const TermPtr& m, const TyPtr& expected,
                                        bool default_unresolved) {
  Checker ck(mode, schema, true);
  TypeEnv scratch = env;
  TyPtr result;
  if (expected) {
    if (auto e = ck.check(scratch, m, expected)) return *e;
    result = expected;
  } else {
    auto r = ck.infer(scratch, m);
    if (!r) return r.error();
    result = r.value();
  }
  if (auto e = finalize_check(ck, result)) return *e;
  Annotations out;
  out.root = ck.zonk(result, default_unresolved);
  for (const auto& [node, ty] : ck.raw_annots())
    out.types[node] = ck.zonk(ty, default_unresolved);
  return out;
}

std::optional<TyPtr> infer_local(Mode mode, const Schema& schema,
                                 const std::vector<std::pair<std::string, TyPtr>>& bindings,
                                 const TermPtr& m) {
  Checker ck(mode, schema, false);
  TypeEnv env;
  for (const auto& [name, ty] : bindings) env.bind(name, ty);
  auto r = ck.infer(env, m);
  if (!r) return std::nullopt;
  return ck.zonk(r.value(), false);
}

bool check_subject_reduction(Mode mode, const Schema& schema, const TermPtr& m,
                             const TermPtr& m_prime) {
  TypeEnv env;
  auto r = typecheck(mode, schema, env, m);
  if (!r) return false;
  auto r2 = typecheck(mode, schema, env, m_prime, r.value());
  return r2.ok();
}

}  // namespace nrc
