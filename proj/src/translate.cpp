#include "nullnrc/translate.hpp"

#include "nullnrc/eval.hpp"

namespace nrc {

TyPtr opt_to_nrc_ty(const TyPtr& t) {
  if (ty_is<Ty::Option>(t)) {
    return ty::record({{"isnull", ty::bool_()}, {"val", opt_to_nrc_ty(ty_as<Ty::Option>(t).inner)}});
  }
  if (ty_is<Ty::Set>(t)) return ty::set(opt_to_nrc_ty(ty_as<Ty::Set>(t).elem));
  if (ty_is<Ty::Record>(t)) {
    std::vector<TyField> fields;
    for (const auto& [label, field] : ty_as<Ty::Record>(t).fields)
      fields.emplace_back(label, opt_to_nrc_ty(field));
    return ty::record(std::move(fields));
  }
  return t;
}

TyPtr null_to_opt_ty(const TyPtr& t) {
  if (ty_is<Ty::Base>(t)) return ty::option(t);
  if (ty_is<Ty::Set>(t)) return ty::set(null_to_opt_ty(ty_as<Ty::Set>(t).elem));
  if (ty_is<Ty::Record>(t)) {
    std::vector<TyField> fields;
    for (const auto& [label, field] : ty_as<Ty::Record>(t).fields)
      fields.emplace_back(label, null_to_opt_ty(field));
    return ty::record(std::move(fields));
  }
  return t;
}

TermPtr default_term(const TyPtr& t) {
  using namespace term;
  if (ty_is<Ty::Base>(t)) {
    switch (ty_as<Ty::Base>(t).b) {
      case BaseTy::Int: return int_(0);
      case BaseTy::Bool: return bool_(false);
      case BaseTy::String: return str("");
      case BaseTy::Float: return flt(0.0);
    }
  }
  if (ty_is<Ty::Set>(t)) return empty_set();
  if (ty_is<Ty::Option>(t)) return none();
  if (ty_is<Ty::Record>(t)) {
    std::vector<TermField> fields;
    for (const auto& [label, field] : ty_as<Ty::Record>(t).fields)
      fields.emplace_back(label, default_term(field));
    return record(std::move(fields));
  }
  return int_(0);
}

// ---------------------------------------------------------------------------
// Lifted primitives
// ---------------------------------------------------------------------------

namespace {

std::string hole(int i) { return "$" + std::to_string(i); }

}  // namespace

LiftedPrim lift_prim(const PrimSig& sig) {
  using namespace term;
  int arity = static_cast<int>(sig.arg_types.size());
  if (sig.strictness == Strictness::ThreeValued) {
    if (sig.name == "not") {
      TermPtr body = case_(var(hole(0)), none(), "x", some(prim("not", {var("x")})));
      return {sig.name, 1, body};
    }
    if (sig.name == "and") {
      // none & none -> none; a literal false on either side wins.
      TermPtr rhs_when_none =
          case_(var(hole(1)), none(), "y", if_(var("y"), none(), some(bool_(false))));
      TermPtr rhs_when_some =
          case_(var(hole(1)), if_(var("x"), none(), some(bool_(false))), "y",
                some(prim("and", {var("x"), var("y")})));
      return {sig.name, 2, case_(var(hole(0)), rhs_when_none, "x", rhs_when_some)};
    }
    // or: dual, a literal true on either side wins.
    TermPtr rhs_when_none =
        case_(var(hole(1)), none(), "y", if_(var("y"), some(bool_(true)), none()));
    TermPtr rhs_when_some =
        case_(var(hole(1)), if_(var("x"), some(bool_(true)), none()), "y",
              some(prim("or", {var("x"), var("y")})));
    return {sig.name, 2, case_(var(hole(0)), rhs_when_none, "x", rhs_when_some)};
  }

  // Strict: nested case, any none short-circuits to none.
  std::vector<TermPtr> args;
  for (int i = 0; i < arity; i++) args.push_back(var("v" + std::to_string(i)));
  TermPtr body = some(prim(sig.name, args));
  for (int i = arity - 1; i >= 0; i--)
    body = case_(var(hole(i)), none(), "v" + std::to_string(i), body);
  return {sig.name, arity, body};
}

TermPtr instantiate_lifted(const LiftedPrim& lp, const std::vector<TermPtr>& args) {
  TermPtr t = lp.lifted;
  for (int i = 0; i < lp.arity; i++) t = subst(t, hole(i), args[i]);
  return t;
}

// ---------------------------------------------------------------------------
// NRC_opt -> NRC
// ---------------------------------------------------------------------------

namespace {

struct OptToNrc {
  const Schema& schema;
  const Annotations& ann;
  std::string error;

  TermPtr run(const TermPtr& t) {
    using namespace term;
    if (is<Term::NoneLit>(t)) {
      const TyPtr* ty = ann.of(t);
      if (!ty || !ty_is<Ty::Option>(*ty)) {
        error = "internal: none without an option annotation";
        return nullptr;
      }
      TyPtr inner = opt_to_nrc_ty(ty_as<Ty::Option>(*ty).inner);
      return record({{"isnull", bool_(true)}, {"val", default_term(inner)}});
    }
    if (is<Term::SomeLit>(t)) {
      TermPtr arg = run(as<Term::SomeLit>(t).arg);
      if (!arg) return nullptr;
      return record({{"isnull", bool_(false)}, {"val", arg}});
    }
    if (is<Term::Case>(t)) {
      const auto& c = as<Term::Case>(t);
      TermPtr scrut = run(c.scrut);
      TermPtr none_branch = run(c.none_branch);
      TermPtr some_branch = run(c.some_branch);
      if (!scrut || !none_branch || !some_branch) return nullptr;
      return if_(project(scrut, "isnull"), none_branch,
                 subst(some_branch, c.var, project(scrut, "val")));
    }
    if (is<Term::TableRef>(t)) {
      const TableDecl* table = schema.find_table(as<Term::TableRef>(t).name);
      if (table) {
        for (const auto& col : table->columns) {
          if (col.nullable) {
            error = "table '" + table->name + "' has nullable column '" + col.name +
                    "'; its option-typed row has no plain-NRC table form";
            return nullptr;
          }
        }
      }
      return t;
    }
    int n = child_count(t);
    TermPtr cur = t;
    for (int i = 0; i < n; i++) {
      TermPtr sub = run(child_at(cur, i));
      if (!sub) return nullptr;
      cur = with_child(cur, i, sub);
    }
    return cur;
  }
};

}  // namespace

Result<TermPtr, std::string> opt_to_nrc(const TermPtr& m, const Schema& schema,
                                        const TyPtr& expected) {
  TypeEnv env;
  auto ann = annotate(Mode::NRC_OPT, schema, env, m, expected);
  if (!ann.ok()) return "input is not a well-typed nrc_opt term: " + format_type_error(ann.error());
  OptToNrc tr{schema, ann.value(), {}};
  TermPtr out = tr.run(m);
  if (!out) return tr.error;
  return out;
}

// ---------------------------------------------------------------------------
// NRC_null -> NRC_opt
// ---------------------------------------------------------------------------

namespace {

TermPtr is_true_of(TermPtr e) {
  using namespace term;
  std::string y = fresh_name("b", free_vars(e));
  return case_(std::move(e), bool_(false), y, var(y));
}

struct NullToOpt {
  const Schema& schema;
  std::string error;

  TermPtr run(const TermPtr& t) {
    using namespace term;
    if (is<Term::Const>(t)) return some(t);
    if (is<Term::NullLit>(t)) return none();
    if (is<Term::Prim>(t)) {
      const auto& p = as<Term::Prim>(t);
      const auto& sigs = prim_signatures(p.op);
      if (sigs.empty()) {
        error = "unknown primitive '" + p.op + "'";
        return nullptr;
      }
      std::vector<TermPtr> args;
      for (const auto& arg : p.args) {
        TermPtr a = run(arg);
        if (!a) return nullptr;
        args.push_back(std::move(a));
      }
      return instantiate_lifted(lift_prim(sigs.front()), args);
    }
    if (is<Term::IsNull>(t)) {
      TermPtr arg = run(as<Term::IsNull>(t).arg);
      if (!arg) return nullptr;
      std::string y = fresh_name("v", free_vars(arg));
      return some(case_(arg, bool_(true), y, bool_(false)));
    }
    if (is<Term::If>(t)) {
      const auto& f = as<Term::If>(t);
      TermPtr cond = run(f.cond);
      TermPtr then_branch = run(f.then_branch);
      TermPtr else_branch = run(f.else_branch);
      if (!cond || !then_branch || !else_branch) return nullptr;
      return if_(is_true_of(cond), then_branch, else_branch);
    }
    if (is<Term::Where>(t)) {
      const auto& w = as<Term::Where>(t);
      TermPtr body = run(w.body);
      TermPtr cond = run(w.cond);
      if (!body || !cond) return nullptr;
      return where(body, is_true_of(cond));
    }
    if (is<Term::IsEmpty>(t)) {
      TermPtr arg = run(as<Term::IsEmpty>(t).arg);
      if (!arg) return nullptr;
      return some(is_empty(arg));  // empty() itself never returns null
    }
    if (is<Term::TableRef>(t)) {
      const TableDecl* table = schema.find_table(as<Term::TableRef>(t).name);
      if (!table) {
        error = "unknown table '" + as<Term::TableRef>(t).name + "'";
        return nullptr;
      }
      std::string x = fresh_name("r", {});
      std::vector<TermField> fields;
      for (const auto& col : table->columns) {
        TermPtr cell = project(var(x), col.name);
        fields.emplace_back(col.name, col.nullable ? cell : some(cell));
      }
      return comp(single(record(std::move(fields))), x, t);
    }
    if (is<Term::NoneLit>(t) || is<Term::SomeLit>(t) || is<Term::Case>(t)) {
      error = "input contains option constructs; not an nrc_null term";
      return nullptr;
    }
    int n = child_count(t);
    TermPtr cur = t;
    for (int i = 0; i < n; i++) {
      TermPtr sub = run(child_at(cur, i));
      if (!sub) return nullptr;
      cur = with_child(cur, i, sub);
    }
    return cur;
  }
};

}  // namespace

Result<TermPtr, std::string> null_to_opt(const TermPtr& m, const Schema& schema) {
  NullToOpt tr{schema, {}};
  TermPtr out = tr.run(m);
  if (!out) return tr.error;
  return out;
}

// ---------------------------------------------------------------------------
// Value encodings
// ---------------------------------------------------------------------------

Value encode_null_value(const Value& v) {
  if (vis<VNull>(v)) return val::none();
  if (vis<Constant>(v)) return val::some(v);
  if (vis<VRecord>(v)) {
    std::vector<std::pair<std::string, Value>> fields;
    for (const auto& [label, field] : vas<VRecord>(v).fields)
      fields.emplace_back(label, encode_null_value(field));
    return val::record(std::move(fields));
  }
  if (vis<VSet>(v)) {
    std::vector<Value> elems;
    for (const auto& e : vas<VSet>(v).elems) elems.push_back(encode_null_value(e));
    return val::set(std::move(elems));
  }
  return v;
}

Value flatten_opt_value(const Value& v, const TyPtr& ty) {
  if (ty_is<Ty::Option>(ty)) {
    const TyPtr& inner = ty_as<Ty::Option>(ty).inner;
    if (vis<VNone>(v))
      return val::record(
          {{"isnull", val::bool_(true)}, {"val", default_value(opt_to_nrc_ty(inner))}});
    return val::record(
        {{"isnull", val::bool_(false)}, {"val", flatten_opt_value(*vas<VSome>(v).payload, inner)}});
  }
  if (ty_is<Ty::Set>(ty)) {
    std::vector<Value> elems;
    for (const auto& e : vas<VSet>(v).elems)
      elems.push_back(flatten_opt_value(e, ty_as<Ty::Set>(ty).elem));
    return val::set(std::move(elems));
  }
  if (ty_is<Ty::Record>(ty)) {
    const auto& field_tys = ty_as<Ty::Record>(ty).fields;
    std::vector<std::pair<std::string, Value>> fields;
    for (const auto& [label, field] : vas<VRecord>(v).fields) {
      TyPtr fty;
      for (const auto& [l, ft] : field_tys)
        if (l == label) fty = ft;
      fields.emplace_back(label, fty ? flatten_opt_value(field, fty) : field);
    }
    return val::record(std::move(fields));
  }
  return v;
}

}  // namespace nrc
