#include "nullnrc/eval.hpp"

#include <cstdint>
#include <limits>

#include "nullnrc/typing.hpp"

namespace nrc {

const char* eval_error_kind_name(EvalError::Kind k) {
  switch (k) {
    case EvalError::Kind::UnboundVar: return "UnboundVar";
    case EvalError::Kind::StuckTerm: return "StuckTerm";
    case EvalError::Kind::DivideByZero: return "DivideByZero";
    case EvalError::Kind::UnknownTable: return "UnknownTable";
  }
  return "?";
}

std::string format_eval_error(const EvalError& e) {
  return std::string(eval_error_kind_name(e.kind)) + ": " + e.detail;
}

const Value* ValueEnv::lookup(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

K3 k3_and(K3 a, K3 b) { return static_cast<K3>(std::min(static_cast<int>(a), static_cast<int>(b))); }
K3 k3_or(K3 a, K3 b) { return static_cast<K3>(std::max(static_cast<int>(a), static_cast<int>(b))); }
K3 k3_not(K3 a) {
  if (a == K3::Unknown) return K3::Unknown;
  return a == K3::True ? K3::False : K3::True;
}

K3Tables k3_tables() {
  K3Tables t{};
  const K3 all[3] = {K3::False, K3::Unknown, K3::True};
  for (K3 a : all) {
    t.not_table[static_cast<int>(a)] = k3_not(a);
    for (K3 b : all) {
      t.and_table[static_cast<int>(a)][static_cast<int>(b)] = k3_and(a, b);
      t.or_table[static_cast<int>(a)][static_cast<int>(b)] = k3_or(a, b);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Primitive application on constants
// ---------------------------------------------------------------------------

namespace {

EvalError mk_err(EvalError::Kind k, std::string detail) { return {k, std::move(detail)}; }

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

int compare_for_prim(const Constant& a, const Constant& b) {
  switch (a.ty) {
    case BaseTy::Int: {
      auto x = a.as_int(), y = b.as_int();
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case BaseTy::Bool: {
      int x = a.as_bool(), y = b.as_bool();
      return x - y;
    }
    case BaseTy::String: {
      int c = a.as_string().compare(b.as_string());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case BaseTy::Float: {
      double x = a.as_float(), y = b.as_float();
      return x < y ? -1 : (x > y ? 1 : 0);  // IEEE order; NaN never reaches here
    }
  }
  return 0;
}

}  // namespace

Result<Constant, EvalError> apply_prim_constants(const std::string& op,
                                                 const std::vector<Constant>& args) {
  if (op == "not") return Constant::make_bool(!args[0].as_bool());
  if (op == "and") return Constant::make_bool(args[0].as_bool() && args[1].as_bool());
  if (op == "or") return Constant::make_bool(args[0].as_bool() || args[1].as_bool());

  const Constant& a = args[0];
  const Constant& b = args[1];
  if (op == "+" || op == "-" || op == "*" || op == "/") {
    if (a.ty == BaseTy::Int) {
      std::int64_t x = a.as_int(), y = b.as_int();
      if (op == "+") return Constant::make_int(wrap_add(x, y));
      if (op == "-") return Constant::make_int(wrap_sub(x, y));
      if (op == "*") return Constant::make_int(wrap_mul(x, y));
      if (y == 0) return mk_err(EvalError::Kind::DivideByZero, "integer division by zero");
      if (x == std::numeric_limits<std::int64_t>::min() && y == -1)
        return Constant::make_int(x);  // wraps
      return Constant::make_int(x / y);
    }
    double x = a.as_float(), y = b.as_float();
    if (op == "+") return Constant::make_float(x + y);
    if (op == "-") return Constant::make_float(x - y);
    if (op == "*") return Constant::make_float(x * y);
    if (y == 0.0) return mk_err(EvalError::Kind::DivideByZero, "float division by zero");
    return Constant::make_float(x / y);
  }

  if (op == "=") {
    if (a.ty == BaseTy::Float) return Constant::make_bool(a.as_float() == b.as_float());
    return Constant::make_bool(compare_for_prim(a, b) == 0);
  }
  if (op == "<>") {
    if (a.ty == BaseTy::Float) return Constant::make_bool(a.as_float() != b.as_float());
    return Constant::make_bool(compare_for_prim(a, b) != 0);
  }
  int c = compare_for_prim(a, b);
  if (op == "<") return Constant::make_bool(c < 0);
  if (op == "<=") return Constant::make_bool(c <= 0);
  if (op == ">") return Constant::make_bool(c > 0);
  if (op == ">=") return Constant::make_bool(c >= 0);
  return mk_err(EvalError::Kind::StuckTerm, "unknown primitive '" + op + "'");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

using EvalResult = Result<Value, EvalError>;

class Evaluator {
 public:
  Evaluator(Mode mode, const Database& db) : mode_(mode), db_(db) {}

  EvalResult run(ValueEnv& env, const TermPtr& t) {
    if (is<Term::Var>(t)) {
      const Value* v = env.lookup(as<Term::Var>(t).name);
      if (!v)
        return mk_err(EvalError::Kind::UnboundVar,
                      "unbound variable '" + as<Term::Var>(t).name + "'");
      return *v;
    }
    if (is<Term::Const>(t)) return val::cnst(as<Term::Const>(t).c);
    if (is<Term::Prim>(t)) return prim(env, as<Term::Prim>(t));
    if (is<Term::RecordCons>(t)) {
      std::vector<std::pair<std::string, Value>> fields;
      for (const auto& [label, sub] : as<Term::RecordCons>(t).fields) {
        auto v = run(env, sub);
        if (!v) return v;
        fields.emplace_back(label, std::move(v.value()));
      }
      return val::record(std::move(fields));
    }
    if (is<Term::Project>(t)) {
      const auto& p = as<Term::Project>(t);
      auto v = run(env, p.rec);
      if (!v) return v;
      if (!vis<VRecord>(v.value()))
        return mk_err(EvalError::Kind::StuckTerm, "projection from a non-record value");
      for (const auto& [label, field] : vas<VRecord>(v.value()).fields)
        if (label == p.label) return field;
      return mk_err(EvalError::Kind::StuckTerm, "record value has no field '" + p.label + "'");
    }
    if (is<Term::EmptySet>(t)) return val::set({});
    if (is<Term::Singleton>(t)) {
      auto v = run(env, as<Term::Singleton>(t).elem);
      if (!v) return v;
      return val::set({std::move(v.value())});
    }
    if (is<Term::Union>(t)) {
      const auto& u = as<Term::Union>(t);
      auto l = run(env, u.lhs);
      if (!l) return l;
      auto r = run(env, u.rhs);
      if (!r) return r;
      if (!vis<VSet>(l.value()) || !vis<VSet>(r.value()))
        return mk_err(EvalError::Kind::StuckTerm, "union of non-set values");
      std::vector<Value> elems = vas<VSet>(l.value()).elems;
      const auto& more = vas<VSet>(r.value()).elems;
      elems.insert(elems.end(), more.begin(), more.end());
      return val::set(std::move(elems));
    }
    if (is<Term::Comp>(t)) {
      const auto& c = as<Term::Comp>(t);
      auto src = run(env, c.source);
      if (!src) return src;
      if (!vis<VSet>(src.value()))
        return mk_err(EvalError::Kind::StuckTerm, "comprehension over a non-set value");
      std::vector<Value> elems;
      for (const Value& item : vas<VSet>(src.value()).elems) {
        env.bind(c.var, item);
        auto h = run(env, c.head);
        env.pop();
        if (!h) return h;
        if (!vis<VSet>(h.value()))
          return mk_err(EvalError::Kind::StuckTerm, "comprehension head is not a set");
        const auto& hs = vas<VSet>(h.value()).elems;
        elems.insert(elems.end(), hs.begin(), hs.end());
      }
      return val::set(std::move(elems));
    }
    if (is<Term::Where>(t)) {
      const auto& w = as<Term::Where>(t);
      auto c = run(env, w.cond);
      if (!c) return c;
      if (vis<VNull>(c.value())) return val::set({});
      if (!vis<Constant>(c.value()) || vas<Constant>(c.value()).ty != BaseTy::Bool)
        return mk_err(EvalError::Kind::StuckTerm, "where condition is not a boolean");
      if (!vas<Constant>(c.value()).as_bool()) return val::set({});
      auto body = run(env, w.body);
      if (!body) return body;
      if (!vis<VSet>(body.value()))
        return mk_err(EvalError::Kind::StuckTerm, "where body is not a set");
      return body;
    }
    if (is<Term::IsEmpty>(t)) {
      auto v = run(env, as<Term::IsEmpty>(t).arg);
      if (!v) return v;
      if (!vis<VSet>(v.value()))
        return mk_err(EvalError::Kind::StuckTerm, "empty() applied to a non-set value");
      return val::bool_(vas<VSet>(v.value()).elems.empty());
    }
    if (is<Term::If>(t)) {
      const auto& f = as<Term::If>(t);
      auto c = run(env, f.cond);
      if (!c) return c;
      // A null condition selects the else branch, mirroring the null-aware
      // if-splitting rewrite.
      if (vis<VNull>(c.value())) return run(env, f.else_branch);
      if (!vis<Constant>(c.value()) || vas<Constant>(c.value()).ty != BaseTy::Bool)
        return mk_err(EvalError::Kind::StuckTerm, "if condition is not a boolean");
      return run(env, vas<Constant>(c.value()).as_bool() ? f.then_branch : f.else_branch);
    }
    if (is<Term::NoneLit>(t)) return val::none();
    if (is<Term::SomeLit>(t)) {
      auto v = run(env, as<Term::SomeLit>(t).arg);
      if (!v) return v;
      return val::some(std::move(v.value()));
    }
    if (is<Term::Case>(t)) {
      const auto& c = as<Term::Case>(t);
      auto s = run(env, c.scrut);
      if (!s) return s;
      if (vis<VNone>(s.value())) return run(env, c.none_branch);
      if (!vis<VSome>(s.value()))
        return mk_err(EvalError::Kind::StuckTerm, "case scrutinee is not an option value");
      env.bind(c.var, *vas<VSome>(s.value()).payload);
      auto r = run(env, c.some_branch);
      env.pop();
      return r;
    }
    if (is<Term::NullLit>(t)) return val::null_();
    if (is<Term::IsNull>(t)) {
      auto v = run(env, as<Term::IsNull>(t).arg);
      if (!v) return v;
      if (vis<VNull>(v.value())) return val::bool_(true);
      if (vis<Constant>(v.value())) return val::bool_(false);
      return mk_err(EvalError::Kind::StuckTerm, "isnull applied to a non-base value");
    }
    if (is<Term::TableRef>(t)) return table(as<Term::TableRef>(t).name);
    return mk_err(EvalError::Kind::StuckTerm, "unhandled term form");
  }

 private:
  Mode mode_;
  const Database& db_;

  EvalResult prim(ValueEnv& env, const Term::Prim& p) {
    auto strictness = prim_strictness(p.op);
    if (!strictness)
      return mk_err(EvalError::Kind::StuckTerm, "unknown primitive '" + p.op + "'");

    std::vector<EvalResult> results;
    results.reserve(p.args.size());
    for (const auto& arg : p.args) results.push_back(run(env, arg));

    if (*strictness == Strictness::ThreeValued) {
      // Annihilators win even over an error in the other argument: the
      // rewriter's partial delta discards that argument, so evaluation
      // must agree.
      auto to_k3 = [](const EvalResult& r) -> std::optional<K3> {
        if (!r.ok()) return std::nullopt;
        if (vis<VNull>(r.value())) return K3::Unknown;
        if (vis<Constant>(r.value()) && vas<Constant>(r.value()).ty == BaseTy::Bool)
          return vas<Constant>(r.value()).as_bool() ? K3::True : K3::False;
        return std::nullopt;
      };
      if (p.op == "and") {
        auto a = to_k3(results[0]), b = to_k3(results[1]);
        if ((a && *a == K3::False) || (b && *b == K3::False)) return val::bool_(false);
        for (auto& r : results)
          if (!r) return r;
        if (!a || !b) return mk_err(EvalError::Kind::StuckTerm, "non-boolean connective argument");
        K3 k = k3_and(*a, *b);
        return k == K3::Unknown ? val::null_() : val::bool_(k == K3::True);
      }
      if (p.op == "or") {
        auto a = to_k3(results[0]), b = to_k3(results[1]);
        if ((a && *a == K3::True) || (b && *b == K3::True)) return val::bool_(true);
        for (auto& r : results)
          if (!r) return r;
        if (!a || !b) return mk_err(EvalError::Kind::StuckTerm, "non-boolean connective argument");
        K3 k = k3_or(*a, *b);
        return k == K3::Unknown ? val::null_() : val::bool_(k == K3::True);
      }
      if (!results[0]) return results[0];
      auto a = to_k3(results[0]);
      if (!a) return mk_err(EvalError::Kind::StuckTerm, "non-boolean connective argument");
      K3 k = k3_not(*a);
      return k == K3::Unknown ? val::null_() : val::bool_(k == K3::True);
    }

    // Strict: null absorbs everything, including an error in a sibling
    // argument (the null-propagation rewrite discards siblings).
    for (const auto& r : results)
      if (r.ok() && vis<VNull>(r.value())) return val::null_();
    std::vector<Constant> consts;
    for (auto& r : results) {
      if (!r) return r;
      if (!vis<Constant>(r.value()))
        return mk_err(EvalError::Kind::StuckTerm, "primitive applied to a non-base value");
      consts.push_back(vas<Constant>(r.value()));
    }
    auto out = apply_prim_constants(p.op, consts);
    if (!out) return out.error();
    return val::cnst(std::move(out.value()));
  }

  EvalResult table(const std::string& name) {
    const TableDecl* decl = db_.schema.find_table(name);
    const auto* rows = db_.rows_of(name);
    if (!decl || !rows)
      return mk_err(EvalError::Kind::UnknownTable, "unknown table '" + name + "'");
    std::vector<Value> out;
    out.reserve(rows->size());
    for (const auto& row : *rows) {
      std::vector<std::pair<std::string, Value>> fields;
      for (size_t c = 0; c < decl->columns.size(); c++) {
        Value cell = row[c];
        if (mode_ == Mode::NRC_OPT && decl->columns[c].nullable) {
          cell = vis<VNull>(cell) ? val::none() : val::some(std::move(cell));
        }
        fields.emplace_back(decl->columns[c].name, std::move(cell));
      }
      out.push_back(val::record(std::move(fields)));
    }
    return val::set(std::move(out));
  }
};

}  // namespace

Result<Value, EvalError> eval(Mode mode, const Database& db, const ValueEnv& env,
                              const TermPtr& m) {
  Evaluator ev(mode, db);
  ValueEnv scratch = env;
  return ev.run(scratch, m);
}

Value default_value(const TyPtr& t) {
  if (ty_is<Ty::Base>(t)) {
    switch (ty_as<Ty::Base>(t).b) {
      case BaseTy::Int: return val::int_(0);
      case BaseTy::Bool: return val::bool_(false);
      case BaseTy::String: return val::str("");
      case BaseTy::Float: return val::flt(0.0);
    }
  }
  if (ty_is<Ty::Set>(t)) return val::set({});
  if (ty_is<Ty::Option>(t)) return val::none();
  if (ty_is<Ty::Record>(t)) {
    std::vector<std::pair<std::string, Value>> fields;
    for (const auto& [label, field] : ty_as<Ty::Record>(t).fields)
      fields.emplace_back(label, default_value(field));
    return val::record(std::move(fields));
  }
  return val::int_(0);  // unresolved inference vars default to int
}

}  // namespace nrc
