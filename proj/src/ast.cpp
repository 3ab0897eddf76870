#include "nullnrc/ast.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>

namespace nrc {

const char* base_ty_name(BaseTy b) {
  switch (b) {
    case BaseTy::Int: return "int";
    case BaseTy::Bool: return "bool";
    case BaseTy::String: return "string";
    case BaseTy::Float: return "float";
  }
  return "?";
}

std::optional<BaseTy> base_ty_from_name(std::string_view name) {
  if (name == "int") return BaseTy::Int;
  if (name == "bool") return BaseTy::Bool;
  if (name == "string") return BaseTy::String;
  if (name == "float") return BaseTy::Float;
  return std::nullopt;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::NRC: return "nrc";
    case Mode::NRC_OPT: return "nrc_opt";
    case Mode::NRC_NULL: return "nrc_null";
  }
  return "?";
}

std::optional<Mode> mode_from_name(std::string_view name) {
  if (name == "nrc") return Mode::NRC;
  if (name == "nrc_opt") return Mode::NRC_OPT;
  if (name == "nrc_null") return Mode::NRC_NULL;
  return std::nullopt;
}

// Sign-magnitude key: orders doubles totally, distinguishes -0.0 from 0.0.
static std::uint64_t float_order_key(double d) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(d);
  return (u & 0x8000000000000000ull) ? ~u : (u | 0x8000000000000000ull);
}

int constant_cmp(const Constant& a, const Constant& b) {
  if (a.ty != b.ty) return static_cast<int>(a.ty) < static_cast<int>(b.ty) ? -1 : 1;
  switch (a.ty) {
    case BaseTy::Int: {
      auto x = a.as_int(), y = b.as_int();
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    case BaseTy::Bool: {
      int x = a.as_bool() ? 1 : 0, y = b.as_bool() ? 1 : 0;
      return x - y;
    }
    case BaseTy::String: {
      int c = a.as_string().compare(b.as_string());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case BaseTy::Float: {
      auto x = float_order_key(a.as_float()), y = float_order_key(b.as_float());
      return x < y ? -1 : (x > y ? 1 : 0);
    }
  }
  return 0;
}

bool operator==(const Constant& a, const Constant& b) { return constant_cmp(a, b) == 0; }

std::string float_literal_text(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; prec++) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = std::strtod(buf, nullptr);
    if (std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v)) break;
  }
  std::string s = buf;
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

namespace ty {
TyPtr base(BaseTy b) { return std::make_shared<Ty>(Ty{Ty::Base{b}}); }
TyPtr int_() { return base(BaseTy::Int); }
TyPtr bool_() { return base(BaseTy::Bool); }
TyPtr string_() { return base(BaseTy::String); }
TyPtr float_() { return base(BaseTy::Float); }
TyPtr record(std::vector<TyField> fields) {
  return std::make_shared<Ty>(Ty{Ty::Record{std::move(fields)}});
}
TyPtr set(TyPtr elem) { return std::make_shared<Ty>(Ty{Ty::Set{std::move(elem)}}); }
TyPtr option(TyPtr inner) { return std::make_shared<Ty>(Ty{Ty::Option{std::move(inner)}}); }
TyPtr var(int id) { return std::make_shared<Ty>(Ty{Ty::Var{id}}); }
}  // namespace ty

bool ty_eq(const TyPtr& a, const TyPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  if (ty_is<Ty::Base>(a)) return ty_as<Ty::Base>(a).b == ty_as<Ty::Base>(b).b;
  if (ty_is<Ty::Var>(a)) return ty_as<Ty::Var>(a).id == ty_as<Ty::Var>(b).id;
  if (ty_is<Ty::Set>(a)) return ty_eq(ty_as<Ty::Set>(a).elem, ty_as<Ty::Set>(b).elem);
  if (ty_is<Ty::Option>(a)) return ty_eq(ty_as<Ty::Option>(a).inner, ty_as<Ty::Option>(b).inner);
  const auto& fa = ty_as<Ty::Record>(a).fields;
  const auto& fb = ty_as<Ty::Record>(b).fields;
  if (fa.size() != fb.size()) return false;
  std::map<std::string, TyPtr> ma, mb;
  for (const auto& [l, t] : fa) ma[l] = t;
  for (const auto& [l, t] : fb) mb[l] = t;
  if (ma.size() != mb.size()) return false;
  for (const auto& [l, t] : ma) {
    auto it = mb.find(l);
    if (it == mb.end() || !ty_eq(t, it->second)) return false;
  }
  return true;
}

bool ty_contains_var(const TyPtr& t) {
  if (!t) return false;
  if (ty_is<Ty::Var>(t)) return true;
  if (ty_is<Ty::Set>(t)) return ty_contains_var(ty_as<Ty::Set>(t).elem);
  if (ty_is<Ty::Option>(t)) return ty_contains_var(ty_as<Ty::Option>(t).inner);
  if (ty_is<Ty::Record>(t)) {
    for (const auto& [l, f] : ty_as<Ty::Record>(t).fields)
      if (ty_contains_var(f)) return true;
  }
  return false;
}

bool ty_is_base(const TyPtr& t) { return ty_is<Ty::Base>(t); }

bool ty_is_relation(const TyPtr& t) {
  if (!ty_is<Ty::Set>(t)) return false;
  const TyPtr& elem = ty_as<Ty::Set>(t).elem;
  if (!ty_is<Ty::Record>(elem)) return false;
  for (const auto& [l, f] : ty_as<Ty::Record>(elem).fields)
    if (!ty_is_base(f)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Term builders
// ---------------------------------------------------------------------------

namespace term {
static TermPtr mk(Term t) { return std::make_shared<Term>(std::move(t)); }

TermPtr var(std::string name) { return mk({Term::Var{std::move(name)}}); }
TermPtr cnst(Constant c) { return mk({Term::Const{std::move(c)}}); }
TermPtr int_(std::int64_t v) { return cnst(Constant::make_int(v)); }
TermPtr bool_(bool v) { return cnst(Constant::make_bool(v)); }
TermPtr str(std::string v) { return cnst(Constant::make_string(std::move(v))); }
TermPtr flt(double v) { return cnst(Constant::make_float(v)); }
TermPtr prim(std::string op, std::vector<TermPtr> args) {
  return mk({Term::Prim{std::move(op), std::move(args)}});
}
TermPtr record(std::vector<TermField> fields) { return mk({Term::RecordCons{std::move(fields)}}); }
TermPtr project(TermPtr rec, std::string label) {
  return mk({Term::Project{std::move(rec), std::move(label)}});
}
TermPtr empty_set() { return mk({Term::EmptySet{}}); }
TermPtr single(TermPtr elem) { return mk({Term::Singleton{std::move(elem)}}); }
TermPtr union_(TermPtr lhs, TermPtr rhs) { return mk({Term::Union{std::move(lhs), std::move(rhs)}}); }
TermPtr comp(TermPtr head, std::string var, TermPtr source) {
  return mk({Term::Comp{std::move(head), std::move(var), std::move(source)}});
}
TermPtr where(TermPtr body, TermPtr cond) { return mk({Term::Where{std::move(body), std::move(cond)}}); }
TermPtr is_empty(TermPtr arg) { return mk({Term::IsEmpty{std::move(arg)}}); }
TermPtr if_(TermPtr cond, TermPtr then_branch, TermPtr else_branch) {
  return mk({Term::If{std::move(cond), std::move(then_branch), std::move(else_branch)}});
}
TermPtr none() { return mk({Term::NoneLit{}}); }
TermPtr some(TermPtr arg) { return mk({Term::SomeLit{std::move(arg)}}); }
TermPtr case_(TermPtr scrut, TermPtr none_branch, std::string var, TermPtr some_branch) {
  return mk({Term::Case{std::move(scrut), std::move(none_branch), std::move(var), std::move(some_branch)}});
}
TermPtr null_() { return mk({Term::NullLit{}}); }
TermPtr is_null(TermPtr arg) { return mk({Term::IsNull{std::move(arg)}}); }
TermPtr table(std::string name) { return mk({Term::TableRef{std::move(name)}}); }
}  // namespace term

// ---------------------------------------------------------------------------
// Uniform children
// ---------------------------------------------------------------------------

int child_count(const TermPtr& t) {
  if (is<Term::Prim>(t)) return static_cast<int>(as<Term::Prim>(t).args.size());
  if (is<Term::RecordCons>(t)) return static_cast<int>(as<Term::RecordCons>(t).fields.size());
  if (is<Term::Project>(t)) return 1;
  if (is<Term::Singleton>(t)) return 1;
  if (is<Term::Union>(t)) return 2;
  if (is<Term::Comp>(t)) return 2;
  if (is<Term::Where>(t)) return 2;
  if (is<Term::IsEmpty>(t)) return 1;
  if (is<Term::If>(t)) return 3;
  if (is<Term::SomeLit>(t)) return 1;
  if (is<Term::Case>(t)) return 3;
  if (is<Term::IsNull>(t)) return 1;
  return 0;
}

TermPtr child_at(const TermPtr& t, int i) {
  if (is<Term::Prim>(t)) return as<Term::Prim>(t).args[i];
  if (is<Term::RecordCons>(t)) return as<Term::RecordCons>(t).fields[i].second;
  if (is<Term::Project>(t)) return as<Term::Project>(t).rec;
  if (is<Term::Singleton>(t)) return as<Term::Singleton>(t).elem;
  if (is<Term::Union>(t)) return i == 0 ? as<Term::Union>(t).lhs : as<Term::Union>(t).rhs;
  if (is<Term::Comp>(t)) return i == 0 ? as<Term::Comp>(t).head : as<Term::Comp>(t).source;
  if (is<Term::Where>(t)) return i == 0 ? as<Term::Where>(t).body : as<Term::Where>(t).cond;
  if (is<Term::IsEmpty>(t)) return as<Term::IsEmpty>(t).arg;
  if (is<Term::If>(t)) {
    const auto& n = as<Term::If>(t);
    return i == 0 ? n.cond : (i == 1 ? n.then_branch : n.else_branch);
  }
  if (is<Term::SomeLit>(t)) return as<Term::SomeLit>(t).arg;
  if (is<Term::Case>(t)) {
    const auto& n = as<Term::Case>(t);
    return i == 0 ? n.scrut : (i == 1 ? n.none_branch : n.some_branch);
  }
  if (is<Term::IsNull>(t)) return as<Term::IsNull>(t).arg;
  return nullptr;
}

TermPtr with_child(const TermPtr& t, int i, TermPtr r) {
  using namespace term;
  if (is<Term::Prim>(t)) {
    auto n = as<Term::Prim>(t);
    n.args[i] = std::move(r);
    return prim(n.op, std::move(n.args));
  }
  if (is<Term::RecordCons>(t)) {
    auto n = as<Term::RecordCons>(t);
    n.fields[i].second = std::move(r);
    return record(std::move(n.fields));
  }
  if (is<Term::Project>(t)) return project(std::move(r), as<Term::Project>(t).label);
  if (is<Term::Singleton>(t)) return single(std::move(r));
  if (is<Term::Union>(t)) {
    const auto& n = as<Term::Union>(t);
    return i == 0 ? union_(std::move(r), n.rhs) : union_(n.lhs, std::move(r));
  }
  if (is<Term::Comp>(t)) {
    const auto& n = as<Term::Comp>(t);
    return i == 0 ? comp(std::move(r), n.var, n.source) : comp(n.head, n.var, std::move(r));
  }
  if (is<Term::Where>(t)) {
    const auto& n = as<Term::Where>(t);
    return i == 0 ? where(std::move(r), n.cond) : where(n.body, std::move(r));
  }
  if (is<Term::IsEmpty>(t)) return is_empty(std::move(r));
  if (is<Term::If>(t)) {
    const auto& n = as<Term::If>(t);
    if (i == 0) return if_(std::move(r), n.then_branch, n.else_branch);
    if (i == 1) return if_(n.cond, std::move(r), n.else_branch);
    return if_(n.cond, n.then_branch, std::move(r));
  }
  if (is<Term::SomeLit>(t)) return some(std::move(r));
  if (is<Term::Case>(t)) {
    const auto& n = as<Term::Case>(t);
    if (i == 0) return case_(std::move(r), n.none_branch, n.var, n.some_branch);
    if (i == 1) return case_(n.scrut, std::move(r), n.var, n.some_branch);
    return case_(n.scrut, n.none_branch, n.var, std::move(r));
  }
  if (is<Term::IsNull>(t)) return is_null(std::move(r));
  return t;
}

std::optional<std::string> binder_at(const TermPtr& t, int i) {
  if (is<Term::Comp>(t) && i == 0) return as<Term::Comp>(t).var;
  if (is<Term::Case>(t) && i == 2) return as<Term::Case>(t).var;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Free variables, substitution, alpha-equivalence
// ---------------------------------------------------------------------------

static void free_vars_into(const TermPtr& t, std::set<std::string>& bound,
                           std::set<std::string>& out) {
  if (is<Term::Var>(t)) {
    const auto& name = as<Term::Var>(t).name;
    if (!bound.count(name)) out.insert(name);
    return;
  }
  int n = child_count(t);
  for (int i = 0; i < n; i++) {
    auto b = binder_at(t, i);
    if (b && !bound.count(*b)) {
      bound.insert(*b);
      free_vars_into(child_at(t, i), bound, out);
      bound.erase(*b);
    } else {
      free_vars_into(child_at(t, i), bound, out);
    }
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

static std::atomic<std::uint64_t> g_fresh_counter{0};

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  auto us = stem.find_last_of('_');
  if (us != std::string::npos && us + 1 < stem.size() &&
      stem.find_first_not_of("0123456789", us + 1) == std::string::npos) {
    stem = stem.substr(0, us);
  }
  if (stem.empty()) stem = "x";
  for (;;) {
    std::string cand = stem + "_" + std::to_string(++g_fresh_counter);
    if (!avoid.count(cand)) return cand;
  }
}

TermPtr subst(const TermPtr& t, const std::string& name, const TermPtr& replacement) {
  if (is<Term::Var>(t)) return as<Term::Var>(t).name == name ? replacement : t;
  int n = child_count(t);
  if (n == 0) return t;

  // Binder nodes need care: stop under a shadowing binder, rename a
  // binder that would capture free variables of the replacement.
  if (is<Term::Comp>(t) || is<Term::Case>(t)) {
    TermPtr cur = t;
    for (int i = 0; i < n; i++) {
      auto b = binder_at(cur, i);
      TermPtr child = child_at(cur, i);
      if (!b) {
        TermPtr sub = subst(child, name, replacement);
        if (sub.get() != child.get()) cur = with_child(cur, i, sub);
        continue;
      }
      if (*b == name) continue;  // shadowed
      std::set<std::string> body_free = free_vars(child);
      if (!body_free.count(name)) continue;  // nothing to do under the binder
      std::set<std::string> repl_free = free_vars(replacement);
      if (repl_free.count(*b)) {
        std::set<std::string> avoid = repl_free;
        avoid.insert(body_free.begin(), body_free.end());
        avoid.insert(name);
        std::string nb = fresh_name(*b, avoid);
        TermPtr renamed = subst(child, *b, term::var(nb));
        renamed = subst(renamed, name, replacement);
        // Rebuild with the new binder name.
        if (is<Term::Comp>(cur)) {
          const auto& c = as<Term::Comp>(cur);
          cur = term::comp(renamed, nb, c.source);
        } else {
          const auto& c = as<Term::Case>(cur);
          cur = term::case_(c.scrut, c.none_branch, nb, renamed);
        }
      } else {
        TermPtr sub = subst(child, name, replacement);
        if (sub.get() != child.get()) cur = with_child(cur, i, sub);
      }
    }
    return cur;
  }

  TermPtr cur = t;
  for (int i = 0; i < n; i++) {
    TermPtr child = child_at(cur, i);
    TermPtr sub = subst(child, name, replacement);
    if (sub.get() != child.get()) cur = with_child(cur, i, sub);
  }
  return cur;
}

namespace {
struct AlphaEnv {
  std::vector<std::pair<std::string, std::string>> pairs;  // (left name, right name)

  bool var_eq(const std::string& a, const std::string& b) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      if (it->first == a || it->second == b) return it->first == a && it->second == b;
    }
    return a == b;  // both free
  }
};

bool alpha_eq_rec(const TermPtr& a, const TermPtr& b, AlphaEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  if (is<Term::Var>(a)) return env.var_eq(as<Term::Var>(a).name, as<Term::Var>(b).name);
  if (is<Term::Const>(a)) return as<Term::Const>(a).c == as<Term::Const>(b).c;
  if (is<Term::Prim>(a) && as<Term::Prim>(a).op != as<Term::Prim>(b).op) return false;
  if (is<Term::Project>(a) && as<Term::Project>(a).label != as<Term::Project>(b).label)
    return false;
  if (is<Term::TableRef>(a)) return as<Term::TableRef>(a).name == as<Term::TableRef>(b).name;
  if (is<Term::RecordCons>(a)) {
    const auto& fa = as<Term::RecordCons>(a).fields;
    const auto& fb = as<Term::RecordCons>(b).fields;
    if (fa.size() != fb.size()) return false;
    for (size_t i = 0; i < fa.size(); i++)
      if (fa[i].first != fb[i].first) return false;
  }
  int n = child_count(a);
  if (n != child_count(b)) return false;
  for (int i = 0; i < n; i++) {
    auto ba = binder_at(a, i);
    auto bb = binder_at(b, i);
    if (ba.has_value() != bb.has_value()) return false;
    if (ba) {
      env.pairs.emplace_back(*ba, *bb);
      bool ok = alpha_eq_rec(child_at(a, i), child_at(b, i), env);
      env.pairs.pop_back();
      if (!ok) return false;
    } else {
      if (!alpha_eq_rec(child_at(a, i), child_at(b, i), env)) return false;
    }
  }
  return true;
}
}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  AlphaEnv env;
  return alpha_eq_rec(a, b, env);
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

namespace val {
Value null_() { return Value{VNull{}}; }
Value none() { return Value{VNone{}}; }
Value some(Value payload) {
  return Value{VSome{std::make_shared<Value>(std::move(payload))}};
}
Value cnst(Constant c) { return Value{std::move(c)}; }
Value int_(std::int64_t v) { return cnst(Constant::make_int(v)); }
Value bool_(bool v) { return cnst(Constant::make_bool(v)); }
Value str(std::string v) { return cnst(Constant::make_string(std::move(v))); }
Value flt(double v) { return cnst(Constant::make_float(v)); }
Value record(std::vector<std::pair<std::string, Value>> fields) {
  return Value{VRecord{std::move(fields)}};
}
Value set(std::vector<Value> elems) { return Value{VSet{canonicalize_values(std::move(elems))}}; }
}  // namespace val

int value_cmp(const Value& a, const Value& b) {
  if (a.v.index() != b.v.index())
    return a.v.index() < b.v.index() ? -1 : 1;
  if (vis<VNull>(a) || vis<VNone>(a)) return 0;
  if (vis<Constant>(a)) return constant_cmp(vas<Constant>(a), vas<Constant>(b));
  if (vis<VSome>(a)) return value_cmp(*vas<VSome>(a).payload, *vas<VSome>(b).payload);
  if (vis<VRecord>(a)) {
    auto fa = vas<VRecord>(a).fields;
    auto fb = vas<VRecord>(b).fields;
    auto by_label = [](const auto& x, const auto& y) { return x.first < y.first; };
    std::sort(fa.begin(), fa.end(), by_label);
    std::sort(fb.begin(), fb.end(), by_label);
    size_t n = std::min(fa.size(), fb.size());
    for (size_t i = 0; i < n; i++) {
      if (fa[i].first != fb[i].first) return fa[i].first < fb[i].first ? -1 : 1;
      int c = value_cmp(fa[i].second, fb[i].second);
      if (c != 0) return c;
    }
    if (fa.size() != fb.size()) return fa.size() < fb.size() ? -1 : 1;
    return 0;
  }
  const auto& ea = vas<VSet>(a).elems;
  const auto& eb = vas<VSet>(b).elems;
  size_t n = std::min(ea.size(), eb.size());
  for (size_t i = 0; i < n; i++) {
    int c = value_cmp(ea[i], eb[i]);
    if (c != 0) return c;
  }
  if (ea.size() != eb.size()) return ea.size() < eb.size() ? -1 : 1;
  return 0;
}

bool operator==(const Value& a, const Value& b) { return value_cmp(a, b) == 0; }

std::vector<Value> canonicalize_values(std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end(),
            [](const Value& x, const Value& y) { return value_cmp(x, y) < 0; });
  elems.erase(std::unique(elems.begin(), elems.end(),
                          [](const Value& x, const Value& y) { return value_cmp(x, y) == 0; }),
              elems.end());
  return elems;
}

}  // namespace nrc
