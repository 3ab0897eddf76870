#include "nullnrc/rewrite.hpp"

#include <sstream>

#include "nullnrc/eval.hpp"
#include "nullnrc/surface.hpp"
#include "nullnrc/typing.hpp"

namespace nrc {

const char* rule_name(RuleId id) {
  switch (id) {
    case RuleId::ProjBeta: return "ProjBeta";
    case RuleId::PrimDelta: return "PrimDelta";
    case RuleId::CompEmptyHead: return "CompEmptyHead";
    case RuleId::CompEmptySource: return "CompEmptySource";
    case RuleId::CompSingleton: return "CompSingleton";
    case RuleId::CompUnionHead: return "CompUnionHead";
    case RuleId::CompUnionSource: return "CompUnionSource";
    case RuleId::CompNested: return "CompNested";
    case RuleId::CompWhereSource: return "CompWhereSource";
    case RuleId::WhereTrue: return "WhereTrue";
    case RuleId::WhereFalse: return "WhereFalse";
    case RuleId::WhereEmpty: return "WhereEmpty";
    case RuleId::WhereUnion: return "WhereUnion";
    case RuleId::WhereComp: return "WhereComp";
    case RuleId::WhereWhere: return "WhereWhere";
    case RuleId::EmptyWrap: return "EmptyWrap";
    case RuleId::IfRecord: return "IfRecord";
    case RuleId::IfSetNRC: return "IfSetNRC";
    case RuleId::CaseNone: return "CaseNone";
    case RuleId::CaseSome: return "CaseSome";
    case RuleId::WhereNull: return "WhereNull";
    case RuleId::IfSetNull: return "IfSetNull";
    case RuleId::IsNullNull: return "IsNullNull";
    case RuleId::IsNullConst: return "IsNullConst";
    case RuleId::PrimNullStrict: return "PrimNullStrict";
  }
  return "?";
}

bool rule_enabled(RuleId id, Mode mode) {
  switch (id) {
    case RuleId::IfSetNRC:
      return mode == Mode::NRC || mode == Mode::NRC_OPT;
    case RuleId::CaseNone:
    case RuleId::CaseSome:
      return mode == Mode::NRC_OPT;
    case RuleId::WhereNull:
    case RuleId::IfSetNull:
    case RuleId::IsNullNull:
    case RuleId::IsNullConst:
    case RuleId::PrimNullStrict:
      return mode == Mode::NRC_NULL;
    default:
      return true;  // common rules
  }
}

std::string trace_to_text(const Trace& trace) {
  std::ostringstream os;
  for (const auto& s : trace) {
    os << rule_name(s.rule) << " @ " << (s.path.empty() ? "." : s.path) << " : "
       << pretty(s.before) << " ==> " << pretty(s.after) << "\n";
  }
  return os.str();
}

namespace {

std::vector<int> parse_path(const std::string& path) {
  std::vector<int> out;
  if (path.empty()) return out;
  size_t i = 0;
  while (i < path.size()) {
    size_t dot = path.find('.', i);
    if (dot == std::string::npos) dot = path.size();
    out.push_back(std::atoi(path.substr(i, dot - i).c_str()));
    i = dot + 1;
  }
  return out;
}

TermPtr replace_at(const TermPtr& t, const std::vector<int>& path, size_t idx,
                   const TermPtr& replacement) {
  if (idx == path.size()) return replacement;
  int i = path[idx];
  if (i < 0 || i >= child_count(t)) return nullptr;
  TermPtr sub = replace_at(child_at(t, i), path, idx + 1, replacement);
  if (!sub) return nullptr;
  return with_child(t, i, sub);
}

}  // namespace

TermPtr replay_trace(const TermPtr& input, const Trace& trace) {
  TermPtr cur = input;
  for (const auto& s : trace) {
    cur = replace_at(cur, parse_path(s.path), 0, s.after);
    if (!cur) return nullptr;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// The rewrite engine
// ---------------------------------------------------------------------------

namespace {

bool is_bool_const(const TermPtr& t, bool which) {
  return is<Term::Const>(t) && as<Term::Const>(t).c.ty == BaseTy::Bool &&
         as<Term::Const>(t).c.as_bool() == which;
}

bool contains_table_ref(const TermPtr& t) {
  if (is<Term::TableRef>(t)) return true;
  int n = child_count(t);
  for (int i = 0; i < n; i++)
    if (contains_table_ref(child_at(t, i))) return true;
  return false;
}

// Maps a K3 literal term (true/false/null) to its truth value.
std::optional<K3> k3_literal(const TermPtr& t) {
  if (is<Term::NullLit>(t)) return K3::Unknown;
  if (is<Term::Const>(t) && as<Term::Const>(t).c.ty == BaseTy::Bool)
    return as<Term::Const>(t).c.as_bool() ? K3::True : K3::False;
  return std::nullopt;
}

TermPtr k3_to_term(K3 k) {
  if (k == K3::Unknown) return term::null_();
  return term::bool_(k == K3::True);
}

class Rewriter {
 public:
  Rewriter(Mode mode, const Annotations* ann) : mode_(mode), ann_(ann) {}

  struct Found {
    TermPtr subtree;  // rewritten subtree rooted at the redex
    std::string path;
    RuleId rule;
    TermPtr before;
  };

  std::optional<Found> find(const TermPtr& t, const std::string& path) {
    if (auto hit = match(t)) return Found{hit->first, path, hit->second, t};
    int n = child_count(t);
    for (int i = 0; i < n; i++) {
      std::string child_path = path.empty() ? std::to_string(i) : path + "." + std::to_string(i);
      if (auto found = find(child_at(t, i), child_path)) {
        found->subtree = with_child(t, i, found->subtree);
        return found;
      }
    }
    return std::nullopt;
  }

  // The rewritten whole term lives in Found::subtree after unwinding; the
  // redex-local replacement is recomputed by the caller via the path.

 private:
  Mode mode_;
  const Annotations* ann_;

  bool on(RuleId id) const { return rule_enabled(id, mode_); }

  // Concrete (variable-free) annotated type of t, if known.
  TyPtr type_of(const TermPtr& t, bool require_concrete) const {
    if (!ann_) return nullptr;
    const TyPtr* ty = ann_->of(t);
    if (!ty) return nullptr;
    if (require_concrete && ty_contains_var(*ty)) return nullptr;
    return *ty;
  }

  std::optional<std::pair<TermPtr, RuleId>> match(const TermPtr& t) {
    using namespace term;

    if (is<Term::Project>(t)) {
      const auto& p = as<Term::Project>(t);
      if (on(RuleId::ProjBeta) && is<Term::RecordCons>(p.rec)) {
        for (const auto& [label, value] : as<Term::RecordCons>(p.rec).fields)
          if (label == p.label) return {{value, RuleId::ProjBeta}};
      }
      return std::nullopt;
    }

    if (is<Term::Prim>(t)) {
      const auto& p = as<Term::Prim>(t);
      Strictness strictness = prim_strictness(p.op).value_or(Strictness::Strict);
      if (on(RuleId::PrimDelta)) {
        if (strictness == Strictness::ThreeValued) {
          std::vector<K3> lits;
          bool all_lits = true;
          for (const auto& arg : p.args) {
            auto k = k3_literal(arg);
            if (!k) {
              all_lits = false;
              break;
            }
            lits.push_back(*k);
          }
          if (all_lits) {
            K3 r = p.op == "not" ? k3_not(lits[0])
                                 : (p.op == "and" ? k3_and(lits[0], lits[1])
                                                  : k3_or(lits[0], lits[1]));
            return {{k3_to_term(r), RuleId::PrimDelta}};
          }
          // Partial delta: an annihilating literal wins if the discarded
          // argument is pure (no table refs).
          if (p.op == "and") {
            if (is_bool_const(p.args[0], false) && !contains_table_ref(p.args[1]))
              return {{bool_(false), RuleId::PrimDelta}};
            if (is_bool_const(p.args[1], false) && !contains_table_ref(p.args[0]))
              return {{bool_(false), RuleId::PrimDelta}};
          } else if (p.op == "or") {
            if (is_bool_const(p.args[0], true) && !contains_table_ref(p.args[1]))
              return {{bool_(true), RuleId::PrimDelta}};
            if (is_bool_const(p.args[1], true) && !contains_table_ref(p.args[0]))
              return {{bool_(true), RuleId::PrimDelta}};
          }
        } else {
          bool all_consts = true;
          std::vector<Constant> consts;
          for (const auto& arg : p.args) {
            if (!is<Term::Const>(arg)) {
              all_consts = false;
              break;
            }
            consts.push_back(as<Term::Const>(arg).c);
          }
          if (all_consts) {
            auto r = apply_prim_constants(p.op, consts);
            if (r.ok()) return {{cnst(std::move(r.value())), RuleId::PrimDelta}};
            // Division by zero: not a redex, stays as written.
          }
        }
      }
      if (on(RuleId::PrimNullStrict) && strictness == Strictness::Strict) {
        for (const auto& arg : p.args)
          if (is<Term::NullLit>(arg)) return {{null_(), RuleId::PrimNullStrict}};
      }
      return std::nullopt;
    }

    if (is<Term::Comp>(t)) {
      const auto& c = as<Term::Comp>(t);
      if (on(RuleId::CompEmptyHead) && is<Term::EmptySet>(c.head))
        return {{empty_set(), RuleId::CompEmptyHead}};
      if (on(RuleId::CompEmptySource) && is<Term::EmptySet>(c.source))
        return {{empty_set(), RuleId::CompEmptySource}};
      if (on(RuleId::CompSingleton) && is<Term::Singleton>(c.source))
        return {{subst(c.head, c.var, as<Term::Singleton>(c.source).elem), RuleId::CompSingleton}};
      if (on(RuleId::CompUnionHead) && is<Term::Union>(c.head)) {
        const auto& u = as<Term::Union>(c.head);
        return {{union_(comp(u.lhs, c.var, c.source), comp(u.rhs, c.var, c.source)),
                 RuleId::CompUnionHead}};
      }
      if (on(RuleId::CompUnionSource) && is<Term::Union>(c.source)) {
        const auto& u = as<Term::Union>(c.source);
        return {{union_(comp(c.head, c.var, u.lhs), comp(c.head, c.var, u.rhs)),
                 RuleId::CompUnionSource}};
      }
      if (on(RuleId::CompNested) && is<Term::Comp>(c.source)) {
        const auto& inner = as<Term::Comp>(c.source);
        std::string x = inner.var;
        TermPtr r = inner.head;
        std::set<std::string> head_free = free_vars(c.head);
        if (head_free.count(x)) {
          std::set<std::string> avoid = head_free;
          auto rf = free_vars(r);
          avoid.insert(rf.begin(), rf.end());
          avoid.insert(c.var);
          std::string fresh = fresh_name(x, avoid);
          r = subst(r, x, var(fresh));
          x = fresh;
        }
        return {{comp(comp(c.head, c.var, r), x, inner.source), RuleId::CompNested}};
      }
      if (on(RuleId::CompWhereSource) && is<Term::Where>(c.source)) {
        const auto& w = as<Term::Where>(c.source);
        return {{where(comp(c.head, c.var, w.body), w.cond), RuleId::CompWhereSource}};
      }
      return std::nullopt;
    }

    if (is<Term::Where>(t)) {
      const auto& w = as<Term::Where>(t);
      if (on(RuleId::WhereTrue) && is_bool_const(w.cond, true)) return {{w.body, RuleId::WhereTrue}};
      if (on(RuleId::WhereFalse) && is_bool_const(w.cond, false))
        return {{empty_set(), RuleId::WhereFalse}};
      if (on(RuleId::WhereEmpty) && is<Term::EmptySet>(w.body))
        return {{empty_set(), RuleId::WhereEmpty}};
      if (on(RuleId::WhereUnion) && is<Term::Union>(w.body)) {
        const auto& u = as<Term::Union>(w.body);
        return {{union_(where(u.lhs, w.cond), where(u.rhs, w.cond)), RuleId::WhereUnion}};
      }
      if (on(RuleId::WhereComp) && is<Term::Comp>(w.body)) {
        const auto& c = as<Term::Comp>(w.body);
        std::string x = c.var;
        TermPtr head = c.head;
        std::set<std::string> cond_free = free_vars(w.cond);
        if (cond_free.count(x)) {
          std::set<std::string> avoid = cond_free;
          auto hf = free_vars(head);
          avoid.insert(hf.begin(), hf.end());
          std::string fresh = fresh_name(x, avoid);
          head = subst(head, x, var(fresh));
          x = fresh;
        }
        return {{comp(where(head, w.cond), x, c.source), RuleId::WhereComp}};
      }
      if (on(RuleId::WhereWhere) && is<Term::Where>(w.body)) {
        const auto& inner = as<Term::Where>(w.body);
        return {{where(inner.body, prim("and", {inner.cond, w.cond})), RuleId::WhereWhere}};
      }
      if (on(RuleId::WhereNull) && is<Term::NullLit>(w.cond))
        return {{empty_set(), RuleId::WhereNull}};
      return std::nullopt;
    }

    if (is<Term::IsEmpty>(t)) {
      const auto& e = as<Term::IsEmpty>(t);
      if (on(RuleId::EmptyWrap)) {
        TyPtr ty = type_of(e.arg, /*require_concrete=*/true);
        if (ty && ty_is<Ty::Set>(ty) && !ty_is_relation(ty)) {
          std::string binder = fresh_name("w", free_vars(e.arg));
          return {{term::is_empty(comp(single(record({})), binder, e.arg)), RuleId::EmptyWrap}};
        }
      }
      return std::nullopt;
    }

    if (is<Term::If>(t)) {
      const auto& f = as<Term::If>(t);
      if (on(RuleId::IfRecord)) {
        TyPtr ty = type_of(f.then_branch, /*require_concrete=*/false);
        if (ty && ty_is<Ty::Record>(ty)) {
          std::vector<TermField> fields;
          for (const auto& [label, field_ty] : ty_as<Ty::Record>(ty).fields)
            fields.emplace_back(
                label, if_(f.cond, project(f.then_branch, label), project(f.else_branch, label)));
          return {{record(std::move(fields)), RuleId::IfRecord}};
        }
      }
      bool else_nonempty = !is<Term::EmptySet>(f.else_branch);
      if (on(RuleId::IfSetNRC) && else_nonempty) {
        TyPtr ty = type_of(f.then_branch, /*require_concrete=*/false);
        if (ty && ty_is<Ty::Set>(ty)) {
          return {{union_(where(f.then_branch, f.cond),
                          where(f.else_branch, prim("not", {f.cond}))),
                   RuleId::IfSetNRC}};
        }
      }
      if (on(RuleId::IfSetNull) && else_nonempty) {
        TyPtr ty = type_of(f.then_branch, /*require_concrete=*/false);
        if (ty && ty_is<Ty::Set>(ty)) {
          TermPtr guard = prim("or", {is_null(f.cond), prim("not", {f.cond})});
          return {{union_(where(f.then_branch, f.cond), where(f.else_branch, guard)),
                   RuleId::IfSetNull}};
        }
      }
      return std::nullopt;
    }

    if (is<Term::Case>(t)) {
      const auto& c = as<Term::Case>(t);
      if (on(RuleId::CaseNone) && is<Term::NoneLit>(c.scrut))
        return {{c.none_branch, RuleId::CaseNone}};
      if (on(RuleId::CaseSome) && is<Term::SomeLit>(c.scrut))
        return {{subst(c.some_branch, c.var, as<Term::SomeLit>(c.scrut).arg), RuleId::CaseSome}};
      return std::nullopt;
    }

    if (is<Term::IsNull>(t)) {
      const auto& n = as<Term::IsNull>(t);
      if (on(RuleId::IsNullNull) && is<Term::NullLit>(n.arg))
        return {{term::bool_(true), RuleId::IsNullNull}};
      if (on(RuleId::IsNullConst) && is<Term::Const>(n.arg))
        return {{term::bool_(false), RuleId::IsNullConst}};
      return std::nullopt;
    }

    return std::nullopt;
  }
};

TermPtr subterm_at(const TermPtr& t, const std::vector<int>& path) {
  TermPtr cur = t;
  for (int i : path) {
    if (i < 0 || i >= child_count(cur)) return nullptr;
    cur = child_at(cur, i);
  }
  return cur;
}

}  // namespace

std::optional<StepResult> step(Mode mode, const Schema& schema, const TermPtr& m,
                               const TyPtr& expected) {
  TypeEnv env;
  auto ann = annotate(mode, schema, env, m, expected, /*default_unresolved=*/false);
  const Annotations* ann_ptr = ann.ok() ? &ann.value() : nullptr;
  Rewriter rw(mode, ann_ptr);
  auto found = rw.find(m, "");
  if (!found) return std::nullopt;
  TermPtr after = subterm_at(found->subtree, parse_path(found->path));
  return StepResult{found->subtree, TraceStep{found->rule, found->path, found->before, after}};
}

NormalizeResult normalize(Mode mode, const Schema& schema, const TermPtr& m, int fuel,
                          const TyPtr& expected) {
  NormalizeResult out;
  out.term = m;
  for (int i = 0; i < fuel; i++) {
    auto s = step(mode, schema, out.term, expected);
    if (!s) return out;
    out.term = s->term;
    out.trace.push_back(std::move(s->step));
  }
  // One more probe: if another step exists, fuel ran out mid-way.
  if (step(mode, schema, out.term, expected)) out.fuel_exhausted = true;
  return out;
}

// ---------------------------------------------------------------------------
// SQL normal form recognition
// ---------------------------------------------------------------------------

namespace {

struct NormalFormChecker {
  const Schema& schema;
  // Comprehension binders in scope, innermost last.
  std::vector<std::string> binders;

  bool is_binder(const std::string& name) const {
    for (const auto& b : binders)
      if (b == name) return true;
    return false;
  }

  bool scalar_ok(const TermPtr& t) {
    if (is<Term::Const>(t) || is<Term::NullLit>(t)) return true;
    if (is<Term::Project>(t)) {
      const auto& p = as<Term::Project>(t);
      return is<Term::Var>(p.rec) && is_binder(as<Term::Var>(p.rec).name);
    }
    if (is<Term::Prim>(t)) {
      for (const auto& arg : as<Term::Prim>(t).args)
        if (!scalar_ok(arg)) return false;
      return true;
    }
    if (is<Term::IsNull>(t)) return scalar_ok(as<Term::IsNull>(t).arg);
    if (is<Term::If>(t)) {
      const auto& f = as<Term::If>(t);
      return scalar_ok(f.cond) && scalar_ok(f.then_branch) && scalar_ok(f.else_branch);
    }
    if (is<Term::IsEmpty>(t)) return relation_ok(as<Term::IsEmpty>(t).arg);
    return false;
  }

  bool row_ok(const TermPtr& t) {
    if (is<Term::Var>(t)) return is_binder(as<Term::Var>(t).name);
    if (is<Term::RecordCons>(t)) {
      for (const auto& [label, value] : as<Term::RecordCons>(t).fields)
        if (!scalar_ok(value)) return false;
      return true;
    }
    return false;
  }

  bool nest_ok(const TermPtr& t) {
    if (is<Term::Comp>(t)) {
      const auto& c = as<Term::Comp>(t);
      if (!is<Term::TableRef>(c.source) ||
          !schema.find_table(as<Term::TableRef>(c.source).name))
        return false;
      binders.push_back(c.var);
      bool ok = nest_ok(c.head);
      binders.pop_back();
      return ok;
    }
    if (is<Term::Where>(t)) {
      const auto& w = as<Term::Where>(t);
      return is<Term::Singleton>(w.body) && row_ok(as<Term::Singleton>(w.body).elem) &&
             scalar_ok(w.cond);
    }
    if (is<Term::Singleton>(t)) return row_ok(as<Term::Singleton>(t).elem);
    return false;
  }

  bool relation_ok(const TermPtr& t) {
    if (is<Term::Union>(t)) {
      const auto& u = as<Term::Union>(t);
      return relation_ok(u.lhs) && relation_ok(u.rhs);
    }
    if (is<Term::EmptySet>(t)) return true;
    return nest_ok(t);
  }
};

}  // namespace

bool is_sql_normal_form(const TermPtr& m, const Schema& schema, const TyPtr& expected) {
  TypeEnv env;
  auto ty = typecheck(Mode::NRC_NULL, schema, env, m, expected);
  if (!ty.ok() || !ty_is_relation(ty.value())) return false;
  NormalFormChecker checker{schema, {}};
  return checker.relation_ok(m);
}

}  // namespace nrc
