#include "nullnrc/sqlgen.hpp"

#include <cctype>
#include <set>
#include <tuple>

#include "nullnrc/eval.hpp"
#include "nullnrc/rewrite.hpp"
#include "nullnrc/typing.hpp"

namespace nrc {

namespace {

template <typename T, typename... Args>
ScalarPtr mk(Args&&... args) {
  return std::make_shared<ScalarExpr>(ScalarExpr{T{std::forward<Args>(args)...}});
}

template <typename T>
bool sis(const ScalarPtr& e) {
  return std::holds_alternative<T>(e->node);
}
template <typename T>
const T& sas(const ScalarPtr& e) {
  return std::get<T>(e->node);
}

Constant base_default(BaseTy b) {
  switch (b) {
    case BaseTy::Int: return Constant::make_int(0);
    case BaseTy::Bool: return Constant::make_bool(false);
    case BaseTy::String: return Constant::make_string("");
    case BaseTy::Float: return Constant::make_float(0.0);
  }
  return Constant::make_int(0);
}

// ---------------------------------------------------------------------------
// Term -> SqlQuery
// ---------------------------------------------------------------------------

struct BranchBuilder {
  const Schema& schema;
  const std::vector<TyField>& result_cols;
  SelectBranch branch;
  // binder -> (alias, table decl); innermost last
  std::vector<std::pair<std::string, std::pair<std::string, const TableDecl*>>> scope;
  std::set<std::string> used_aliases;
  std::string error;

  const std::pair<std::string, const TableDecl*>* lookup(const std::string& binder) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == binder) return &it->second;
    return nullptr;
  }

  std::string unique_alias(const std::string& want) {
    if (!used_aliases.count(want)) {
      used_aliases.insert(want);
      return want;
    }
    for (int i = 2;; i++) {
      std::string cand = want + "_" + std::to_string(i);
      if (!used_aliases.count(cand)) {
        used_aliases.insert(cand);
        return cand;
      }
    }
  }

  bool nest(const TermPtr& t) {
    if (is<Term::Comp>(t)) {
      const auto& c = as<Term::Comp>(t);
      const TableDecl* table = schema.find_table(as<Term::TableRef>(c.source).name);
      if (!table) {
        error = "unknown table in normal form";
        return false;
      }
      std::string alias = unique_alias(c.var);
      branch.from.emplace_back(table->name, alias);
      scope.emplace_back(c.var, std::make_pair(alias, table));
      return nest(c.head);
    }
    if (is<Term::Where>(t)) {
      const auto& w = as<Term::Where>(t);
      ScalarPtr cond = scalar(w.cond);
      if (!cond) return false;
      branch.where = cond;
      return row(as<Term::Singleton>(w.body).elem);
    }
    return row(as<Term::Singleton>(t).elem);
  }

  bool row(const TermPtr& t) {
    if (is<Term::Var>(t)) {
      const auto* entry = lookup(as<Term::Var>(t).name);
      if (!entry) {
        error = "row variable is not a comprehension binder";
        return false;
      }
      for (const auto& [label, ty] : result_cols)
        branch.projections.emplace_back(label, mk<ScalarExpr::ColRef>(entry->first, label));
      return true;
    }
    const auto& fields = as<Term::RecordCons>(t).fields;
    for (const auto& [label, ty] : result_cols) {
      const TermPtr* found = nullptr;
      for (const auto& [l, e] : fields)
        if (l == label) found = &e;
      if (!found) {
        error = "record row is missing field '" + label + "'";
        return false;
      }
      ScalarPtr e = scalar(*found);
      if (!e) return false;
      branch.projections.emplace_back(label, e);
    }
    return true;
  }

  ScalarPtr scalar(const TermPtr& t) {
    if (is<Term::Const>(t)) return mk<ScalarExpr::Lit>(as<Term::Const>(t).c);
    if (is<Term::NullLit>(t)) return mk<ScalarExpr::Null>();
    if (is<Term::Project>(t)) {
      const auto& p = as<Term::Project>(t);
      const auto* entry = lookup(as<Term::Var>(p.rec).name);
      if (!entry) {
        error = "projection from an unknown binder";
        return nullptr;
      }
      return mk<ScalarExpr::ColRef>(entry->first, p.label);
    }
    if (is<Term::IsNull>(t)) {
      ScalarPtr arg = scalar(as<Term::IsNull>(t).arg);
      return arg ? mk<ScalarExpr::IsNullExpr>(arg) : nullptr;
    }
    if (is<Term::Prim>(t)) {
      const auto& p = as<Term::Prim>(t);
      if (p.op == "not") {
        ScalarPtr arg = scalar(p.args[0]);
        return arg ? mk<ScalarExpr::Not>(arg) : nullptr;
      }
      ScalarPtr lhs = scalar(p.args[0]);
      ScalarPtr rhs = lhs ? scalar(p.args[1]) : nullptr;
      if (!rhs) return nullptr;
      if (p.op == "and") return mk<ScalarExpr::And>(lhs, rhs);
      if (p.op == "or") return mk<ScalarExpr::Or>(lhs, rhs);
      if (p.op == "+" || p.op == "-" || p.op == "*" || p.op == "/")
        return mk<ScalarExpr::Arith>(p.op, lhs, rhs);
      return mk<ScalarExpr::Cmp>(p.op, lhs, rhs);
    }
    if (is<Term::If>(t)) {
      const auto& f = as<Term::If>(t);
      ScalarPtr c = scalar(f.cond);
      ScalarPtr a = c ? scalar(f.then_branch) : nullptr;
      ScalarPtr b = a ? scalar(f.else_branch) : nullptr;
      return b ? mk<ScalarExpr::CaseWhen>(c, a, b) : nullptr;
    }
    if (is<Term::IsEmpty>(t)) {
      error = "empty() inside scalar expressions is not supported in SQL emission";
      return nullptr;
    }
    error = "unsupported scalar expression in normal form";
    return nullptr;
  }
};

void flatten_union(const TermPtr& t, std::vector<TermPtr>& out) {
  if (is<Term::Union>(t)) {
    flatten_union(as<Term::Union>(t).lhs, out);
    flatten_union(as<Term::Union>(t).rhs, out);
    return;
  }
  out.push_back(t);
}

}  // namespace

Result<SqlQuery, std::string> to_sql(const TermPtr& m, const Schema& schema,
                                     const TyPtr& result_ty) {
  if (!is_sql_normal_form(m, schema, result_ty))
    return std::string("term is not in SQL normal form (normalize a flat query first)");
  if (!ty_is_relation(result_ty)) return std::string("result type is not a flat relation");
  const auto& cols = ty_as<Ty::Record>(ty_as<Ty::Set>(result_ty).elem).fields;

  std::vector<TermPtr> branches;
  flatten_union(m, branches);

  SqlQuery q;
  for (const TermPtr& b : branches) {
    if (is<Term::EmptySet>(b)) {
      SelectBranch sb;
      for (const auto& [label, ty] : cols)
        sb.projections.emplace_back(label,
                                    mk<ScalarExpr::Lit>(base_default(ty_as<Ty::Base>(ty).b)));
      sb.where = mk<ScalarExpr::Lit>(Constant::make_bool(false));
      q.branches.push_back(std::move(sb));
      continue;
    }
    BranchBuilder builder{schema, cols, {}, {}, {}, {}};
    if (!builder.nest(b)) return builder.error;
    q.branches.push_back(std::move(builder.branch));
  }
  return q;
}

Result<SqlQuery, std::string> to_sql(const TermPtr& m, const Schema& schema) {
  TypeEnv env;
  auto ty = typecheck(Mode::NRC_NULL, schema, env, m);
  if (!ty.ok()) return std::string("query does not typecheck: ") + format_type_error(ty.error());
  return to_sql(m, schema, ty.value());
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string quote_ident(const std::string& name) {
  bool plain = !name.empty() &&
               (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
  if (plain) return name;
  std::string out = "\"";
  for (char c : name) {
    out += c;
    if (c == '"') out += c;
  }
  return out + "\"";
}

std::string sql_literal(const Constant& c) {
  switch (c.ty) {
    case BaseTy::Int: return std::to_string(c.as_int());
    case BaseTy::Bool: return c.as_bool() ? "TRUE" : "FALSE";
    case BaseTy::Float: return float_literal_text(c.as_float());
    case BaseTy::String: {
      std::string out = "'";
      for (char ch : c.as_string()) {
        out += ch;
        if (ch == '\'') out += ch;
      }
      return out + "'";
    }
  }
  return "NULL";
}

std::string render_expr(const ScalarPtr& e, bool top) {
  if (sis<ScalarExpr::ColRef>(e)) {
    const auto& c = sas<ScalarExpr::ColRef>(e);
    return quote_ident(c.binder) + "." + quote_ident(c.column);
  }
  if (sis<ScalarExpr::Lit>(e)) return sql_literal(sas<ScalarExpr::Lit>(e).c);
  if (sis<ScalarExpr::Null>(e)) return "NULL";
  if (sis<ScalarExpr::IsNullExpr>(e))
    return "(" + render_expr(sas<ScalarExpr::IsNullExpr>(e).arg, false) + " IS NULL)";
  if (sis<ScalarExpr::Not>(e)) {
    std::string s = "NOT " + render_expr(sas<ScalarExpr::Not>(e).arg, false);
    return top ? s : "(" + s + ")";
  }
  auto binary = [&](const std::string& op, const ScalarPtr& l, const ScalarPtr& r) {
    std::string s = render_expr(l, false) + " " + op + " " + render_expr(r, false);
    return top ? s : "(" + s + ")";
  };
  if (sis<ScalarExpr::And>(e))
    return binary("AND", sas<ScalarExpr::And>(e).lhs, sas<ScalarExpr::And>(e).rhs);
  if (sis<ScalarExpr::Or>(e))
    return binary("OR", sas<ScalarExpr::Or>(e).lhs, sas<ScalarExpr::Or>(e).rhs);
  if (sis<ScalarExpr::Cmp>(e)) {
    const auto& c = sas<ScalarExpr::Cmp>(e);
    return binary(c.op, c.lhs, c.rhs);
  }
  if (sis<ScalarExpr::Arith>(e)) {
    const auto& a = sas<ScalarExpr::Arith>(e);
    return binary(a.op, a.lhs, a.rhs);
  }
  const auto& cw = sas<ScalarExpr::CaseWhen>(e);
  return "CASE WHEN " + render_expr(cw.cond, false) + " THEN " +
         render_expr(cw.then_expr, false) + " ELSE " + render_expr(cw.else_expr, false) + " END";
}

}  // namespace

std::string render(const SqlQuery& q) {
  std::string out;
  bool single = q.branches.size() == 1;
  for (size_t b = 0; b < q.branches.size(); b++) {
    const SelectBranch& branch = q.branches[b];
    if (b) out += "\nUNION\n";
    out += "SELECT ";
    if (single) out += "DISTINCT ";
    for (size_t i = 0; i < branch.projections.size(); i++) {
      if (i) out += ", ";
      out += render_expr(branch.projections[i].second, false) + " AS " +
             quote_ident(branch.projections[i].first);
    }
    if (!branch.from.empty()) {
      out += " FROM ";
      for (size_t i = 0; i < branch.from.size(); i++) {
        if (i) out += ", ";
        out += quote_ident(branch.from[i].first) + " AS " + quote_ident(branch.from[i].second);
      }
    }
    if (branch.where) out += " WHERE " + render_expr(*branch.where, true);
  }
  out += ";\n";
  return out;
}

// ---------------------------------------------------------------------------
// The in-process SQL oracle
// ---------------------------------------------------------------------------

namespace {

using SqlVal = std::optional<Constant>;  // nullopt is SQL NULL
using SqlResult = Result<SqlVal, std::string>;

struct RowScope {
  // alias -> (table decl, row)
  std::vector<std::tuple<std::string, const TableDecl*, const std::vector<Value>*>> rows;
};

SqlResult oracle_eval_expr(const ScalarPtr& e, const RowScope& scope) {
  if (sis<ScalarExpr::ColRef>(e)) {
    const auto& c = sas<ScalarExpr::ColRef>(e);
    for (const auto& [alias, decl, row] : scope.rows) {
      if (alias != c.binder) continue;
      for (size_t i = 0; i < decl->columns.size(); i++) {
        if (decl->columns[i].name == c.column) {
          const Value& v = (*row)[i];
          if (vis<VNull>(v)) return SqlVal{};
          if (vis<Constant>(v)) return SqlVal{vas<Constant>(v)};
          return std::string("non-scalar cell in table '" + decl->name + "'");
        }
      }
      return std::string("unknown column '" + c.column + "'");
    }
    return std::string("unknown binder '" + c.binder + "'");
  }
  if (sis<ScalarExpr::Lit>(e)) return SqlVal{sas<ScalarExpr::Lit>(e).c};
  if (sis<ScalarExpr::Null>(e)) return SqlVal{};
  if (sis<ScalarExpr::IsNullExpr>(e)) {
    auto v = oracle_eval_expr(sas<ScalarExpr::IsNullExpr>(e).arg, scope);
    if (!v) return v;
    return SqlVal{Constant::make_bool(!v.value().has_value())};
  }
  if (sis<ScalarExpr::Not>(e)) {
    auto v = oracle_eval_expr(sas<ScalarExpr::Not>(e).arg, scope);
    if (!v) return v;
    if (!v.value()) return SqlVal{};
    return SqlVal{Constant::make_bool(!v.value()->as_bool())};
  }
  if (sis<ScalarExpr::And>(e) || sis<ScalarExpr::Or>(e)) {
    bool is_and = sis<ScalarExpr::And>(e);
    const ScalarPtr& le = is_and ? sas<ScalarExpr::And>(e).lhs : sas<ScalarExpr::Or>(e).lhs;
    const ScalarPtr& re = is_and ? sas<ScalarExpr::And>(e).rhs : sas<ScalarExpr::Or>(e).rhs;
    auto l = oracle_eval_expr(le, scope);
    auto r = oracle_eval_expr(re, scope);
    // SQL three-valued tables; an annihilator absorbs the other side.
    auto truth = [](const SqlResult& v) -> int {  // 0 false, 1 unknown, 2 true, -1 error
      if (!v.ok()) return -1;
      if (!v.value()) return 1;
      return v.value()->as_bool() ? 2 : 0;
    };
    int lt = truth(l), rt = truth(r);
    if (is_and) {
      if (lt == 0 || rt == 0) return SqlVal{Constant::make_bool(false)};
      if (lt == -1) return l;
      if (rt == -1) return r;
      int k = std::min(lt, rt);
      return k == 1 ? SqlVal{} : SqlVal{Constant::make_bool(true)};
    }
    if (lt == 2 || rt == 2) return SqlVal{Constant::make_bool(true)};
    if (lt == -1) return l;
    if (rt == -1) return r;
    int k = std::max(lt, rt);
    return k == 1 ? SqlVal{} : SqlVal{Constant::make_bool(false)};
  }
  if (sis<ScalarExpr::Cmp>(e) || sis<ScalarExpr::Arith>(e)) {
    bool is_cmp = sis<ScalarExpr::Cmp>(e);
    const std::string& op = is_cmp ? sas<ScalarExpr::Cmp>(e).op : sas<ScalarExpr::Arith>(e).op;
    const ScalarPtr& le = is_cmp ? sas<ScalarExpr::Cmp>(e).lhs : sas<ScalarExpr::Arith>(e).lhs;
    const ScalarPtr& re = is_cmp ? sas<ScalarExpr::Cmp>(e).rhs : sas<ScalarExpr::Arith>(e).rhs;
    auto l = oracle_eval_expr(le, scope);
    auto r = oracle_eval_expr(re, scope);
    // Strict: NULL absorbs, even past an error on the other side.
    if (l.ok() && !l.value()) return SqlVal{};
    if (r.ok() && !r.value()) return SqlVal{};
    if (!l.ok()) return l;
    if (!r.ok()) return r;
    auto out = apply_prim_constants(op, {*l.value(), *r.value()});
    if (!out.ok()) return format_eval_error(out.error());
    return SqlVal{out.value()};
  }
  const auto& cw = sas<ScalarExpr::CaseWhen>(e);
  auto c = oracle_eval_expr(cw.cond, scope);
  if (!c) return c;
  bool take_then = c.value().has_value() && c.value()->as_bool();
  return oracle_eval_expr(take_then ? cw.then_expr : cw.else_expr, scope);
}

}  // namespace

Result<Value, std::string> sql_oracle_eval(const SqlQuery& q, const Database& db) {
  std::vector<Value> rows_out;
  for (const SelectBranch& branch : q.branches) {
    std::vector<std::pair<const TableDecl*, const std::vector<std::vector<Value>>*>> tables;
    for (const auto& [table, alias] : branch.from) {
      const TableDecl* decl = db.schema.find_table(table);
      const auto* rows = db.rows_of(table);
      if (!decl || !rows) return std::string("unknown table '" + table + "'");
      tables.emplace_back(decl, rows);
    }
    // Odometer over the cross product.
    bool any_empty = false;
    for (const auto& [decl, rows] : tables)
      if (rows->empty()) any_empty = true;
    if (any_empty) continue;

    std::vector<size_t> idx(tables.size(), 0);
    bool done = false;
    while (!done) {
      RowScope scope;
      for (size_t i = 0; i < tables.size(); i++)
        scope.rows.emplace_back(branch.from[i].second, tables[i].first,
                                &(*tables[i].second)[idx[i]]);

      bool keep = true;
      if (branch.where) {
        auto w = oracle_eval_expr(*branch.where, scope);
        if (!w) return w.error();
        keep = w.value().has_value() && w.value()->as_bool();
      }
      if (keep) {
        std::vector<std::pair<std::string, Value>> fields;
        for (const auto& [alias, expr] : branch.projections) {
          auto v = oracle_eval_expr(expr, scope);
          if (!v) return v.error();
          fields.emplace_back(alias, v.value() ? val::cnst(*v.value()) : val::null_());
        }
        rows_out.push_back(val::record(std::move(fields)));
      }

      size_t d = tables.size();
      for (;;) {
        if (d == 0) {
          done = true;
          break;
        }
        d--;
        if (++idx[d] < tables[d].second->size()) break;
        idx[d] = 0;
      }
    }
  }
  return val::set(std::move(rows_out));
}

}  // namespace nrc
