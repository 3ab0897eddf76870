#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/data.hpp"
#include "nullnrc/result.hpp"

namespace nrc {

struct ScalarExpr;
using ScalarPtr = std::shared_ptr<const ScalarExpr>;

struct ScalarExpr {
  struct ColRef {
    std::string binder;
    std::string column;
  };
  struct Lit {
    Constant c;
  };
  struct Null {};
  struct IsNullExpr {
    ScalarPtr arg;
  };
  struct Not {
    ScalarPtr arg;
  };
  struct And {
    ScalarPtr lhs, rhs;
  };
  struct Or {
    ScalarPtr lhs, rhs;
  };
  struct Cmp {
    std::string op;  // = <> < <= > >=
    ScalarPtr lhs, rhs;
  };
  struct Arith {
    std::string op;  // + - * /
    ScalarPtr lhs, rhs;
  };
  struct CaseWhen {
    ScalarPtr cond, then_expr, else_expr;
  };

  std::variant<ColRef, Lit, Null, IsNullExpr, Not, And, Or, Cmp, Arith, CaseWhen> node;
};

struct SelectBranch {
  std::vector<std::pair<std::string, ScalarPtr>> projections;  // alias -> expr
  std::vector<std::pair<std::string, std::string>> from;       // (table, binder alias)
  std::optional<ScalarPtr> where;
};

struct SqlQuery {
  std::vector<SelectBranch> branches;  // joined with UNION (set semantics)
};

// Pre: is_sql_normal_form(m). Each union branch becomes a SELECT; binder
// rows are expanded column-wise; empty() predicates are rejected (no
// EXISTS emission).
Result<SqlQuery, std::string> to_sql(const TermPtr& m, const Schema& schema);
Result<SqlQuery, std::string> to_sql(const TermPtr& m, const Schema& schema,
                                     const TyPtr& result_ty);

// Deterministic SQL text, one statement terminated by ";\n".
std::string render(const SqlQuery& q);

// Naive in-process evaluation of the SQL subset with SQL null semantics:
// cross product, K3 WHERE keeping only TRUE rows, projection, UNION dedup.
Result<Value, std::string> sql_oracle_eval(const SqlQuery& q, const Database& db);

}  // namespace nrc
