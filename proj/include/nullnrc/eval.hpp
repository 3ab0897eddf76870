#pragma once

#include <string>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/data.hpp"
#include "nullnrc/result.hpp"

namespace nrc {

struct EvalError {
  enum class Kind { UnboundVar, StuckTerm, DivideByZero, UnknownTable };
  Kind kind;
  std::string detail;
};

const char* eval_error_kind_name(EvalError::Kind k);
std::string format_eval_error(const EvalError& e);

class ValueEnv {
 public:
  void bind(std::string name, Value v) { entries_.emplace_back(std::move(name), std::move(v)); }
  void pop() { entries_.pop_back(); }
  const Value* lookup(const std::string& name) const;

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

// Kleene three-valued logic; Unknown plays SQL's NULL.
enum class K3 { False = 0, Unknown = 1, True = 2 };

K3 k3_and(K3 a, K3 b);
K3 k3_or(K3 a, K3 b);
K3 k3_not(K3 a);

struct K3Tables {
  K3 and_table[3][3];
  K3 or_table[3][3];
  K3 not_table[3];
};
K3Tables k3_tables();

// Big-step evaluation; pre: m well-typed in `mode` against db's schema and
// the environment's types.
Result<Value, EvalError> eval(Mode mode, const Database& db, const ValueEnv& env,
                              const TermPtr& m);

Value default_value(const TyPtr& t);

// Applies a primitive to non-null constant arguments. Shared by the
// rewriter's delta rule and the SQL oracle so all evaluation paths agree.
Result<Constant, EvalError> apply_prim_constants(const std::string& op,
                                                 const std::vector<Constant>& args);

}  // namespace nrc
