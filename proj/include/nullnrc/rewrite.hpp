#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/data.hpp"

namespace nrc {

// One identifier per rewrite rule; enum order is the rule priority at a
// redex. Each rule is enabled exactly in the modes of its rule set:
// common rules everywhere, the if-splitting rule in NRC and NRC_OPT, case
// rules in NRC_OPT, null rules in NRC_NULL.
enum class RuleId {
  ProjBeta,
  PrimDelta,
  CompEmptyHead,
  CompEmptySource,
  CompSingleton,
  CompUnionHead,
  CompUnionSource,
  CompNested,
  CompWhereSource,
  WhereTrue,
  WhereFalse,
  WhereEmpty,
  WhereUnion,
  WhereComp,
  WhereWhere,
  EmptyWrap,
  IfRecord,
  IfSetNRC,
  CaseNone,
  CaseSome,
  WhereNull,
  IfSetNull,
  IsNullNull,
  IsNullConst,
  PrimNullStrict,
};

constexpr int kRuleCount = static_cast<int>(RuleId::PrimNullStrict) + 1;

const char* rule_name(RuleId id);
bool rule_enabled(RuleId id, Mode mode);

struct TraceStep {
  RuleId rule;
  std::string path;  // dot-separated child indices; "" is the root
  TermPtr before;    // subterm at path before the step
  TermPtr after;     // replacement
};

using Trace = std::vector<TraceStep>;

std::string trace_to_text(const Trace& trace);

// Re-applies a trace to `input`; returns nullptr if a path is invalid.
TermPtr replay_trace(const TermPtr& input, const Trace& trace);

struct StepResult {
  TermPtr term;  // whole term after the step
  TraceStep step;
};

// Applies the first enabled rule at the leftmost-outermost redex, or
// nullopt if m is a normal form. Pre: m well-typed in `mode`. `expected`
// resolves types for terms that only check against a known type; the
// type-guarded rules (EmptyWrap, IfRecord, if-splitting) consult it.
std::optional<StepResult> step(Mode mode, const Schema& schema, const TermPtr& m,
                               const TyPtr& expected = nullptr);

struct NormalizeResult {
  TermPtr term;
  Trace trace;
  bool fuel_exhausted = false;
};

NormalizeResult normalize(Mode mode, const Schema& schema, const TermPtr& m, int fuel,
                          const TyPtr& expected = nullptr);

// Accepts unions of comprehension nests over tables whose innermost body
// is a (possibly filtered) singleton record row; the shape that maps
// directly onto conjunctive SQL. `expected` supplies the flat result type
// for terms whose type is not inferable in isolation (e.g. a query that
// normalized to the empty set, or null-valued projections).
bool is_sql_normal_form(const TermPtr& m, const Schema& schema, const TyPtr& expected = nullptr);

}  // namespace nrc
