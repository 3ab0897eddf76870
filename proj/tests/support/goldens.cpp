#include "support/testutil.hpp"

namespace nrc::testutil {

// Inputs/outputs transcribed rule-by-rule from the rewrite tables; the
// harness checks the fired rule id, alpha-equality of the result, and
// subject reduction.
std::vector<Golden> golden_rules() {
  TyPtr set_int = ty::set(ty::int_());
  return {
      {"ProjBeta", Mode::NRC, "{a = 1, b = true}.a", "1", RuleId::ProjBeta, nullptr},
      {"PrimDelta arithmetic", Mode::NRC, "1 + 2", "3", RuleId::PrimDelta, nullptr},
      {"PrimDelta K3 anchored", Mode::NRC_NULL, "false && null", "false", RuleId::PrimDelta,
       nullptr},
      {"PrimDelta K3 unknown", Mode::NRC_NULL, "true && null", "null", RuleId::PrimDelta,
       ty::bool_()},
      {"PrimDelta partial annihilator", Mode::NRC_NULL, "false && isnull(1 + null)", "false",
       RuleId::PrimDelta, nullptr},
      {"CompEmptyHead", Mode::NRC, "for (x <- [1]) []", "[]", RuleId::CompEmptyHead, set_int},
      {"CompEmptySource", Mode::NRC, "for (x <- []) yield x", "[]", RuleId::CompEmptySource,
       set_int},
      {"CompSingleton", Mode::NRC, "for (x <- [5]) yield x + 1", "[5 + 1]", RuleId::CompSingleton,
       nullptr},
      {"CompUnionHead", Mode::NRC, "for (x <- table plain) ([x.k] ++ [x.k + 1])",
       "(for (x <- table plain) yield x.k) ++ (for (x <- table plain) yield x.k + 1)",
       RuleId::CompUnionHead, nullptr},
      {"CompUnionSource", Mode::NRC, "for (x <- [1] ++ [2]) yield x",
       "(for (x <- [1]) yield x) ++ (for (x <- [2]) yield x)", RuleId::CompUnionSource, nullptr},
      {"CompNested", Mode::NRC, "for (y <- for (x <- table plain) yield x.k) yield y + 1",
       "for (x <- table plain) (for (y <- [x.k]) yield y + 1)", RuleId::CompNested, nullptr},
      {"CompNested binder freshening", Mode::NRC,
       "for (x <- for (x <- table plain) yield x.k) yield x",
       "for (z <- table plain) (for (x <- [z.k]) yield x)", RuleId::CompNested, nullptr},
      {"CompWhereSource", Mode::NRC, "for (x <- table plain where empty(table plain)) yield x.k",
       "(for (x <- table plain) yield x.k) where empty(table plain)", RuleId::CompWhereSource,
       nullptr},
      {"WhereTrue", Mode::NRC, "[1] where true", "[1]", RuleId::WhereTrue, nullptr},
      {"WhereFalse", Mode::NRC, "[1] where false", "[]", RuleId::WhereFalse, nullptr},
      {"WhereEmpty", Mode::NRC, "[] where empty(table plain)", "[]", RuleId::WhereEmpty, set_int},
      {"WhereUnion", Mode::NRC, "([1] ++ [2]) where empty(table plain)",
       "([1] where empty(table plain)) ++ ([2] where empty(table plain))", RuleId::WhereUnion,
       nullptr},
      {"WhereComp", Mode::NRC, "(for (x <- table plain) yield x.k) where empty(table plain)",
       "for (x <- table plain) ([x.k] where empty(table plain))", RuleId::WhereComp, nullptr},
      {"WhereComp binder freshening", Mode::NRC,
       "for (x <- table plain) ((for (x <- table plain) yield x.k) where x.b)",
       "for (x <- table plain) (for (z <- table plain) ([z.k] where x.b))", RuleId::WhereComp,
       nullptr},
      {"WhereWhere", Mode::NRC, "([1] where empty(table plain)) where 1 = 2",
       "[1] where (empty(table plain) && 1 = 2)", RuleId::WhereWhere, nullptr},
      {"EmptyWrap", Mode::NRC, "empty([1])", "empty(for (w <- [1]) yield {})", RuleId::EmptyWrap,
       nullptr},
      {"IfRecord", Mode::NRC, "if empty(table plain) then {a = 1} else {a = 2}",
       "{a = if empty(table plain) then {a = 1}.a else {a = 2}.a}", RuleId::IfRecord, nullptr},
      {"IfSetNRC", Mode::NRC, "if empty(table plain) then [1] else [2]",
       "([1] where empty(table plain)) ++ ([2] where !empty(table plain))", RuleId::IfSetNRC,
       nullptr},
      {"IfSetNRC in nrc_opt", Mode::NRC_OPT, "if empty(table plain) then [1] else [2]",
       "([1] where empty(table plain)) ++ ([2] where !empty(table plain))", RuleId::IfSetNRC,
       nullptr},
      {"CaseNone", Mode::NRC_OPT, "case none of { none -> 0 | some x -> x + 1 }", "0",
       RuleId::CaseNone, nullptr},
      {"CaseSome", Mode::NRC_OPT, "case some 3 of { none -> 0 | some x -> x + 1 }", "3 + 1",
       RuleId::CaseSome, nullptr},
      {"WhereNull", Mode::NRC_NULL, "[1] where null", "[]", RuleId::WhereNull, nullptr},
      {"IfSetNull", Mode::NRC_NULL, "if empty(table plain) then [1] else [2]",
       "([1] where empty(table plain)) ++ "
       "([2] where (isnull(empty(table plain)) || !empty(table plain)))",
       RuleId::IfSetNull, nullptr},
      {"IsNullNull", Mode::NRC_NULL, "isnull(null)", "true", RuleId::IsNullNull, nullptr},
      {"IsNullConst", Mode::NRC_NULL, "isnull(7)", "false", RuleId::IsNullConst, nullptr},
      {"PrimNullStrict", Mode::NRC_NULL, "null + 3", "null", RuleId::PrimNullStrict, ty::int_()},
  };
}

}  // namespace nrc::testutil
