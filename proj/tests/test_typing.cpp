#include "doctest.h"
#include "support/gen.hpp"
#include "support/testutil.hpp"

using namespace nrc;
using namespace nrc::term;
using nrc::testutil::parse_ok;
using nrc::testutil::type_of;

namespace {

const Schema& schema() { return testgen::fixture_db().schema; }

bool fails_with(Mode mode, const std::string& src, TypeError::Kind kind) {
  auto r = type_of(mode, schema(), parse_ok(src));
  return !r.ok() && r.error().kind == kind;
}

TyPtr ok_ty(Mode mode, const std::string& src) {
  auto r = type_of(mode, schema(), parse_ok(src));
  REQUIRE_MESSAGE(r.ok(), src << " -- " << (r.ok() ? std::string() : format_type_error(r.error())));
  return r.value();
}

bool contains_opt_or_null(const TermPtr& t) {
  if (is<Term::NullLit>(t) || is<Term::IsNull>(t) || is<Term::NoneLit>(t) ||
      is<Term::SomeLit>(t) || is<Term::Case>(t))
    return true;
  for (int i = 0; i < child_count(t); i++)
    if (contains_opt_or_null(child_at(t, i))) return true;
  return false;
}

}  // namespace

TEST_SUITE("typing") {
  TEST_CASE("null takes its type from context") {
    CHECK(ty_eq(ok_ty(Mode::NRC_NULL, "null + 1"), ty::int_()));
    CHECK(ty_eq(ok_ty(Mode::NRC_NULL, "null = \"a\""), ty::bool_()));
    CHECK(ty_eq(ok_ty(Mode::NRC_NULL, "[{t = 1}] where isnull(null)"),
                ty::set(ty::record({{"t", ty::int_()}}))));
  }

  TEST_CASE("null is rejected away from base types") {
    CHECK(fails_with(Mode::NRC_NULL, "[null]", TypeError::Kind::NullAtNonBase));
    // Standalone null has no determinable base type.
    CHECK(fails_with(Mode::NRC_NULL, "null", TypeError::Kind::Mismatch));
    CHECK(fails_with(Mode::NRC_NULL, "isnull([1])", TypeError::Kind::Mismatch));
  }

  TEST_CASE("options typecheck in nrc_opt") {
    CHECK(ty_eq(ok_ty(Mode::NRC_OPT, "some 3"), ty::option(ty::int_())));
    CHECK(ty_eq(ok_ty(Mode::NRC_OPT, "case some 3 of { none -> 0 | some x -> x + 1 }"),
                ty::int_()));
    CHECK(ty_eq(ok_ty(Mode::NRC_OPT, "some some true"),
                ty::option(ty::option(ty::bool_()))));
    // none alone is ambiguous.
    CHECK(fails_with(Mode::NRC_OPT, "none", TypeError::Kind::Mismatch));
    // but a sibling branch can determine it.
    CHECK(ty_eq(ok_ty(Mode::NRC_OPT, "if true then none else some 1"), ty::option(ty::int_())));
  }

  TEST_CASE("mode gating") {
    CHECK(fails_with(Mode::NRC, "null", TypeError::Kind::ModeViolation));
    CHECK(fails_with(Mode::NRC, "some 1", TypeError::Kind::ModeViolation));
    CHECK(fails_with(Mode::NRC, "isnull(1)", TypeError::Kind::ModeViolation));
    CHECK(fails_with(Mode::NRC_OPT, "null", TypeError::Kind::ModeViolation));
    CHECK(fails_with(Mode::NRC_NULL, "some 1", TypeError::Kind::ModeViolation));
  }

  TEST_CASE("plain mismatches") {
    CHECK(fails_with(Mode::NRC, "if true then 1 else \"a\"", TypeError::Kind::Mismatch));
    CHECK(fails_with(Mode::NRC, "1 + true", TypeError::Kind::Mismatch));
    CHECK(fails_with(Mode::NRC, "1 + \"a\"", TypeError::Kind::Mismatch));
    CHECK(fails_with(Mode::NRC, "x", TypeError::Kind::UnboundVar));
    CHECK(fails_with(Mode::NRC, "{a = 1}.b", TypeError::Kind::FieldMissing));
    CHECK(fails_with(Mode::NRC, "[1] ++ [true]", TypeError::Kind::Mismatch));
    CHECK(fails_with(Mode::NRC, "empty(1)", TypeError::Kind::Mismatch));
    // ambiguous: [] with no context
    CHECK(fails_with(Mode::NRC, "[]", TypeError::Kind::Mismatch));
    // inner unresolved element types are tolerated when the top type is fixed
    CHECK(ty_eq(ok_ty(Mode::NRC, "empty([])"), ty::bool_()));
  }

  TEST_CASE("arity is checked") {
    TypeEnv env;
    auto r = typecheck(Mode::NRC, schema(), env, prim("+", {int_(1)}));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == TypeError::Kind::ArityMismatch);
  }

  TEST_CASE("tables type per mode") {
    TyPtr null_view = ok_ty(Mode::NRC_NULL, "table diseases");
    CHECK(ty_eq(null_view, ty::set(ty::record({{"id", ty::int_()},
                                               {"name", ty::string_()},
                                               {"type", ty::int_()}}))));
    TyPtr opt_view = ok_ty(Mode::NRC_OPT, "table diseases");
    CHECK(ty_eq(opt_view, ty::set(ty::record({{"id", ty::int_()},
                                              {"name", ty::string_()},
                                              {"type", ty::option(ty::int_())}}))));
    // Plain NRC cannot see nullable tables, only fully non-null ones.
    CHECK(fails_with(Mode::NRC, "table diseases", TypeError::Kind::ModeViolation));
    CHECK(ty_is_relation(ok_ty(Mode::NRC, "table plain")));
    CHECK(fails_with(Mode::NRC, "table nope", TypeError::Kind::UnknownTable));
  }

  TEST_CASE("where types like a guarded if") {
    CHECK(ty_eq(ok_ty(Mode::NRC_NULL, "[1] where true"), ty::set(ty::int_())));
    CHECK(fails_with(Mode::NRC_NULL, "[1] where 2", TypeError::Kind::Mismatch));
    CHECK(fails_with(Mode::NRC_NULL, "1 where true", TypeError::Kind::Mismatch));
  }

  TEST_CASE("checking against an expected type resolves context") {
    // [null] is only typeable when the element type is supplied.
    auto r = type_of(Mode::NRC_NULL, schema(), parse_ok("[null]"), ty::set(ty::int_()));
    REQUIRE(r.ok());
    CHECK(ty_eq(r.value(), ty::set(ty::int_())));
    auto bad = type_of(Mode::NRC_NULL, schema(), parse_ok("[null]"),
                       ty::set(ty::set(ty::int_())));
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.error().kind == TypeError::Kind::NullAtNonBase);
    // Record fields are matched by label, not position.
    auto rec = type_of(Mode::NRC, schema(), parse_ok("{a = 1, b = true}"),
                       ty::record({{"b", ty::bool_()}, {"a", ty::int_()}}));
    CHECK(rec.ok());
  }

  TEST_CASE("typechecking is deterministic and weakening-safe") {
    testgen::GenConfig cfg;
    cfg.mode = Mode::NRC_NULL;
    cfg.max_depth = 5;
    testgen::TermGen gen(schema(), 99, cfg);
    for (int i = 0; i < 120; i++) {
      auto [t, want] = gen.query();
      TypeEnv env;
      auto r1 = typecheck(Mode::NRC_NULL, schema(), env, t, want);
      REQUIRE(r1.ok());
      auto r2 = typecheck(Mode::NRC_NULL, schema(), env, t, want);
      REQUIRE(r2.ok());
      CHECK(ty_eq(r1.value(), r2.value()));
      // Weakening: an unused binding changes nothing.
      TypeEnv wider;
      wider.bind("unused_fresh_var", ty::string_());
      auto r3 = typecheck(Mode::NRC_NULL, schema(), wider, t, want);
      REQUIRE(r3.ok());
      CHECK(ty_eq(r1.value(), r3.value()));
    }
  }

  TEST_CASE("well-typed nrc terms contain no option or null constructs") {
    testgen::GenConfig cfg;
    cfg.mode = Mode::NRC;
    cfg.max_depth = 6;
    testgen::TermGen gen(schema(), 7, cfg);
    for (int i = 0; i < 150; i++) {
      auto [t, want] = gen.query();
      TypeEnv env;
      auto r = typecheck(Mode::NRC, schema(), env, t, want);
      REQUIRE(r.ok());
      CHECK_FALSE(contains_opt_or_null(t));
    }
  }

  TEST_CASE("subject reduction helper") {
    TermPtr m = project(record({{"a", int_(1)}}), "a");
    CHECK(check_subject_reduction(Mode::NRC, schema(), m, int_(1)));
    CHECK(check_subject_reduction(Mode::NRC, schema(),
                                  where(single(int_(1)), bool_(true)), single(int_(1))));
    CHECK_FALSE(check_subject_reduction(Mode::NRC, schema(), int_(1), str("a")));
  }

  TEST_CASE("environment lookup is innermost-first") {
    TypeEnv env;
    env.bind("x", ty::int_());
    env.bind("x", ty::bool_());
    auto r = typecheck(Mode::NRC, schema(), env, parse_ok("x && true"));
    CHECK(r.ok());
  }
}
