#include "doctest.h"
#include "nullnrc/translate.hpp"
#include "support/gen.hpp"
#include "support/testutil.hpp"

using namespace nrc;
using namespace nrc::term;
using nrc::testutil::eval_closed;
using nrc::testutil::eval_ok;
using nrc::testutil::parse_ok;

namespace {

const Database& db() { return testgen::fixture_db(); }
const Schema& schema() { return db().schema; }

bool contains_opt_construct(const TermPtr& t) {
  if (is<Term::NoneLit>(t) || is<Term::SomeLit>(t) || is<Term::Case>(t)) return true;
  for (int i = 0; i < child_count(t); i++)
    if (contains_opt_construct(child_at(t, i))) return true;
  return false;
}

bool contains_null_construct(const TermPtr& t) {
  if (is<Term::NullLit>(t) || is<Term::IsNull>(t)) return true;
  for (int i = 0; i < child_count(t); i++)
    if (contains_null_construct(child_at(t, i))) return true;
  return false;
}

bool ty_contains_option(const TyPtr& t) {
  if (ty_is<Ty::Option>(t)) return true;
  if (ty_is<Ty::Set>(t)) return ty_contains_option(ty_as<Ty::Set>(t).elem);
  if (ty_is<Ty::Record>(t)) {
    for (const auto& [l, f] : ty_as<Ty::Record>(t).fields)
      if (ty_contains_option(f)) return true;
  }
  return false;
}

const PrimSig& sig_of(const std::string& name) { return prim_signatures(name).front(); }

Value eval_lifted(const std::string& prim_name, std::vector<TermPtr> args) {
  TermPtr t = instantiate_lifted(lift_prim(sig_of(prim_name)), args);
  return eval_ok(Mode::NRC_OPT, db(), t);
}

}  // namespace

TEST_SUITE("translate") {
  TEST_CASE("option type translation") {
    CHECK(ty_eq(opt_to_nrc_ty(ty::option(ty::int_())),
                ty::record({{"isnull", ty::bool_()}, {"val", ty::int_()}})));
    // Nested options translate by structural recursion.
    TyPtr nested = ty::option(ty::record({{"a", ty::option(ty::int_())}, {"b", ty::bool_()}}));
    TyPtr want = ty::record(
        {{"isnull", ty::bool_()},
         {"val", ty::record({{"a", ty::record({{"isnull", ty::bool_()}, {"val", ty::int_()}})},
                             {"b", ty::bool_()}})}});
    CHECK(ty_eq(opt_to_nrc_ty(nested), want));
    CHECK(ty_eq(opt_to_nrc_ty(ty::int_()), ty::int_()));
    CHECK_FALSE(ty_contains_option(opt_to_nrc_ty(nested)));
  }

  TEST_CASE("null type translation") {
    CHECK(ty_eq(null_to_opt_ty(ty::int_()), ty::option(ty::int_())));
    CHECK(ty_eq(null_to_opt_ty(ty::set(ty::record({{"a", ty::int_()}}))),
                ty::set(ty::record({{"a", ty::option(ty::int_())}}))));
    CHECK(ty_eq(null_to_opt_ty(ty::record({})), ty::record({})));
  }

  TEST_CASE("opt_to_nrc on the documented forms") {
    auto tr = [&](const std::string& src) {
      auto r = opt_to_nrc(parse_ok(src), schema());
      REQUIRE_MESSAGE(r.ok(), (r.ok() ? std::string() : r.error()));
      return r.value();
    };
    // none at a known option type becomes the isnull/default record.
    TermPtr none_tr = tr("if true then none else some 1");
    CHECK(alpha_eq(none_tr, parse_ok("if true then {isnull = true, val = 0} "
                                     "else {isnull = false, val = 1}")));
    CHECK(alpha_eq(tr("some 3"), parse_ok("{isnull = false, val = 3}")));

    TermPtr case_tr = tr("case some 2 of { none -> 0 | some x -> x }");
    CHECK(alpha_eq(case_tr, parse_ok("if {isnull = false, val = 2}.isnull then 0 "
                                     "else {isnull = false, val = 2}.val")));
  }

  TEST_CASE("opt_to_nrc output is option-free and well-typed in plain nrc") {
    testgen::GenConfig cfg;
    cfg.mode = Mode::NRC_OPT;
    cfg.max_depth = 5;
    testgen::TermGen gen(schema(), 501, cfg);
    int translated = 0;
    for (int i = 0; i < 100; i++) {
      auto [q, want_ty] = gen.query();
      auto r = opt_to_nrc(q, schema(), want_ty);
      if (!r.ok()) continue;  // queries over nullable tables are rejected
      translated++;
      CHECK_FALSE(contains_opt_construct(r.value()));
      TypeEnv env;
      auto ty = typecheck(Mode::NRC, schema(), env, r.value(), opt_to_nrc_ty(want_ty));
      CHECK_MESSAGE(ty.ok(), pretty(q));
    }
    CHECK(translated > 50);
  }

  TEST_CASE("opt_to_nrc rejects nullable tables") {
    auto r = opt_to_nrc(parse_ok("for (x <- table diseases) yield {i = x.id}"), schema());
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().find("nullable") != std::string::npos);
    // Fully non-null tables are fine.
    CHECK(opt_to_nrc(parse_ok("for (x <- table plain) yield {k = x.k}"), schema()).ok());
  }

  TEST_CASE("flatten law on the option corpus") {
    testgen::GenConfig cfg;
    cfg.mode = Mode::NRC_OPT;
    cfg.max_depth = 5;
    cfg.allow_tables = false;  // table-free here; tables covered above
    testgen::TermGen gen(schema(), 502, cfg);
    for (int i = 0; i < 120; i++) {
      auto [q, want_ty] = gen.query();
      auto r = opt_to_nrc(q, schema(), want_ty);
      REQUIRE(r.ok());
      auto direct = eval_closed(Mode::NRC_OPT, db(), q);
      auto translated = eval_closed(Mode::NRC, db(), r.value());
      REQUIRE(direct.ok() == translated.ok());
      if (direct.ok())
        CHECK_MESSAGE(flatten_opt_value(direct.value(), want_ty) == translated.value(),
                      "query: " << pretty(q));
    }
  }

  TEST_CASE("null_to_opt on the documented forms") {
    auto r = null_to_opt(parse_ok("null"), schema());
    REQUIRE(r.ok());
    CHECK(alpha_eq(r.value(), none()));
    auto c = null_to_opt(parse_ok("5"), schema());
    REQUIRE(c.ok());
    CHECK(alpha_eq(c.value(), some(int_(5))));

    // isnull(M) becomes a case analysis (some-wrapped to land at bool?).
    auto n = null_to_opt(parse_ok("isnull(null)"), schema());
    REQUIRE(n.ok());
    CHECK(alpha_eq(n.value(),
                   some(case_(none(), bool_(true), "y", bool_(false)))));

    // if translates through the isTrue guard.
    auto f = null_to_opt(parse_ok("if true then [1] else [2]"), schema());
    REQUIRE(f.ok());
    TermPtr want = if_(case_(some(bool_(true)), bool_(false), "b", var("b")),
                       single(some(int_(1))), single(some(int_(2))));
    CHECK(alpha_eq(f.value(), want));
  }

  TEST_CASE("null_to_opt wraps tables with retagging comprehensions") {
    auto r = null_to_opt(parse_ok("table diseases"), schema());
    REQUIRE(r.ok());
    TermPtr want = parse_ok(
        "for (r <- table diseases) yield {id = some r.id, name = some r.name, type = r.type}");
    CHECK(alpha_eq(r.value(), want));
    // Evaluating the wrapped table in nrc_opt matches the encoded raw rows.
    Value direct = eval_ok(Mode::NRC_NULL, db(), parse_ok("table diseases"));
    Value wrapped = eval_ok(Mode::NRC_OPT, db(), r.value());
    CHECK(encode_null_value(direct) == wrapped);
  }

  TEST_CASE("lifted primitives implement strict and three-valued behavior") {
    CHECK(eval_lifted("+", {some(int_(1)), some(int_(2))}) == val::some(val::int_(3)));
    CHECK(eval_lifted("+", {none(), some(int_(2))}) == val::none());
    CHECK(eval_lifted("+", {some(int_(1)), none()}) == val::none());
    CHECK(eval_lifted("=", {none(), none()}) == val::none());
    // K3 through the option encoding.
    CHECK(eval_lifted("and", {some(bool_(false)), none()}) == val::some(val::bool_(false)));
    CHECK(eval_lifted("and", {none(), some(bool_(false))}) == val::some(val::bool_(false)));
    CHECK(eval_lifted("and", {some(bool_(true)), none()}) == val::none());
    CHECK(eval_lifted("and", {none(), none()}) == val::none());
    CHECK(eval_lifted("or", {none(), some(bool_(true))}) == val::some(val::bool_(true)));
    CHECK(eval_lifted("or", {none(), some(bool_(false))}) == val::none());
    CHECK(eval_lifted("not", {none()}) == val::none());
    CHECK(eval_lifted("not", {some(bool_(false))}) == val::some(val::bool_(true)));
  }

  TEST_CASE("lifted instantiation avoids capturing argument variables") {
    // Arguments spelled like the template's own binders must stay free.
    TermPtr t = instantiate_lifted(lift_prim(sig_of("+")), {var("v0"), var("v1")});
    auto fv = free_vars(t);
    CHECK(fv.count("v0"));
    CHECK(fv.count("v1"));
  }

  TEST_CASE("encode law on the null corpus") {
    testgen::GenConfig cfg;
    cfg.mode = Mode::NRC_NULL;
    cfg.max_depth = 5;
    testgen::TermGen gen(schema(), 503, cfg);
    for (int i = 0; i < 120; i++) {
      auto [q, want_ty] = gen.query();
      auto r = null_to_opt(q, schema());
      REQUIRE(r.ok());
      CHECK_FALSE(contains_null_construct(r.value()));
      TypeEnv env;
      CHECK(typecheck(Mode::NRC_OPT, schema(), env, r.value(), null_to_opt_ty(want_ty)).ok());
      auto direct = eval_closed(Mode::NRC_NULL, db(), q);
      auto translated = eval_closed(Mode::NRC_OPT, db(), r.value());
      REQUIRE(direct.ok() == translated.ok());
      if (direct.ok())
        CHECK_MESSAGE(encode_null_value(direct.value()) == translated.value(),
                      "query: " << pretty(q));
    }
  }

  TEST_CASE("flatten keeps distinct set elements distinct") {
    // none and some(default) have different images, so no collapse occurs.
    Value v = val::set({val::none(), val::some(val::int_(0)), val::some(val::int_(1))});
    Value flat = flatten_opt_value(v, ty::set(ty::option(ty::int_())));
    CHECK(vas<VSet>(flat).elems.size() == 3);
  }
}
