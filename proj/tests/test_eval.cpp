#include "doctest.h"
#include "support/gen.hpp"
#include "support/testutil.hpp"

using namespace nrc;
using namespace nrc::term;
using nrc::testutil::eval_closed;
using nrc::testutil::eval_ok;
using nrc::testutil::parse_ok;

namespace {

const Database& db() { return testgen::fixture_db(); }

Value run(Mode mode, const std::string& src) { return eval_ok(mode, db(), parse_ok(src)); }

// Kleene's tables, computed independently as min/max/complement on
// {false=0, unknown=1/2, true=1} and used as the oracle here.
double kleene(double a, double b, char op) {
  if (op == '&') return std::min(a, b);
  if (op == '|') return std::max(a, b);
  return 1.0 - a;
}

Value truth_to_value(double v) {
  if (v == 0.0) return val::bool_(false);
  if (v == 1.0) return val::bool_(true);
  return val::null_();
}

TermPtr truth_to_term(double v) {
  if (v == 0.0) return bool_(false);
  if (v == 1.0) return bool_(true);
  return null_();
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("arithmetic and strict null propagation") {
    CHECK(run(Mode::NRC, "1 + 2") == val::int_(3));
    CHECK(run(Mode::NRC_NULL, "null + 3") == val::null_());
    CHECK(run(Mode::NRC_NULL, "1 < null") == val::null_());
    CHECK(run(Mode::NRC_NULL, "null = null") == val::null_());
    CHECK(run(Mode::NRC, "7 / 2") == val::int_(3));
    CHECK(run(Mode::NRC, "\"a\" < \"b\"") == val::bool_(true));
    CHECK(run(Mode::NRC, "1.5 + 0.25") == val::flt(1.75));
  }

  TEST_CASE("strictness is exhaustive over small argument vectors") {
    const char* strict_ops[] = {"+", "-", "*", "/", "=", "<>", "<", "<=", ">", ">="};
    std::vector<std::pair<TermPtr, TermPtr>> samples = {
        {int_(3), int_(2)}, {int_(-1), int_(0)}, {flt(1.5), flt(0.5)}, {flt(-0.25), flt(2.0)}};
    for (const char* op : strict_ops) {
      for (auto& [a, b] : samples) {
        bool cmp = std::string(op) != "+" && std::string(op) != "-" &&
                   std::string(op) != "*" && std::string(op) != "/";
        if (!cmp && is<Term::Const>(a) && as<Term::Const>(a).c.ty == BaseTy::Bool) continue;
        CHECK(eval_ok(Mode::NRC_NULL, db(), prim(op, {null_(), b})) == val::null_());
        CHECK(eval_ok(Mode::NRC_NULL, db(), prim(op, {a, null_()})) == val::null_());
        CHECK(eval_ok(Mode::NRC_NULL, db(), prim(op, {null_(), null_()})) == val::null_());
      }
    }
    // String and bool comparisons propagate null too.
    CHECK(run(Mode::NRC_NULL, "\"a\" = null") == val::null_());
    CHECK(run(Mode::NRC_NULL, "true <> null") == val::null_());
  }

  TEST_CASE("connectives follow the Kleene tables") {
    const double truths[] = {0.0, 0.5, 1.0};
    for (double a : truths) {
      CHECK(eval_ok(Mode::NRC_NULL, db(), prim("not", {truth_to_term(a)})) ==
            truth_to_value(kleene(a, 0, '!')));
      for (double b : truths) {
        CHECK(eval_ok(Mode::NRC_NULL, db(), prim("and", {truth_to_term(a), truth_to_term(b)})) ==
              truth_to_value(kleene(a, b, '&')));
        CHECK(eval_ok(Mode::NRC_NULL, db(), prim("or", {truth_to_term(a), truth_to_term(b)})) ==
              truth_to_value(kleene(a, b, '|')));
      }
    }
    // The anchored case.
    CHECK(run(Mode::NRC_NULL, "false && null") == val::bool_(false));
  }

  TEST_CASE("k3_tables agrees with the Kleene oracle and De Morgan") {
    K3Tables t = k3_tables();
    const K3 all[] = {K3::False, K3::Unknown, K3::True};
    auto to_truth = [](K3 k) { return k == K3::False ? 0.0 : (k == K3::True ? 1.0 : 0.5); };
    for (K3 a : all) {
      CHECK(to_truth(t.not_table[static_cast<int>(a)]) == kleene(to_truth(a), 0, '!'));
      for (K3 b : all) {
        CHECK(to_truth(t.and_table[static_cast<int>(a)][static_cast<int>(b)]) ==
              kleene(to_truth(a), to_truth(b), '&'));
        CHECK(to_truth(t.or_table[static_cast<int>(a)][static_cast<int>(b)]) ==
              kleene(to_truth(a), to_truth(b), '|'));
        // De Morgan duality.
        CHECK(k3_not(k3_and(a, b)) == k3_or(k3_not(a), k3_not(b)));
      }
    }
  }

  TEST_CASE("where and if on null conditions") {
    CHECK(run(Mode::NRC_NULL, "[1] where null") == val::set({}));
    CHECK(run(Mode::NRC_NULL, "[1] where false") == val::set({}));
    CHECK(run(Mode::NRC_NULL, "[1] where true") == val::set({val::int_(1)}));
    // A null condition takes the else branch at every type.
    CHECK(run(Mode::NRC_NULL, "if null then 1 else 2") == val::int_(2));
    CHECK(run(Mode::NRC_NULL, "if null then [1] else [2]") == val::set({val::int_(2)}));
  }

  TEST_CASE("isnull and case") {
    CHECK(run(Mode::NRC_NULL, "isnull(null)") == val::bool_(true));
    CHECK(run(Mode::NRC_NULL, "isnull(7)") == val::bool_(false));
    CHECK(run(Mode::NRC_OPT, "case none of { none -> 0 | some x -> x }") == val::int_(0));
    CHECK(run(Mode::NRC_OPT, "case some 5 of { none -> 0 | some x -> x + 1 }") == val::int_(6));
  }

  TEST_CASE("sets canonicalize during evaluation") {
    CHECK(run(Mode::NRC, "[2] ++ [1] ++ [2]") == val::set({val::int_(1), val::int_(2)}));
    CHECK(run(Mode::NRC, "for (x <- [1] ++ [1]) yield x") == val::set({val::int_(1)}));
    CHECK(run(Mode::NRC, "empty([])") == val::bool_(true));
    CHECK(run(Mode::NRC, "empty([1])") == val::bool_(false));
  }

  TEST_CASE("set laws hold on random closed terms") {
    testgen::GenConfig cfg;
    cfg.mode = Mode::NRC_NULL;
    cfg.max_depth = 4;
    testgen::TermGen gen(db().schema, 21, cfg);
    int done = 0;
    while (done < 60) {
      TyPtr elem = ty::int_();
      TermPtr m = gen.term_at(ty::set(elem));
      TermPtr n = gen.term_at(ty::set(elem));
      auto vm = eval_closed(Mode::NRC_NULL, db(), m);
      auto vn = eval_closed(Mode::NRC_NULL, db(), n);
      if (!vm.ok() || !vn.ok()) continue;
      Value mn = eval_ok(Mode::NRC_NULL, db(), union_(m, n));
      Value nm = eval_ok(Mode::NRC_NULL, db(), union_(n, m));
      CHECK(mn == nm);
      CHECK(eval_ok(Mode::NRC_NULL, db(), union_(m, m)) == vm.value());
      CHECK(eval_ok(Mode::NRC_NULL, db(), union_(m, empty_set())) == vm.value());
      done++;
    }
  }

  TEST_CASE("the motivating disease query") {
    auto two_rows = load_database(R"({"tables": {"diseases": {
        "columns": [{"name": "id", "type": "int"},
                    {"name": "name", "type": "string"},
                    {"name": "type", "type": "int", "nullable": true}],
        "rows": [[1, "covid-19", null], [2, "flu", 1]]}}})");
    REQUIRE(two_rows.ok());
    TermPtr q = parse_ok("for (x <- table diseases) where (x.name = \"covid-19\") yield x");
    Value got = eval_ok(Mode::NRC_NULL, two_rows.value().db, q);
    Value want = val::set({val::record(
        {{"id", val::int_(1)}, {"name", val::str("covid-19")}, {"type", val::null_()}})});
    CHECK(got == want);
  }

  TEST_CASE("tables present option views in nrc_opt") {
    Value got = eval_ok(Mode::NRC_OPT, db(),
                        parse_ok("for (x <- table diseases) where (x.id = 1) yield x"));
    Value want = val::set({val::record(
        {{"id", val::int_(1)}, {"name", val::str("covid-19")}, {"type", val::none()}})});
    CHECK(got == want);
    Value got2 = eval_ok(Mode::NRC_OPT, db(),
                         parse_ok("for (x <- table diseases) where (x.id = 2) yield x"));
    Value want2 = val::set({val::record(
        {{"id", val::int_(2)}, {"name", val::str("flu")}, {"type", val::some(val::int_(1))}})});
    CHECK(got2 == want2);
  }

  TEST_CASE("default values") {
    CHECK(default_value(ty::int_()) == val::int_(0));
    CHECK(default_value(ty::string_()) == val::str(""));
    CHECK(default_value(ty::set(ty::int_())) == val::set({}));
    CHECK(default_value(ty::record({{"a", ty::bool_()}})) ==
          val::record({{"a", val::bool_(false)}}));
    CHECK(default_value(ty::option(ty::int_())) == val::none());
  }

  TEST_CASE("division by zero is an error, not a null") {
    auto r = eval_closed(Mode::NRC, db(), parse_ok("1 / 0"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == EvalError::Kind::DivideByZero);
    auto rf = eval_closed(Mode::NRC, db(), parse_ok("1.5 / 0.0"));
    REQUIRE_FALSE(rf.ok());
    CHECK(rf.error().kind == EvalError::Kind::DivideByZero);
  }

  TEST_CASE("errors are absorbed exactly where rewriting discards them") {
    // Null absorbs a sibling error in strict primitives.
    CHECK(run(Mode::NRC_NULL, "(1 / 0) + null") == val::null_());
    // An annihilating connective literal absorbs an error too.
    CHECK(run(Mode::NRC_NULL, "false && (1 / 0 = 1)") == val::bool_(false));
    CHECK(run(Mode::NRC_NULL, "(1 / 0 = 1) && false") == val::bool_(false));
    CHECK(run(Mode::NRC_NULL, "true || (1 / 0 = 1)") == val::bool_(true));
    // Lazy where: a false condition never evaluates the body.
    CHECK(run(Mode::NRC, "[1 / 0] where false") == val::set({}));
    // But a needed error surfaces.
    CHECK_FALSE(eval_closed(Mode::NRC_NULL, db(), parse_ok("true && (1 / 0 = 1)")).ok());
  }

  TEST_CASE("unknown table surfaces as an eval error") {
    auto r = eval_closed(Mode::NRC, db(), table("missing"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().kind == EvalError::Kind::UnknownTable);
  }
}
