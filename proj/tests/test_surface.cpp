#include "doctest.h"
#include "support/gen.hpp"
#include "support/testutil.hpp"

using namespace nrc;
using namespace nrc::term;
using nrc::testutil::parse_ok;

TEST_SUITE("surface") {
  TEST_CASE("parses the basic forms") {
    CHECK(alpha_eq(parse_ok("if x then [1] else []"),
                   if_(var("x"), single(int_(1)), empty_set())));
    CHECK(alpha_eq(parse_ok("case m of { none -> 0 | some y -> y }"),
                   case_(var("m"), int_(0), "y", var("y"))));
    CHECK(alpha_eq(parse_ok("some some 1"), some(some(int_(1)))));
    CHECK(alpha_eq(parse_ok("{}"), record({})));
    CHECK(alpha_eq(parse_ok("{a = 1, b = \"s\"}"), record({{"a", int_(1)}, {"b", str("s")}})));
    CHECK(alpha_eq(parse_ok("empty([1])"), is_empty(single(int_(1)))));
    CHECK(alpha_eq(parse_ok("isnull(x.t)"), is_null(project(var("x"), "t"))));
    CHECK(alpha_eq(parse_ok("table diseases"), table("diseases")));
  }

  TEST_CASE("comprehension sugar expands to nested comprehensions") {
    TermPtr q = parse_ok("for (x <- table diseases) where (x.name = \"covid-19\") yield x");
    TermPtr want = comp(where(single(var("x")),
                              prim("=", {project(var("x"), "name"), str("covid-19")})),
                        "x", table("diseases"));
    CHECK(alpha_eq(q, want));

    // Multi-binder sugar nests right-to-left with the filter innermost.
    TermPtr multi = parse_ok("for (x <- s, y <- t) where p yield 1");
    TermPtr want_multi =
        comp(comp(where(single(int_(1)), var("p")), "y", var("t")), "x", var("s"));
    CHECK(alpha_eq(multi, want_multi));

    // Bare-head form takes a delimited head.
    CHECK(alpha_eq(parse_ok("for (x <- s) [x]"), comp(single(var("x")), "x", var("s"))));
  }

  TEST_CASE("operator precedence") {
    CHECK(alpha_eq(parse_ok("1 + 2 * 3"), prim("+", {int_(1), prim("*", {int_(2), int_(3)})})));
    CHECK(alpha_eq(parse_ok("a && b || c"),
                   prim("or", {prim("and", {var("a"), var("b")}), var("c")})));
    CHECK(alpha_eq(parse_ok("!a && b"), prim("and", {prim("not", {var("a")}), var("b")})));
    // where binds looser than ++
    CHECK(alpha_eq(parse_ok("s ++ t where p"), where(union_(var("s"), var("t")), var("p"))));
    CHECK(alpha_eq(parse_ok("s where p where q"), where(where(var("s"), var("p")), var("q"))));
    // comparisons are non-associative; nesting needs parentheses
    CHECK_FALSE(parse_term("1 = 2 = 3").ok());
    CHECK(parse_term("(1 = 2) = (3 = 4)").ok());
  }

  TEST_CASE("negative literals") {
    CHECK(alpha_eq(parse_ok("-5"), int_(-5)));
    CHECK(alpha_eq(parse_ok("-1.5"), flt(-1.5)));
    CHECK(alpha_eq(parse_ok("1 - -1"), prim("-", {int_(1), int_(-1)})));
    CHECK(alpha_eq(parse_ok("-1 - 1"), prim("-", {int_(-1), int_(1)})));
    // A bare '-' is only a negative literal, not general negation.
    CHECK_FALSE(parse_term("-x").ok());
  }

  TEST_CASE("comments and whitespace") {
    CHECK(alpha_eq(parse_ok("# header\n [ 1 ] # trailing\n"), single(int_(1))));
  }

  TEST_CASE("keywords are usable as record labels") {
    // The option-elimination translation emits records labeled isnull/val.
    TermPtr rec = parse_ok("{isnull = true, val = 1}");
    CHECK(alpha_eq(rec, record({{"isnull", bool_(true)}, {"val", int_(1)}})));
    CHECK(alpha_eq(parse_ok("x.isnull"), project(var("x"), "isnull")));
    CHECK(alpha_eq(parse_ok("{table = 1}.table"), project(record({{"table", int_(1)}}), "table")));
    // Round trip through the printer.
    TermPtr t = project(record({{"where", int_(1)}, {"none", int_(2)}}), "none");
    auto back = parse_term(pretty(t));
    REQUIRE(back.ok());
    CHECK(alpha_eq(back.value(), t));
  }

  TEST_CASE("string escapes") {
    CHECK(alpha_eq(parse_ok(R"("a\"b\\c\n")"), str("a\"b\\c\n")));
    CHECK_FALSE(parse_term(R"("unterminated)").ok());
    CHECK_FALSE(parse_term(R"("bad \q escape")").ok());
  }

  TEST_CASE("parse errors carry useful spans") {
    auto r = parse_term("[1] ++\n  ++ [2]");
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().span.start.line == 2);
    CHECK(!r.error().message.empty());

    auto reserved = parse_term("for (table <- s) yield 1");
    REQUIRE_FALSE(reserved.ok());
    CHECK(reserved.error().message.find("reserved") != std::string::npos);

    auto dup = parse_term("{a = 1, a = 2}");
    REQUIRE_FALSE(dup.ok());
    CHECK(dup.error().message.find("duplicate") != std::string::npos);
  }

  TEST_CASE("spans stay inside the input") {
    const std::string inputs[] = {"", "(", "[1", "if x then", "case m of { none -> 1 }",
                                  "1 +", "for (x <- ) yield x"};
    for (const auto& src : inputs) {
      auto r = parse_term(src);
      REQUIRE_FALSE(r.ok());
      int lines = 1;
      for (char c : src)
        if (c == '\n') lines++;
      CHECK(r.error().span.start.line >= 1);
      CHECK(r.error().span.start.line <= lines);
      CHECK(r.error().span.start.column >= 1);
    }
  }

  TEST_CASE("pretty prints the documented forms") {
    CHECK(pretty(single(int_(1))) == "[1]");
    CHECK(pretty(where(single(var("x")), null_())) == "[x] where null");
    CHECK(pretty(comp(single(var("x")), "x", table("t"))) == "for (x <- table t) yield x");
    CHECK(pretty(record({})) == "{}");
    CHECK(pretty(prim("=", {project(var("x"), "name"), str("covid-19")})) ==
          "x.name = \"covid-19\"");
  }

  TEST_CASE("pretty parenthesizes only when needed") {
    // Comprehensions as operands get wrapped; bodies do not.
    TermPtr c = comp(single(var("x")), "x", var("s"));
    CHECK(pretty(union_(c, var("t"))) == "(for (x <- s) yield x) ++ t");
    CHECK(pretty(prim("+", {int_(1), prim("+", {int_(2), int_(3)})})) == "1 + (2 + 3)");
    CHECK(pretty(prim("+", {prim("+", {int_(1), int_(2)}), int_(3)})) == "1 + 2 + 3");
  }

  TEST_CASE("parse-pretty round trip on random terms") {
    for (Mode mode : {Mode::NRC, Mode::NRC_OPT, Mode::NRC_NULL}) {
      testgen::GenConfig cfg;
      cfg.mode = mode;
      cfg.max_depth = 6;
      testgen::TermGen gen(testgen::fixture_db().schema, 1234 + static_cast<int>(mode), cfg);
      for (int i = 0; i < 150; i++) {
        auto [t, ty] = gen.query();
        std::string text = pretty(t);
        auto back = parse_term(text);
        REQUIRE_MESSAGE(back.ok(), "failed to reparse: " << text);
        CHECK_MESSAGE(alpha_eq(back.value(), t), "round trip changed: " << text);
      }
    }
  }

  TEST_CASE("float literals round trip") {
    for (double v : {0.5, -0.25, 3.0, 1.0 / 3.0, 1e-7, 12345678.125}) {
      TermPtr t = flt(v);
      auto back = parse_term(pretty(t));
      REQUIRE(back.ok());
      CHECK(alpha_eq(back.value(), t));
    }
  }

  TEST_CASE("pretty_value renders canonical text") {
    CHECK(pretty_value(val::null_()) == "null");
    CHECK(pretty_value(val::some(val::int_(3))) == "some 3");
    CHECK(pretty_value(val::set({val::int_(2), val::int_(1)})) == "[1, 2]");
    CHECK(pretty_value(val::record({{"id", val::int_(1)}, {"type", val::null_()}})) ==
          "{id = 1, type = null}");
  }

  TEST_CASE("pretty_ty renders types") {
    CHECK(pretty_ty(ty::int_()) == "int");
    CHECK(pretty_ty(ty::set(ty::record({{"a", ty::int_()}}))) == "{{a: int}}");
    CHECK(pretty_ty(ty::option(ty::bool_())) == "bool?");
  }
}
