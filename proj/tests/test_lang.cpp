#include "doctest.h"

#include <random>

#include "tame/errors.hpp"
#include "tame/formula.hpp"
#include "tame/parse.hpp"

#include "support/gen.hpp"

using namespace tame;

TEST_CASE("rational parsing and printing") {
  CHECK(*parse_rational("3/6") == rat(1, 2));
  CHECK(*parse_rational("-4/2") == rat(-2));
  CHECK(to_string(rat(1, 2)) == "1/2");
  CHECK(to_string(rat(-7)) == "-7");
  CHECK(!parse_rational("1/0").has_value());
  CHECK(!parse_rational("x").has_value());
}

TEST_CASE("parse basic formulas") {
  auto f = parse_formula("exists x. 0 < x and x < 1");
  CHECK(f->kind() == Formula::Kind::Exists);
  CHECK(f->is_sentence());

  auto g = parse_formula("1/2*x + y <= 3");
  // Sugar expands to (t < 0) or (t = 0) with t = x/2 + y - 3.
  CHECK(g->kind() == Formula::Kind::Or);
  AffineTerm t = g->lhs()->term();
  CHECK(t.coefficient("x") == rat(1, 2));
  CHECK(t.coefficient("y") == 1);
  CHECK(t.constant_part() == -3);
}

TEST_CASE("syntax errors carry position") {
  try {
    parse_formula("x <");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.column() == 4);
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_formula("x < $"), ParseError);
  CHECK_THROWS_AS(parse_formula("exists . x < 1"), ParseError);
  CHECK_THROWS_AS(parse_formula("x * y < 1"), ParseError);
}

TEST_CASE("comments and chained comparisons") {
  auto f = parse_formula("0 < x < 1  # unit interval\n");
  CHECK(evaluate(f, {{"x", rat(1, 2)}}));
  CHECK(!evaluate(f, {{"x", rat(2)}}));
}

TEST_CASE("evaluate") {
  auto f = parse_formula("x < 1");
  CHECK(evaluate(f, {{"x", rat(1, 2)}}));
  auto g = parse_formula("x = 0 or x > 2");
  CHECK(evaluate(g, {{"x", rat(3)}}));
  auto h = parse_formula("x < y");
  CHECK_THROWS_AS(evaluate(h, {{"x", rat(1)}}), std::invalid_argument);
  auto q = parse_formula("exists x. x < y");
  CHECK_THROWS_AS(evaluate(q, {{"y", rat(1)}}), DomainError);
}

TEST_CASE("substitute") {
  auto f = parse_formula("x < 1");
  auto g = substitute(f, "x", parse_term("y + 1"));
  CHECK(format_formula(g) == "y < 0");  // y + 1 - 1

  auto h = parse_formula("exists x. x < y");
  auto h2 = substitute(h, "y", AffineTerm::constant(rat(2)));
  CHECK(h2->is_sentence());
  CHECK(format_formula(h2) == "exists x. x - 2 < 0");

  // Identity substitution.
  auto id = substitute(f, "x", AffineTerm::variable("x"));
  CHECK(structurally_equal(id, f));

  // Capture avoidance: substituting a term mentioning the bound name.
  auto cap = substitute(h, "y", parse_term("x + 1"));
  CHECK(cap->var() != "x");
  CHECK(cap->free_variables() == std::set<std::string>{"x"});
}

TEST_CASE("free variables stable under print+reparse") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = testgen::random_formula(rng, 3, 2);
    auto printed = format_formula(f);
    FormulaPtr g = parse_formula(printed);
    CAPTURE(printed);
    CHECK(structurally_equal(f, g));
    CHECK(f->free_variables() == g->free_variables());
  }
}

TEST_CASE("evaluation is a boolean homomorphism") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = testgen::random_qf_formula(rng, 3);
    FormulaPtr g = testgen::random_qf_formula(rng, 3);
    Assignment p = testgen::random_point(rng, {"x", "y", "z"});
    CHECK(evaluate(Formula::negation(f), p) == !evaluate(f, p));
    CHECK(evaluate(Formula::conjunction(f, g), p) ==
          (evaluate(f, p) && evaluate(g, p)));
    CHECK(evaluate(Formula::disjunction(f, g), p) ==
          (evaluate(f, p) || evaluate(g, p)));
  }
}

TEST_CASE("affine term group axioms on random operands") {
  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    AffineTerm a = testgen::random_term(rng, 3);
    AffineTerm b = testgen::random_term(rng, 3);
    AffineTerm c = testgen::random_term(rng, 3);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
    CHECK(a + AffineTerm{} == a);
    CHECK((a + (-a)).is_zero());
    Rational k = testgen::random_rational(rng);
    CHECK((a + b).scaled(k) == a.scaled(k) + b.scaled(k));
  }
}
