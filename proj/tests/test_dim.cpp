#include "doctest.h"

#include <random>

#include "tame/dim.hpp"
#include "tame/errors.hpp"
#include "tame/parse.hpp"
#include "tame/plf.hpp"

#include "support/gen.hpp"

using namespace tame;

namespace {

SemilinearSet setv(const std::string& src, std::vector<std::string> vars) {
  return SemilinearSet::from_formula(parse_formula(src), vars);
}

}  // namespace

TEST_CASE("dimension basics") {
  CHECK(dimension(setv("0 < x and x < 1 and 0 < y and y < x",
                       {"x", "y"})) == 2);
  CHECK(dimension(setv("y = x and 0 < x and x < 1", {"x", "y"})) == 1);
  CHECK(dimension(setv("x < x", {"x"})) == -1);
  CHECK(dimension(setv("x = 3", {"x"})) == 0);
  CHECK(dimension(SemilinearSet::whole_space(2)) == 2);
}

TEST_CASE("dimension matches interior for full dimension") {
  std::mt19937 rng(71);
  for (int i = 0; i < 60; ++i) {
    int n = testgen::pick(rng, 1, 2);
    auto s = SemilinearSet::from_formula(
        testgen::random_qf_formula(rng, n, 2), testgen::var_pool(n));
    bool full = dimension(s) == n;
    CHECK(full == !s.interior().is_empty());
  }
}

TEST_CASE("dimension is monotone and joins under union") {
  std::mt19937 rng(73);
  for (int i = 0; i < 80; ++i) {
    int n = testgen::pick(rng, 1, 2);
    auto x = SemilinearSet::from_formula(
        testgen::random_qf_formula(rng, n, 2), testgen::var_pool(n));
    auto y = SemilinearSet::from_formula(
        testgen::random_qf_formula(rng, n, 2), testgen::var_pool(n));
    auto xy = x.intersect(y);
    auto u = x.unite(y);
    // Nested pair: x cut to y sits inside x.
    CHECK(dimension(xy) <= dimension(x));
    CHECK(dimension(u) == std::max(dimension(x), dimension(y)));
  }
}

TEST_CASE("frontier drops dimension") {
  std::mt19937 rng(79);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    int n = testgen::pick(rng, 1, 2);
    auto s = SemilinearSet::from_formula(
        testgen::random_qf_formula(rng, n, 2), testgen::var_pool(n));
    if (s.is_empty()) continue;
    CHECK(dimension(s.frontier()) < dimension(s));
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("dimension survives coordinate permutation") {
  std::mt19937 rng(83);
  for (int i = 0; i < 40; ++i) {
    auto f = testgen::random_qf_formula(rng, 2, 2);
    auto s = SemilinearSet::from_formula(f, {"x", "y"});
    auto t = SemilinearSet::from_formula(f, {"y", "x"});
    CHECK(dimension(s) == dimension(t));
  }
}

TEST_CASE("local dimension points") {
  auto s = setv("(0 < x and x < 1) or x = 2", {"x"});
  Point p = local_dim_point(s);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == rat(1, 2));

  CHECK(local_dim_point(setv("x = 0", {"x"}))[0] == 0);

  Point q = local_dim_point(setv("0 < x and x < 1 and 0 < y and y < 1",
                                 {"x", "y"}));
  CHECK(q == Point{rat(1, 2), rat(1, 2)});

  CHECK_THROWS_AS(local_dim_point(setv("x < x", {"x"})), DomainError);

  // Returned point realizes the local dimension in shrinking boxes.
  std::mt19937 rng(89);
  for (int i = 0; i < 25; ++i) {
    auto t = SemilinearSet::from_formula(
        testgen::random_qf_formula(rng, 1, 2), {"x"});
    if (t.is_empty()) continue;
    Point c = local_dim_point(t);
    int d = dimension(t);
    for (int k = 1; k <= 3; ++k) {
      Rational r = Rational(1) / (1 << k);
      auto box = SemilinearSet::from_interval_union(
          IntervalUnion1D::from_intervals(
              {Interval1D::open(ExtRational::finite(c[0] - r),
                                ExtRational::finite(c[0] + r))}));
      CHECK(dimension(t.intersect(box)) == d);
    }
  }
}

TEST_CASE("projection dimension points") {
  auto C = setv("0 <= x and x <= 1", {"x"});
  auto P = setv("0 <= x and x <= 1", {"x"});
  auto X = setv("0 <= x and x <= 1 and 0 <= y and y <= 1", {"x", "y"});
  Point cp = proj_dim_point(X, C, P);
  REQUIRE(cp.size() == 2);
  CHECK(X.member(cp));

  // Shrinking boxes around the point keep the projection full.
  for (int k = 1; k <= 3; ++k) {
    Rational r = Rational(1) / (1 << (2 * k));
    AffineTerm x = AffineTerm::variable("x1"), y = AffineTerm::variable("x2");
    FormulaPtr boxf = Formula::conjoin(
        {Formula::cmp_lt(AffineTerm::constant(cp[0] - r), x),
         Formula::cmp_lt(x, AffineTerm::constant(cp[0] + r)),
         Formula::cmp_lt(AffineTerm::constant(cp[1] - r), y),
         Formula::cmp_lt(y, AffineTerm::constant(cp[1] + r))});
    SemilinearSet box(2, boxf);
    auto proj = project_last(X.intersect(box), 1);
    CHECK(dimension(proj) == dimension(P));
  }

  // Graph of the identity: any point works, the projection stays full.
  auto G = setv("y = x and 0 <= x and x <= 1", {"x", "y"});
  Point gp = proj_dim_point(G, C, P);
  CHECK(G.member(gp));

  // Degenerate projection violates the precondition.
  auto thin = setv("y = 0 and x = 0", {"x", "y"});
  CHECK_THROWS_AS(proj_dim_point(thin, C, P), DomainError);
}

TEST_CASE("discontinuity sets") {
  // Step at the origin.
  auto dom1 = SemilinearSet::whole_space(1);
  auto step = setv("(x < 0 and y = 0) or (x >= 0 and y = 1)", {"x", "y"});
  auto d1 = discontinuity_set(step, dom1);
  auto u = d1.to_interval_union();
  REQUIRE(u.components().size() == 1);
  CHECK(u.components()[0].is_point());
  CHECK(u.components()[0].lo.value == 0);

  // Continuous piecewise functions have no discontinuities.
  PiecewiseLinearFunction absval(
      {{Interval1D{ExtRational::neg_inf(), ExtRational::finite(0), false,
                   false},
        -1, 0},
       {Interval1D{ExtRational::finite(0), ExtRational::pos_inf(), true,
                   false},
        1, 0}});
  auto g2 = SemilinearSet::from_formula(absval.graph("x", "y"), {"x", "y"});
  CHECK(discontinuity_set(g2, dom1).is_empty());

  // Two-variable step: discontinuous exactly on the diagonal.
  auto dom2 = SemilinearSet::whole_space(2);
  auto f3 = setv("(x <= t and z = 0) or (x > t and z = 1)", {"x", "t", "z"});
  auto d3 = discontinuity_set(f3, dom2);
  auto diag = setv("x = t", {"x", "t"});
  CHECK(d3.difference(diag).is_empty());
  CHECK(diag.difference(d3).is_empty());

  // Partial graphs are rejected.
  auto partial = setv("y = x and x < 0", {"x", "y"});
  CHECK_THROWS_AS(discontinuity_set(partial, dom1), DomainError);
}

TEST_CASE("discontinuity sets of random functions drop dimension") {
  std::mt19937 rng(97);
  int done = 0;
  for (int i = 0; i < 200 && done < 120; ++i) {
    // Random piecewise function on the line with a few breakpoints.
    int cuts = testgen::pick(rng, 1, 3);
    std::vector<Rational> bps;
    for (int k = 0; k < cuts; ++k)
      bps.push_back(testgen::random_rational(rng, 5, 2));
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    std::vector<PlfPiece> pieces;
    ExtRational prev = ExtRational::neg_inf();
    for (size_t k = 0; k <= bps.size(); ++k) {
      ExtRational next = k < bps.size() ? ExtRational::finite(bps[k])
                                        : ExtRational::pos_inf();
      Interval1D dom{prev, next, prev.is_finite(), false};
      pieces.push_back({dom, testgen::random_rational(rng),
                        testgen::random_rational(rng)});
      prev = next;
    }
    PiecewiseLinearFunction f(pieces);
    auto g = SemilinearSet::from_formula(f.graph("x", "y"), {"x", "y"});
    auto dom = SemilinearSet::whole_space(1);
    auto d = discontinuity_set(g, dom);
    CHECK(dimension(d) < 1);
    // Cross-check each breakpoint against direct one-sided limits.
    for (size_t k = 0; k < bps.size(); ++k) {
      Rational left = pieces[k].value(bps[k]);
      Rational right = pieces[k + 1].value(bps[k]);
      CHECK(d.member({bps[k]}) == (left != right));
    }
    ++done;
  }
  CHECK(done == 120);
}
