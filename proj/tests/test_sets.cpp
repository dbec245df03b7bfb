#include "doctest.h"

#include <random>

#include "tame/errors.hpp"
#include "tame/parse.hpp"
#include "tame/periodic.hpp"
#include "tame/plf.hpp"
#include "tame/set.hpp"

#include "support/gen.hpp"

using namespace tame;

namespace {

SemilinearSet set1d(const std::string& src) {
  return SemilinearSet::from_formula(parse_formula(src), {"x"});
}

SemilinearSet set2d(const std::string& src) {
  return SemilinearSet::from_formula(parse_formula(src), {"x", "y"});
}

}  // namespace

TEST_CASE("membership") {
  auto s = set1d("0 < x and x < 1");
  CHECK(s.member({rat(1, 2)}));
  CHECK(!s.member({rat(0)}));
  CHECK(!set1d("x < x").member({rat(3)}));
  CHECK(set2d("y = x").member({rat(1), rat(1)}));
  CHECK_THROWS_AS(s.member({rat(0), rat(0)}), DomainError);
}

TEST_CASE("boolean operations") {
  auto a = set1d("0 < x and x < 1");
  auto b = set1d("1 < x and x < 2");
  auto u = a.unite(b);
  CHECK(!u.member({rat(1)}));
  CHECK(u.member({rat(1, 2)}));
  CHECK(u.member({rat(3, 2)}));

  auto all = SemilinearSet::empty_set(1).complement();
  CHECK(all.member({rat(-100)}));

  auto c = set1d("0 < x and x < 2").difference(set1d("0 < x and x <= 1"));
  auto v = c.to_interval_union();
  REQUIRE(v.components().size() == 1);
  CHECK(v.components()[0].lo.value == 1);
  CHECK(!v.components()[0].lo_closed);
  CHECK(v.components()[0].hi.value == 2);

  CHECK_THROWS_AS(a.unite(set2d("y = x")), DomainError);
}

TEST_CASE("closure, interior, frontier") {
  auto u = set1d("0 < x and x < 1").closure().to_interval_union();
  REQUIRE(u.components().size() == 1);
  CHECK(u.components()[0].lo_closed);
  CHECK(u.components()[0].hi_closed);
  CHECK(u.components()[0].lo.value == 0);
  CHECK(u.components()[0].hi.value == 1);

  CHECK(set1d("x = 0").interior().is_empty());

  auto square = set2d("0 < x and x < 1 and 0 < y and y < 1");
  auto fr = square.frontier();
  CHECK(fr.member({rat(0), rat(1, 2)}));
  CHECK(fr.member({rat(1), rat(1)}));
  CHECK(!fr.member({rat(1, 2), rat(1, 2)}));
  CHECK(!fr.member({rat(2), rat(0)}));
}

TEST_CASE("1-D extrema") {
  auto a = set1d("2 < x and x < 3");
  CHECK(a.inf_1d() == std::pair(ExtRational::finite(2), false));

  auto b = set1d("x = 5 or (6 < x and x < 7)");
  CHECK(b.inf_1d() == std::pair(ExtRational::finite(5), true));

  auto c = set1d("x > 0");
  CHECK(c.sup_1d() == std::pair(ExtRational::pos_inf(), false));

  CHECK_THROWS_AS(set1d("x < x").inf_1d(), DomainError);
}

TEST_CASE("discrete closed detection") {
  CHECK(set1d("x = 0 or x = 1").is_discrete_closed());
  CHECK(!set1d("0 < x and x < 1").is_discrete_closed());
  CHECK(PeriodicSet1D::integers().is_discrete_closed());
}

TEST_CASE("closure properties on random 1-D sets") {
  std::mt19937 rng(41);
  for (int i = 0; i < 500; ++i) {
    auto f = testgen::random_qf_formula(rng, 1);
    SemilinearSet s = SemilinearSet::from_formula(f, {"x"});
    IntervalUnion1D u = s.to_interval_union();
    IntervalUnion1D cl = s.closure().to_interval_union();
    IntervalUnion1D in = s.interior().to_interval_union();
    IntervalUnion1D fr = s.frontier().to_interval_union();
    // Independent reference: the purely combinatorial interval operators.
    CHECK(cl == u.closure());
    CHECK(in == u.interior());
    CHECK(cl == cl.closure());
    CHECK(in == in.interior());
    CHECK(in.difference(u).empty());
    CHECK(u.difference(cl).empty());
    CHECK(fr.intersect(in).empty());
  }
}

TEST_CASE("infimum of a discrete closed set bounded below is attained") {
  std::mt19937 rng(43);
  for (int i = 0; i < 100; ++i) {
    int npts = testgen::pick(rng, 1, 6);
    std::vector<Interval1D> pts;
    for (int k = 0; k < npts; ++k)
      pts.push_back(Interval1D::point(testgen::random_rational(rng, 30, 7)));
    auto s = SemilinearSet::from_interval_union(
        IntervalUnion1D::from_intervals(pts));
    REQUIRE(s.is_discrete_closed());
    auto [value, attained] = s.inf_1d();
    CHECK(value.is_finite());
    CHECK(attained);
    CHECK(s.member({value.value}));
  }
}

TEST_CASE("periodic window") {
  auto z = PeriodicSet1D::integers();
  auto w = z.window(rat(-1, 2), rat(5, 2));
  REQUIRE(w.components().size() == 3);
  CHECK(w.contains(0));
  CHECK(w.contains(1));
  CHECK(w.contains(2));
  CHECK(!w.contains(rat(1, 2)));

  PeriodicSet1D s(IntervalUnion1D::empty_set(),
                  IntervalUnion1D::from_intervals(
                      {Interval1D::open(ExtRational::finite(0),
                                        ExtRational::finite(rat(1, 2)))}),
                  1, ExtRational::neg_inf());
  auto w2 = s.window(rat(0), rat(2));
  REQUIRE(w2.components().size() == 2);
  CHECK(w2.contains(rat(1, 4)));
  CHECK(w2.contains(rat(5, 4)));
  CHECK(!w2.contains(rat(3, 4)));

  PeriodicSet1D fin(IntervalUnion1D::from_intervals({Interval1D::point(10)}),
                    IntervalUnion1D::empty_set(), 1, ExtRational::neg_inf());
  CHECK(fin.window(rat(0), rat(1)).empty());
}

TEST_CASE("threshold cuts the carrier") {
  auto n = PeriodicSet1D::natural_numbers();
  CHECK(n.contains(0));
  CHECK(n.contains(7));
  CHECK(!n.contains(-1));
  CHECK(n.is_discrete_closed());
}

TEST_CASE("local complexity") {
  auto z = PeriodicSet1D::integers();
  CHECK(z.local_complexity(rat(1, 3)) == 1);
  CHECK(z.local_complexity(rat(1)) == 2);

  PeriodicSet1D s(IntervalUnion1D::empty_set(),
                  IntervalUnion1D::from_intervals(
                      {Interval1D::open(ExtRational::finite(0),
                                        ExtRational::finite(rat(1, 4))),
                       Interval1D::open(ExtRational::finite(rat(1, 2)),
                                        ExtRational::finite(rat(3, 4)))}),
                  1, ExtRational::neg_inf());
  // A window of width 1 centered just right of 0 catches the tail of the
  // previous period as a third component.
  CHECK(s.local_complexity(rat(1, 2)) == 3);
  auto probe = s.window(rat(-3, 10), rat(7, 10));
  CHECK(probe.components().size() == 3);
  CHECK(s.local_complexity(rat(1, 4)) == 2);
}

TEST_CASE("periodic normalization folds the base") {
  // Base handed in far outside [0,1[.
  PeriodicSet1D s(IntervalUnion1D::empty_set(),
                  IntervalUnion1D::from_intervals(
                      {Interval1D::point(rat(7, 2))}),
                  1, ExtRational::neg_inf());
  CHECK(s.base().contains(rat(1, 2)));
  CHECK(s.contains(rat(1, 2)));
  CHECK(s.contains(rat(-5, 2)));
  CHECK(!s.contains(0));

  // Re-normalizing a canonical value changes nothing.
  PeriodicSet1D t(s.finite_part(), s.base(), s.period(), s.threshold());
  CHECK(t.base() == s.base());
  for (int k = -5; k <= 5; ++k) {
    Rational q = Rational(k) / 2;
    CHECK(t.contains(q) == s.contains(q));
  }
}

TEST_CASE("periodic membership against direct fiber checks") {
  std::mt19937 rng(47);
  for (int i = 0; i < 100; ++i) {
    Rational p = testgen::random_rational(rng, 5, 2);
    if (p <= 0) p = 1 - p;
    std::vector<Interval1D> base;
    int nb = testgen::pick(rng, 1, 3);
    for (int k = 0; k < nb; ++k) {
      Rational a = testgen::random_rational(rng, 8, 3);
      Rational b = a + tame::abs(testgen::random_rational(rng, 3, 3));
      base.push_back(a == b ? Interval1D::point(a)
                            : Interval1D::open(ExtRational::finite(a),
                                               ExtRational::finite(b)));
    }
    PeriodicSet1D s(IntervalUnion1D::empty_set(),
                    IntervalUnion1D::from_intervals(base), p,
                    ExtRational::neg_inf());
    for (int k = 0; k < 20; ++k) {
      Rational q = testgen::random_rational(rng, 20, 4);
      // Reference: fold q against every original component directly.
      bool expect = false;
      for (const Interval1D& c : base) {
        Rational shift = Rational(floor_int((q - c.lo.value) / p)) * p;
        for (int d = -1; d <= 1 && !expect; ++d)
          expect = c.contains(q - shift - Rational(d) * p);
      }
      CAPTURE(to_string(q));
      CHECK(s.contains(q) == expect);
    }
  }
}

TEST_CASE("plf evaluation") {
  auto saw = PiecewiseLinearFunction::fractional_part();
  CHECK(saw(rat(7, 3)) == rat(1, 3));
  CHECK(saw(rat(-1, 4)) == rat(3, 4));
  CHECK(saw(rat(5)) == 0);

  PiecewiseLinearFunction id(
      {{Interval1D::open(ExtRational::finite(0), ExtRational::finite(1)), 1,
        0}});
  CHECK(id(rat(1, 2)) == rat(1, 2));
  CHECK_THROWS_AS(id(rat(2)), DomainError);
}

TEST_CASE("plf graph") {
  PiecewiseLinearFunction id(
      {{Interval1D::open(ExtRational::finite(0), ExtRational::finite(1)), 1,
        0}});
  auto g = id.graph("x", "y");
  CHECK(evaluate(g, {{"x", rat(1, 2)}, {"y", rat(1, 2)}}));
  CHECK(!evaluate(g, {{"x", rat(1, 2)}, {"y", rat(1, 3)}}));
  CHECK(!evaluate(g, {{"x", rat(2)}, {"y", rat(2)}}));

  auto zero = PiecewiseLinearFunction::affine(0, 0);
  CHECK(evaluate(zero.graph("x", "y"), {{"x", rat(9)}, {"y", rat(0)}}));

  PiecewiseLinearFunction absval(
      {{Interval1D{ExtRational::neg_inf(), ExtRational::finite(0), false,
                   false},
        -1, 0},
       {Interval1D{ExtRational::finite(0), ExtRational::pos_inf(), true,
                   false},
        1, 0}});
  CHECK(evaluate(absval.graph("x", "y"), {{"x", rat(-2)}, {"y", rat(2)}}));
  CHECK(absval.is_continuous());
  CHECK_THROWS_AS(PiecewiseLinearFunction::fractional_part().graph("x", "y"),
                  DomainError);
}

TEST_CASE("plf validation and continuity") {
  CHECK_THROWS_AS(
      PiecewiseLinearFunction(
          {{Interval1D::closed(0, 2), 1, 0}, {Interval1D::closed(1, 3), 1, 0}}),
      DomainError);
  CHECK(!PiecewiseLinearFunction::fractional_part().is_continuous());
  PiecewiseLinearFunction jump(
      {{Interval1D::closed(0, 1), 0, 0},
       {Interval1D{ExtRational::finite(1), ExtRational::finite(2), false,
                   true},
        0, 5}});
  CHECK(!jump.is_continuous());
}
