#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "tame/analysis.hpp"
#include "tame/dim.hpp"
#include "tame/errors.hpp"
#include "tame/parse.hpp"

#include "support/gen.hpp"

using namespace tame;

namespace {

SemilinearSet setv(const std::string& src, std::vector<std::string> vars) {
  return SemilinearSet::from_formula(parse_formula(src), vars);
}

SemilinearSet unit_c() { return setv("0 <= x and x <= 1", {"x"}); }

// Family graph over C x ]0,s[ from a formula in (x, t, y).
DefinableFamily fam1(const std::string& src, const SemilinearSet& c,
                     const Rational& s = 1) {
  return DefinableFamily::over_interval(setv(src, {"x", "t", "y"}), c, s);
}

ExtRational fin(Rational q) { return ExtRational::finite(std::move(q)); }

// Random piecewise function on the open interval ]lo, hi[.
PiecewiseLinearFunction random_plf(std::mt19937& rng, const Rational& lo,
                                   const Rational& hi, bool continuous) {
  int cuts = testgen::pick(rng, 0, 3);
  std::vector<Rational> bps;
  for (int k = 0; k < cuts; ++k) {
    Rational b = lo + (hi - lo) * Rational(testgen::pick(rng, 1, 7), 8);
    bps.push_back(b);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  std::vector<PlfPiece> pieces;
  ExtRational prev = fin(lo);
  Rational level = testgen::random_rational(rng);
  Rational at = lo;
  for (size_t k = 0; k <= bps.size(); ++k) {
    ExtRational next = k < bps.size() ? fin(bps[k]) : fin(hi);
    Rational slope = Rational(testgen::pick(rng, -2, 2));
    Rational intercept;
    if (continuous) {
      // Anchor the piece so the one-sided limits agree at the breakpoint.
      intercept = level - slope * at;
    } else {
      intercept = testgen::random_rational(rng);
    }
    Interval1D dom{prev, next, k > 0, false};
    pieces.push_back({dom, slope, intercept});
    if (next.is_finite()) {
      at = next.value;
      level = slope * at + intercept;
    }
    prev = next;
  }
  return PiecewiseLinearFunction(std::move(pieces));
}

bool part_contains(const MonotonicityPartition& mp, const Rational& q,
                   int which) {
  switch (which) {
    case 0: return mp.x_d.contains(q);
    case 1: return mp.x_c.contains(q);
    case 2: return mp.x_plus.contains(q);
    default: return mp.x_minus.contains(q);
  }
}

}  // namespace

TEST_CASE("mono_partition on the basic shapes") {
  // Identity on ]0,1[: strictly increasing everywhere.
  PiecewiseLinearFunction id(
      {{Interval1D::open(fin(0), fin(1)), 1, 0}});
  auto mp = mono_partition(id);
  CHECK(mp.x_plus.window(-1, 2) ==
        IntervalUnion1D::from_intervals({Interval1D::open(fin(0), fin(1))}));
  CHECK(mp.x_d.empty());
  CHECK(mp.x_c.empty());
  CHECK(mp.x_minus.empty());

  // A constant function is locally constant everywhere.
  PiecewiseLinearFunction cst(
      {{Interval1D::open(fin(0), fin(1)), 0, 3}});
  auto mc = mono_partition(cst);
  CHECK(mc.x_c.window(-1, 2) ==
        IntervalUnion1D::from_intervals({Interval1D::open(fin(0), fin(1))}));
  CHECK(mc.x_d.empty());
  CHECK(mc.x_plus.empty());
  CHECK(mc.x_minus.empty());

  // Endpoints of a closed domain land in the discrete part.
  PiecewiseLinearFunction idc({{Interval1D::closed(0, 1), 1, 0}});
  auto mi = mono_partition(idc);
  CHECK(mi.x_d.contains(0));
  CHECK(mi.x_d.contains(1));
  CHECK(mi.x_plus.contains(Rational(1, 2)));
  CHECK(mi.x_d.is_discrete_closed());

  // Tent map: increase, peak, decrease.
  PiecewiseLinearFunction tent(
      {{Interval1D{fin(-1), fin(0), false, true}, 1, 0},
       {Interval1D::open(fin(0), fin(1)), -1, 0}});
  auto mt = mono_partition(tent);
  CHECK(mt.x_plus.contains(Rational(-1, 2)));
  CHECK(mt.x_minus.contains(Rational(1, 2)));
  CHECK(mt.x_d.contains(0));
}

TEST_CASE("mono_partition of the sawtooth") {
  auto f = PiecewiseLinearFunction::fractional_part();
  auto mp = mono_partition(f);
  // Discrete part is exactly the integers, increase everywhere else.
  for (int k = -3; k <= 3; ++k) {
    CHECK(mp.x_d.contains(k));
    CHECK(!mp.x_plus.contains(k));
  }
  CHECK(mp.x_d.is_discrete_closed());
  CHECK(mp.x_c.empty());
  CHECK(mp.x_minus.empty());
  // Dense sampling cross-check of the classification.
  for (int i = -40; i <= 40; ++i) {
    Rational q(i, 8);
    bool integer = denominator(Rational(q)) == 1;
    CHECK(mp.x_d.contains(q) == integer);
    CHECK(mp.x_plus.contains(q) == !integer);
  }
}

TEST_CASE("mono_partition properties on random functions") {
  std::mt19937 rng(4201);
  for (int i = 0; i < 200; ++i) {
    bool continuous = testgen::pick(rng, 0, 1) == 0;
    auto f = random_plf(rng, -2, 2, continuous);
    auto mp = mono_partition(f);
    CHECK(mp.x_d.is_discrete_closed());

    // The four parts partition the domain.
    for (int j = 0; j <= 64; ++j) {
      Rational q = Rational(-2) + Rational(4 * j, 64);
      int hits = 0;
      for (int w = 0; w < 4; ++w) hits += part_contains(mp, q, w) ? 1 : 0;
      CHECK(hits == (f.defined_at(q) ? 1 : 0));
    }

    // The non-discrete parts are open.
    for (const auto* part : {&mp.x_c, &mp.x_plus, &mp.x_minus}) {
      for (const Interval1D& comp : part->window(-3, 3).components()) {
        CHECK(!comp.lo_closed);
        CHECK(!comp.hi_closed);
      }
    }

    // Strict increase on each maximal piece of the increase locus.
    for (const Interval1D& comp : mp.x_plus.window(-3, 3).components()) {
      Rational a = comp.lo.value, b = comp.hi.value;
      for (int j = 0; j < 50; ++j) {
        Rational u = a + (b - a) * Rational(2 * j + 1, 104);
        Rational v = a + (b - a) * Rational(2 * j + 2, 104);
        CHECK(f(u) < f(v));
      }
    }
    for (const Interval1D& comp : mp.x_minus.window(-3, 3).components()) {
      Rational a = comp.lo.value, b = comp.hi.value;
      for (int j = 0; j < 50; ++j) {
        Rational u = a + (b - a) * Rational(2 * j + 1, 104);
        Rational v = a + (b - a) * Rational(2 * j + 2, 104);
        CHECK(f(u) > f(v));
      }
    }

    // A function that is everywhere locally strictly increasing is
    // globally strictly increasing.
    if (mp.x_d.empty() && mp.x_c.empty() && mp.x_minus.empty() &&
        !mp.x_plus.empty()) {
      for (int j = 0; j < 63; ++j) {
        Rational u = Rational(-2) + Rational(4 * j + 1, 64);
        Rational v = Rational(-2) + Rational(4 * j + 3, 64);
        if (f.defined_at(u) && f.defined_at(v)) CHECK(f(u) < f(v));
      }
    }
  }
}

TEST_CASE("family construction checks totality") {
  auto c = unit_c();
  CHECK_THROWS_AS(fam1("y = x and x < 1/2", c), DomainError);   // partial
  CHECK_THROWS_AS(fam1("y < x", c), DomainError);               // multivalued
  CHECK_THROWS_AS(
      DefinableFamily::over_interval(setv("y = x", {"x", "t", "y"}), c, 0),
      DomainError);
  auto fam = fam1("y = x", c);
  CHECK(fam.c_arity() == 1);
  CHECK(fam.p_arity() == 1);
  CHECK(fam.has_interval_param());
  CHECK(fam.s() == 1);

  DefinableFamily gen(setv("y = x + p", {"x", "p", "y"}), c,
                      setv("0 < p and p < 1", {"p"}));
  CHECK(!gen.has_interval_param());
  CHECK_THROWS_AS(gen.s(), DomainError);
}

TEST_CASE("continuity and convergence deciders on the standard families") {
  auto c = unit_c();

  // F(x,t) = x: continuous, independent of the parameter.
  auto id = fam1("y = x", c);
  CHECK(equi_continuous(id));
  CHECK(uniformly_equi_continuous(id));
  CHECK(pointwise_bounded(id));
  CHECK(pointwise_convergent(id));
  CHECK(uniformly_convergent(id));

  // Moving step: f_t jumps at t, and the jump survives every delta.
  auto step = fam1("(x <= t and y = 0) or (x > t and y = 1)", c);
  CHECK(!equi_continuous(step));
  CHECK(!uniformly_equi_continuous(step));
  CHECK(pointwise_bounded(step));
  CHECK(pointwise_convergent(step));
  CHECK(!uniformly_convergent(step));

  // f_t(x) = max(0, x - t): slopes bounded by 1, limit x.
  auto ramp = fam1("(x <= t and y = 0) or (x > t and y = x - t)", c);
  CHECK(equi_continuous(ramp));
  CHECK(uniformly_equi_continuous(ramp));
  CHECK(pointwise_bounded(ramp));
  CHECK(pointwise_convergent(ramp));
  CHECK(uniformly_convergent(ramp));
}

TEST_CASE("limit functions of convergent families") {
  auto c = unit_c();

  auto ramp = fam1("(x <= t and y = 0) or (x > t and y = x - t)", c);
  auto g = limit_function(ramp);
  CHECK(g.is_continuous());
  for (int j = 0; j <= 4; ++j) {
    Rational q(j, 4);
    CHECK(g(q) == q);
  }

  auto shift = fam1("y = x + t", c);
  auto gs = limit_function(shift);
  CHECK(gs(Rational(1, 2)) == Rational(1, 2));
  CHECK(gs(1) == 1);

  auto cst = fam1("y = 2", c);
  auto gc = limit_function(cst);
  CHECK(gc(0) == 2);
  CHECK(gc(1) == 2);

  // The moving step converges pointwise to the constant 1 away from 0.
  auto step = fam1("(x <= t and y = 0) or (x > t and y = 1)", c);
  auto gstep = limit_function(step);
  CHECK(gstep(0) == 0);
  CHECK(gstep(Rational(1, 2)) == 1);
  CHECK(!gstep.is_continuous());

  // Convergence as the parameter tends to 0 needs an interval parameter.
  DefinableFamily gen(setv("y = x + p", {"x", "p", "y"}), c,
                      setv("0 < p and p < 1", {"p"}));
  CHECK_THROWS_AS(limit_function(gen), DomainError);
}

TEST_CASE("modulus of continuity extraction") {
  auto c = unit_c();

  // Identity: any delta up to 1/2 works, nothing larger.
  auto id = fam1("y = x", c);
  auto phi = modulus(id, Rational(1, 2));
  for (int j = 0; j <= 4; ++j) CHECK(phi(Rational(j, 4)) == Rational(1, 2));
  auto [v, att] = inf_modulus(id, Rational(1, 2));
  CHECK(v == Rational(1, 2));

  // Constant: the condition is vacuous, the cap is the supremum.
  auto cst = fam1("y = 3", c);
  auto phic = modulus(cst, Rational(1, 2));
  CHECK(phic(0) == 1);
  CHECK(phic(Rational(1, 2)) == 1);
  auto [vc, attc] = inf_modulus(cst, Rational(1, 2), 2);
  CHECK(vc == 2);

  // Moving step: no delta ever works, the supremum of nothing is 0.
  auto step = fam1("(x <= t and y = 0) or (x > t and y = 1)", c);
  auto [vs, atts] = inf_modulus(step, Rational(1, 2));
  CHECK(vs == 0);

  CHECK_THROWS_AS(modulus(id, 0), DomainError);
}

TEST_CASE("positive infimum of the modulus for continuous functions") {
  std::mt19937 rng(777);
  int done = 0;
  while (done < 12) {
    auto h = random_plf(rng, 0, 1, true);
    // Close the domain so C is closed and bounded.
    auto pieces = h.pieces();
    pieces.front().dom.lo_closed = true;
    pieces.back().dom.hi_closed = true;
    PiecewiseLinearFunction hc(pieces);
    DefinableFamily f(
        SemilinearSet::from_formula(hc.graph("x", "y"), {"x", "t", "y"}),
        unit_c(), setv("0 < p and p < 1", {"p"}));
    for (Rational eps : {Rational(1), Rational(1, 2), Rational(1, 10)}) {
      auto [v, att] = inf_modulus(f, eps);
      CHECK(v > 0);
    }
    ++done;
  }
}

TEST_CASE("ascoli reports") {
  auto c = unit_c();

  auto ramp = fam1("(x <= t and y = 0) or (x > t and y = x - t)", c);
  auto r = ascoli_check(ramp);
  CHECK(r.c_closed);
  CHECK(r.c_bounded);
  CHECK(r.equi);
  CHECK(r.pointwise);
  CHECK(r.uniform);
  CHECK(r.hypotheses_met());
  CHECK(r.conclusion_holds());

  auto step = fam1("(x <= t and y = 0) or (x > t and y = 1)", c);
  auto rs = ascoli_check(step);
  CHECK(!rs.equi);
  CHECK(rs.pointwise);
  CHECK(!rs.uniform);
  CHECK(!rs.hypotheses_met());

  auto cst = fam1("y = 2", c);
  auto rc = ascoli_check(cst);
  CHECK(rc.hypotheses_met());
  CHECK(rc.conclusion_holds());

  // An open C breaks the hypotheses without being an error.
  auto open_c = setv("0 < x and x < 1", {"x"});
  auto ro = ascoli_check(fam1("y = x", open_c));
  CHECK(!ro.c_closed);
  CHECK(ro.c_bounded);
}

TEST_CASE("curve families") {
  auto c = unit_c();
  DefinableFamily add(setv("y = x + p", {"x", "p", "y"}), c,
                      setv("0 < p and p < 1", {"p"}));

  // Approach 0 from inside the parameter set.
  auto along = curve_family(add, {0});
  CHECK(along.has_interval_param());
  CHECK(uniformly_convergent(along));
  auto g = limit_function(along);
  CHECK(g(0) == 0);
  CHECK(g(Rational(1, 2)) == Rational(1, 2));
  CHECK(g(1) == 1);

  // A point of P itself yields the constant curve.
  auto at_half = curve_family(add, {Rational(1, 2)});
  CHECK(uniformly_convergent(at_half));
  auto gh = limit_function(at_half);
  CHECK(gh(0) == Rational(1, 2));
  CHECK(gh(1) == Rational(3, 2));

  // Constant in the parameter: the curve family is constant too.
  DefinableFamily flat(setv("y = x", {"x", "p", "y"}), c,
                       setv("0 < p and p < 1", {"p"}));
  auto gf = limit_function(curve_family(flat, {0}));
  CHECK(gf(Rational(1, 3)) == Rational(1, 3));

  // Outside the closure of P there is nothing to approach.
  CHECK_THROWS_AS(curve_family(add, {2}), DomainError);
  // A non-equi-continuous family is rejected.
  DefinableFamily bad(
      setv("(x <= p and y = 0) or (x > p and y = 1)", {"x", "p", "y"}), c,
      setv("0 < p and p < 1", {"p"}));
  CHECK_THROWS_AS(curve_family(bad, {0}), DomainError);
}

TEST_CASE("discontinuity projections drop dimension") {
  auto c = unit_c();

  // Jump in the parameter only: D = C x {1/2}.
  auto tstep = fam1("(t <= 1/2 and y = 0) or (t > 1/2 and y = 1)", c);
  auto r = discontinuity_projection_check(tstep);
  CHECK(r.pass);
  CHECK(r.dim_projection == 0);
  CHECK(r.dim_p == 1);
  CHECK(r.d.member({Rational(1, 2), Rational(1, 2)}));
  CHECK(!r.d.member({Rational(1, 2), Rational(1, 4)}));

  // Continuous family: no discontinuity at all.
  auto shift = fam1("y = x + t", c);
  auto rc = discontinuity_projection_check(shift);
  CHECK(rc.pass);
  CHECK(rc.d.is_empty());
  CHECK(rc.dim_projection == -1);

  // The moving step is not equi-continuous: precondition error.
  auto step = fam1("(x <= t and y = 0) or (x > t and y = 1)", c);
  CHECK_THROWS_AS(discontinuity_projection_check(step), DomainError);
}

namespace {

// F(x,t) = h(x) + q*t over C x ]0,1[, built by shearing the graph of h.
DefinableFamily sheared(const PiecewiseLinearFunction& h, const Rational& q,
                        const SemilinearSet& c) {
  AffineTerm rhs = AffineTerm::variable("y") -
                   AffineTerm::variable("t").scaled(q);
  FormulaPtr g = substitute(h.graph("x", "y"), "y", rhs);
  return DefinableFamily::over_interval(
      SemilinearSet::from_formula(g, {"x", "t", "y"}), c, 1);
}

}  // namespace

TEST_CASE("decider properties on a random family corpus") {
  std::mt19937 rng(3571);
  auto c = unit_c();
  for (int i = 0; i < 20; ++i) {
    bool continuous = testgen::pick(rng, 0, 1) == 0;
    auto h = random_plf(rng, 0, 1, continuous);
    auto pieces = h.pieces();
    pieces.front().dom.lo_closed = true;
    pieces.back().dom.hi_closed = true;
    PiecewiseLinearFunction hc(pieces);
    Rational q = testgen::random_rational(rng, 3, 2);
    auto fam = sheared(hc, q, c);

    // Equi-continuity and its uniform variant agree on closed bounded C.
    bool equi = equi_continuous(fam);
    CHECK(equi == uniformly_equi_continuous(fam));
    CHECK(equi == hc.is_continuous());

    // Bounded trajectories converge, and convergent families have bounded
    // trajectories near 0.
    bool pb = pointwise_bounded(fam);
    bool pc = pointwise_convergent(fam);
    CHECK(pb);
    CHECK(pc);

    // A family of continuous functions that converges uniformly has a
    // continuous limit.
    if (equi && uniformly_convergent(fam)) {
      CHECK(limit_function(fam).is_continuous());
    }

    // Hypotheses of the compactness argument imply uniform convergence.
    auto report = ascoli_check(fam);
    if (report.hypotheses_met()) CHECK(report.conclusion_holds());

    // Equi-continuous families project their discontinuities into a
    // lower-dimensional parameter region.
    if (equi) CHECK(discontinuity_projection_check(fam).pass);
  }
}
