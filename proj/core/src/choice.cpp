#include "tame/choice.hpp"

#include <algorithm>
#include <map>

#include "tame/dim.hpp"
#include "tame/errors.hpp"

namespace tame {

namespace {

std::string coord(int i) { return SemilinearSet::coord(i); }

Rational pick_from_component(const Interval1D& comp, bool positive_side,
                             const Selector& sel) {
  if (comp.is_point()) return comp.lo.value;
  if (positive_side) {
    if (comp.hi.kind == ExtRational::PosInf) return comp.lo.value + sel.c;
    return (comp.lo.value + comp.hi.value) / 2;
  }
  if (comp.lo.kind == ExtRational::NegInf) return comp.hi.value - sel.c;
  return (comp.lo.value + comp.hi.value) / 2;
}

}  // namespace

Rational choose_element(const IntervalUnion1D& J, const Selector& sel) {
  if (sel.c <= 0) throw DomainError("selector offset must be positive");
  if (J.empty()) throw DomainError("cannot choose from the empty set");
  if (J.contains(0)) return 0;
  // 0 is outside J, so every component sits entirely on one side of 0.
  for (const Interval1D& comp : J.components()) {
    if (ExtRational::finite(0) <= comp.lo)
      return pick_from_component(comp, true, sel);
  }
  const auto& comps = J.components();
  return pick_from_component(comps.back(), false, sel);
}

PiecewiseAffineMap::PiecewiseAffineMap(int domain_arity, int range_arity,
                                       std::vector<AffinePiece> pieces)
    : domain_arity_(domain_arity),
      range_arity_(range_arity),
      pieces_(std::move(pieces)) {
  for (const AffinePiece& p : pieces_) {
    if (!p.region || !p.region->is_quantifier_free())
      throw DomainError("piece regions must be quantifier-free");
    if (static_cast<int>(p.out.size()) != range_arity_)
      throw DomainError("piece output arity mismatch");
  }
}

const AffinePiece* PiecewiseAffineMap::piece_at(const Point& p) const {
  if (static_cast<int>(p.size()) != domain_arity_)
    throw DomainError("point arity mismatch");
  Assignment a;
  for (int i = 0; i < domain_arity_; ++i) a[coord(i)] = p[i];
  for (const AffinePiece& piece : pieces_)
    if (evaluate(piece.region, a)) return &piece;
  return nullptr;
}

bool PiecewiseAffineMap::defined_at(const Point& p) const {
  return piece_at(p) != nullptr;
}

Point PiecewiseAffineMap::operator()(const Point& p) const {
  const AffinePiece* piece = piece_at(p);
  if (!piece) throw DomainError("point outside the map's domain");
  Assignment a;
  for (int i = 0; i < domain_arity_; ++i) a[coord(i)] = p[i];
  Point out;
  for (const AffineTerm& t : piece->out) out.push_back(t.evaluate(a));
  return out;
}

namespace {

// Simultaneous substitution of the canonical coordinates by affine terms.
AffineTerm subst_coords(const AffineTerm& t,
                        const std::vector<AffineTerm>& vals) {
  AffineTerm out = AffineTerm::constant(t.constant_part());
  for (const auto& [v, q] : t.coefficients()) {
    int idx = -1;
    for (size_t i = 0; i < vals.size(); ++i)
      if (v == coord(static_cast<int>(i))) idx = static_cast<int>(i);
    if (idx < 0) throw DomainError("non-canonical variable in affine piece");
    out = out + vals[idx].scaled(q);
  }
  return out;
}

FormulaPtr subst_coords(const FormulaPtr& f,
                        const std::vector<AffineTerm>& vals) {
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
      return Formula::atom(subst_coords(f->term(), vals), f->rel());
    case Formula::Kind::Not:
      return Formula::negation(subst_coords(f->body(), vals));
    case Formula::Kind::And:
      return Formula::conjunction(subst_coords(f->lhs(), vals),
                                  subst_coords(f->rhs(), vals));
    case Formula::Kind::Or:
      return Formula::disjunction(subst_coords(f->lhs(), vals),
                                  subst_coords(f->rhs(), vals));
    case Formula::Kind::Implies:
      return Formula::implication(subst_coords(f->lhs(), vals),
                                  subst_coords(f->rhs(), vals));
    default:
      throw DomainError("piece regions must be quantifier-free");
  }
}

}  // namespace

PiecewiseAffineMap PiecewiseAffineMap::compose(
    const PiecewiseAffineMap& inner) const {
  if (inner.range_arity_ != domain_arity_)
    throw DomainError("composition arity mismatch");
  std::vector<AffinePiece> pieces;
  for (const AffinePiece& pi : inner.pieces_) {
    for (const AffinePiece& po : pieces_) {
      AffinePiece merged;
      merged.region = Formula::conjunction(pi.region,
                                           subst_coords(po.region, pi.out));
      for (const AffineTerm& t : po.out)
        merged.out.push_back(subst_coords(t, pi.out));
      pieces.push_back(std::move(merged));
    }
  }
  return PiecewiseAffineMap(inner.domain_arity_, range_arity_,
                            std::move(pieces));
}

namespace {

// Section of the projection dropping the first coordinate of Z. Chooses
// from each parametric fiber with the four-branch recipe, made piecewise
// affine by a cylindrical decomposition that keeps the fiber coordinate
// last and sign-invariant for membership, vanishing, and positivity.
PiecewiseAffineMap drop_first_section(const SemilinearSet& Z,
                                      const Selector& sel,
                                      const QeOptions& opts) {
  int k = Z.ambient() - 1;
  std::map<std::string, std::string> ren;
  ren[coord(0)] = coord(k);
  for (int j = 1; j <= k; ++j) ren[coord(j)] = coord(j - 1);
  SemilinearSet Zr(k + 1, rename_free(Z.formula(), ren));
  AffineTerm tv = AffineTerm::variable(coord(k));
  SemilinearSet zero(k + 1, Formula::cmp_eq(tv, AffineTerm{}));
  SemilinearSet pos(k + 1, Formula::cmp_lt(AffineTerm{}, tv));
  CellDecomposition d =
      decompose(SemilinearSet::whole_space(k + 1), {Zr, zero, pos}, opts);

  // Group cells over a common base prefix, keeping fiber order.
  std::map<std::string, std::vector<const Cell*>> groups;
  std::vector<std::string> order;
  for (const Cell& c : d.cells()) {
    std::string key = c.base().str();
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&c);
  }

  std::vector<AffinePiece> pieces;
  for (const std::string& key : order) {
    std::vector<const Cell*> members;
    for (const Cell* c : groups[key])
      if (Zr.member(c->center())) members.push_back(c);
    if (members.empty()) continue;  // base outside the projection
    std::sort(members.begin(), members.end(),
              [k](const Cell* a, const Cell* b) {
                return a->center()[k] < b->center()[k];
              });

    const CellLevel* chosen = nullptr;
    bool positive = false;
    for (const Cell* c : members) {
      if (zero.member(c->center())) {
        chosen = &c->levels()[k];
        break;
      }
    }
    if (!chosen) {
      for (const Cell* c : members) {
        if (pos.member(c->center())) {
          chosen = &c->levels()[k];
          positive = true;
          break;
        }
      }
    }
    bool negative = false;
    if (!chosen) {
      chosen = &members.back()->levels()[k];
      negative = true;
    }

    AffineTerm s;
    if (!chosen->is_band) {
      s = chosen->section;
    } else if (positive) {
      if (chosen->lo.kind != CellBound::Fn)
        throw DomainError("fiber cell straddles the sign split");
      s = chosen->hi.kind == CellBound::PosInf
              ? chosen->lo.fn + AffineTerm::constant(sel.c)
              : (chosen->lo.fn + chosen->hi.fn).scaled(Rational(1, 2));
    } else if (negative) {
      if (chosen->hi.kind != CellBound::Fn)
        throw DomainError("fiber cell straddles the sign split");
      s = chosen->lo.kind == CellBound::NegInf
              ? chosen->hi.fn - AffineTerm::constant(sel.c)
              : (chosen->lo.fn + chosen->hi.fn).scaled(Rational(1, 2));
    } else {
      throw DomainError("fiber band contains 0 after the sign split");
    }

    AffinePiece piece;
    piece.region = members.front()->base().formula();
    piece.out.push_back(s);
    for (int j = 0; j < k; ++j)
      piece.out.push_back(AffineTerm::variable(coord(j)));
    pieces.push_back(std::move(piece));
  }
  return PiecewiseAffineMap(k, k + 1, std::move(pieces));
}

}  // namespace

PiecewiseAffineMap skolem_section(const SemilinearSet& X, int proj_arity,
                                  const Selector& sel, const QeOptions& opts) {
  if (sel.c <= 0) throw DomainError("selector offset must be positive");
  int m = X.ambient() - proj_arity;
  if (proj_arity < 1 || m < 1)
    throw DomainError("projection must drop at least one coordinate and "
                      "keep at least one");
  if (X.is_empty()) throw DomainError("the empty set has no section");
  PiecewiseAffineMap phi = drop_first_section(X, sel, opts);
  if (m == 1) return phi;
  SemilinearSet W = project_last(X, X.ambient() - 1, opts);
  return phi.compose(skolem_section(W, proj_arity, sel, opts));
}

Point Curve::operator()(const Rational& t) const {
  if (!(0 < t) || !(ExtRational::finite(t) < end))
    throw DomainError("parameter outside the curve's domain");
  Point p;
  for (const PiecewiseLinearFunction& f : coords) p.push_back(f(t));
  return p;
}

namespace {

// Seams of a piecewise affine function of the parameter inside ]0, hi[
// where the one-sided limits disagree.
std::vector<Rational> seam_jumps(const PiecewiseLinearFunction& f,
                                 const ExtRational& hi) {
  std::vector<Rational> jumps;
  const auto& ps = f.pieces();
  for (size_t i = 0; i + 1 < ps.size(); ++i) {
    if (!(ps[i].dom.hi == ps[i + 1].dom.lo)) continue;
    if (!ps[i].dom.hi.is_finite()) continue;
    Rational v = ps[i].dom.hi.value;
    if (!(0 < v) || !(ExtRational::finite(v) < hi)) continue;
    if (ps[i].value(v) != ps[i + 1].value(v)) jumps.push_back(v);
  }
  return jumps;
}

PiecewiseLinearFunction restrict_plf(const PiecewiseLinearFunction& f,
                                     const Rational& hi) {
  IntervalUnion1D window = IntervalUnion1D::from_intervals(
      {Interval1D::open(ExtRational::finite(0), ExtRational::finite(hi))});
  std::vector<PlfPiece> out;
  for (const PlfPiece& p : f.pieces()) {
    IntervalUnion1D cut =
        IntervalUnion1D::from_intervals({p.dom}).intersect(window);
    for (const Interval1D& c : cut.components())
      out.push_back({c, p.slope, p.intercept});
  }
  return PiecewiseLinearFunction(std::move(out));
}

}  // namespace

CurveSelection curve_selection(const SemilinearSet& X, const Point& a,
                               const Selector& sel, const QeOptions& opts) {
  int n = X.ambient();
  if (static_cast<int>(a.size()) != n)
    throw DomainError("point arity mismatch");
  if (X.member(a))
    throw DomainError("the target point must lie outside the set");
  if (!X.closure().member(a))
    throw DomainError("the target point must lie in the closure");

  // Y = {(x, t) : x in X, |a - x| = t, t > 0} with the parameter last.
  std::vector<AffineTerm> xs, as;
  for (int j = 0; j < n; ++j) {
    xs.push_back(AffineTerm::variable(coord(j)));
    as.push_back(AffineTerm::constant(a[j]));
  }
  AffineTerm tv = AffineTerm::variable(coord(n));
  FormulaPtr dist_eq = Formula::conjunction(
      max_norm_eq(xs, as, tv), Formula::negation(max_norm_lt(xs, as, tv)));
  FormulaPtr yf = Formula::conjoin(
      {X.formula(), dist_eq, Formula::cmp_lt(AffineTerm{}, tv)});
  SemilinearSet Y(n + 1, yf);

  // Radii realized by the set; a boundary point sees every small radius.
  FormulaPtr tf = yf;
  for (int j = 0; j < n; ++j) tf = Formula::exists(coord(j), tf);
  IntervalUnion1D T = to_interval_union(eliminate(tf, opts), coord(n), opts);
  if (T.empty() || !(T.components()[0].lo == ExtRational::finite(0)))
    throw DomainError("no curve reaches the target point");
  ExtRational reach = T.components()[0].hi;
  Rational eps = reach.is_finite() ? reach.value : Rational(1);

  PiecewiseAffineMap phi = skolem_section(Y, 1, sel, opts);

  // Coordinate functions of the raw section on ]0, eps[.
  std::vector<PiecewiseLinearFunction> coords_fn;
  for (int j = 0; j < n; ++j) {
    std::vector<PlfPiece> ps;
    IntervalUnion1D window = IntervalUnion1D::from_intervals(
        {Interval1D::open(ExtRational::finite(0), ExtRational::finite(eps))});
    for (const AffinePiece& piece : phi.pieces()) {
      IntervalUnion1D dom =
          interval_union_of_qf(piece.region, coord(0)).intersect(window);
      const AffineTerm& t = piece.out[j];
      for (const Interval1D& c : dom.components())
        ps.push_back({c, t.coefficient(coord(0)), t.constant_part()});
    }
    coords_fn.push_back(PiecewiseLinearFunction(std::move(ps)));
  }

  // Trim past the first discontinuity so the curve is continuous.
  for (const PiecewiseLinearFunction& f : coords_fn)
    for (const Rational& v : seam_jumps(f, ExtRational::finite(eps)))
      eps = std::min(eps, v);
  for (PiecewiseLinearFunction& f : coords_fn) f = restrict_plf(f, eps);

  Curve g{std::move(coords_fn), ExtRational::finite(eps)};
  return CurveSelection{eps, std::move(g)};
}

Point curve_limit(const Curve& g, const QeOptions& opts) {
  if (g.coords.empty()) throw DomainError("empty curve");
  // Boundedness, decided as a sentence about each coordinate's graph.
  for (const PiecewiseLinearFunction& f : g.coords) {
    AffineTerm t = AffineTerm::variable("__t");
    AffineTerm y = AffineTerm::variable("__y");
    AffineTerm b = AffineTerm::variable("__b");
    std::vector<FormulaPtr> hyp{Formula::cmp_lt(AffineTerm{}, t),
                                f.graph("__t", "__y")};
    if (g.end.is_finite())
      hyp.push_back(Formula::cmp_lt(t, AffineTerm::constant(g.end.value)));
    FormulaPtr in_band = Formula::conjunction(Formula::cmp_le(-b, y),
                                              Formula::cmp_le(y, b));
    FormulaPtr bounded = Formula::exists(
        "__b", Formula::forall(
                   "__t", Formula::forall(
                              "__y", Formula::implication(
                                         Formula::conjoin(hyp), in_band))));
    if (!decide(bounded, opts)) throw DomainError("unbounded curve");
  }
  Point out;
  for (const PiecewiseLinearFunction& f : g.coords) {
    const PlfPiece* first = nullptr;
    for (const PlfPiece& p : f.pieces())
      if (!first || p.dom.lo < first->dom.lo) first = &p;
    if (!first || !(first->dom.lo == ExtRational::finite(0)))
      throw DomainError("curve is not defined near 0");
    out.push_back(first->intercept);
  }
  return out;
}

}  // namespace tame
