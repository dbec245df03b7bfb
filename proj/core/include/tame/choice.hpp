#pragma once

#include <vector>

#include "tame/cells.hpp"
#include "tame/interval.hpp"
#include "tame/plf.hpp"
#include "tame/set.hpp"

namespace tame {

// Offset used when a chosen fiber component is unbounded on the relevant
// side. Any positive constant works; it is configuration, not data.
struct Selector {
  Rational c = 1;
};

// Canonical element of a nonempty union of intervals: 0 when it belongs to
// the set; otherwise the midpoint of the first component on the positive
// side, or its left endpoint plus the selector offset when that component
// is unbounded above; otherwise the mirror recipe on the negative side.
// Throws DomainError on the empty set.
Rational choose_element(const IntervalUnion1D& J, const Selector& sel = {});

// One piece of a piecewise affine map: on the region (a quantifier-free
// formula over the canonical domain coordinates x1..xk) the map sends x to
// the vector of affine values.
struct AffinePiece {
  FormulaPtr region;
  std::vector<AffineTerm> out;
};

// Piecewise affine map between rational affine spaces. Regions are
// pairwise disjoint; the map is defined on their union.
class PiecewiseAffineMap {
 public:
  PiecewiseAffineMap(int domain_arity, int range_arity,
                     std::vector<AffinePiece> pieces);

  int domain_arity() const { return domain_arity_; }
  int range_arity() const { return range_arity_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  bool defined_at(const Point& p) const;
  // Throws DomainError outside every region.
  Point operator()(const Point& p) const;

  // this after inner; inner's range arity must match this map's domain.
  PiecewiseAffineMap compose(const PiecewiseAffineMap& inner) const;

 private:
  const AffinePiece* piece_at(const Point& p) const;

  int domain_arity_;
  int range_arity_;
  std::vector<AffinePiece> pieces_;
};

// Section of the projection of X onto its last proj_arity coordinates:
// a piecewise affine phi with pi(phi(p)) = p and phi(p) in X for every p
// in pi(X). Built one dropped coordinate at a time, choosing from each
// parametric fiber with choose_element's recipe. Throws DomainError when
// X is empty or the arity split is degenerate.
PiecewiseAffineMap skolem_section(const SemilinearSet& X, int proj_arity,
                                  const Selector& sel = {},
                                  const QeOptions& opts = {});

// Curve ]0, end[ -> M^n given coordinate-wise by piecewise affine
// functions of the parameter.
struct Curve {
  std::vector<PiecewiseLinearFunction> coords;
  ExtRational end = ExtRational::pos_inf();

  Point operator()(const Rational& t) const;
};

struct CurveSelection {
  Rational epsilon;
  Curve gamma;  // continuous on ]0, epsilon[, image inside X
};

// For a point a of closure(X) outside X, a positive epsilon and a
// continuous curve gamma on ]0, epsilon[ into X with |a - gamma(t)| = t
// in the max norm, so gamma tends to a. Throws DomainError unless a lies
// in closure(X) minus X.
CurveSelection curve_selection(const SemilinearSet& X, const Point& a,
                               const Selector& sel = {},
                               const QeOptions& opts = {});

// Limit of a bounded curve as the parameter decreases to 0, computed
// coordinate-wise from the germ of the first piece. Throws DomainError on
// an unbounded curve or one not defined near 0.
Point curve_limit(const Curve& g, const QeOptions& opts = {});

}  // namespace tame
