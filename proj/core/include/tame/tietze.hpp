#pragma once

#include <functional>
#include <vector>

#include "tame/dim.hpp"
#include "tame/plf.hpp"
#include "tame/qe.hpp"
#include "tame/set.hpp"

namespace tame {

// Strictly monotone homeomorphism between open intervals, given by
// approximate numeric callables. The model itself has no semilinear
// homeomorphism between a bounded and an unbounded interval, so these
// witnesses come from outside the definable language; the combinators
// below operate on them numerically with explicit tolerances (1e-9 for
// forward/inverse round-trips, 1e-6 for endpoint limits). Unbounded
// endpoints are +-infinity.
struct OpaqueHomeo {
  std::function<double(double)> forward;
  std::function<double(double)> inverse;
  double dom_lo = 0, dom_hi = 0;
  double ran_lo = 0, ran_hi = 0;
  bool increasing = true;

  double operator()(double t) const { return forward(t); }
};

// From an increasing homeomorphism h : ]0,u[ -> ]0,inf[ build one from
// ]0,v[ onto ]0,inf[ for any v > 0 by case analysis on v versus u:
// v = u keeps h, v < u shifts into the tail and subtracts the offset
// (t -> h(t+u-v) - h(u-v)), and v > u glues the identity on ]0,v-u] to
// the shifted copy t -> h(t+u-v) + v-u. Throws DomainError when v <= 0
// or h is not as declared.
OpaqueHomeo interval_to_ray(const OpaqueHomeo& h, double v);

// From an increasing homeomorphism h : ]0,u[ -> ]0,inf[ build a
// homeomorphism ]0,u[ -> M: an increasing copy of ]0,u/2[ -> ]-inf,0[
// below the midpoint, 0 at u/2, and an increasing copy of
// ]u/2,u[ -> ]0,inf[ above it.
OpaqueHomeo interval_to_line(const OpaqueHomeo& h);

// For a decreasing homeomorphism phi : ]0,u[ -> ]0,inf[, the transfer
// map psi(x,y) = phi^{-1}(x + phi(y)), defined for x > 0 and 0 < y < u.
// It takes values in ]0,u[, is strictly decreasing in x, satisfies
// psi(x,y) < y, and tends to y as x -> 0+. Throws DomainError on
// arguments out of range.
std::function<double(double, double)> transfer_map(const OpaqueHomeo& phi);

// One affine piece of a two-variable function: on the region (ambient 2,
// coordinates x, y) the value is a*x + b*y + d.
struct AffinePiece2 {
  SemilinearSet region;
  Rational a, b, d;

  Rational value(const Rational& x, const Rational& y) const {
    return a * x + b * y + d;
  }
};

// Piecewise affine function of two variables. Whether the pieces cover a
// region single-valuedly is a checkable property of the graph, not an
// invariant of the container.
class PiecewiseAffine2 {
 public:
  PiecewiseAffine2() = default;
  explicit PiecewiseAffine2(std::vector<AffinePiece2> pieces);

  const std::vector<AffinePiece2>& pieces() const { return pieces_; }

  // Union of the piece regions.
  SemilinearSet domain() const;

  // {(x, y, z) : some piece has (x,y) in its region and z = a*x+b*y+d}.
  SemilinearSet graph() const;

  // Value of the first piece whose region contains (x, y); DomainError
  // outside every region.
  Rational operator()(const Rational& x, const Rational& y) const;

 private:
  std::vector<AffinePiece2> pieces_;
};

// The two boundary-value gadgets on A = {(x,y) : x <= 0 or x >= c}:
// Sec5 prescribes f(x,y) = -y on x <= 0 and f(x,y) = y on x >= c;
// Appendix prescribes f(x,y) = 0 on x <= 0 and f(x,y) = y on x >= c.
enum class GadgetVariant { Sec5, Appendix };

struct Gadget {
  SemilinearSet a = SemilinearSet::empty_set(2);  // the closed set A
  PiecewiseAffine2 f;  // the prescribed boundary function on A
};

// Builds the chosen gadget exactly. Throws DomainError when c <= 0.
Gadget build_gadget(const Rational& c, GadgetVariant variant);

// A claimed continuous extension of a gadget's boundary function to the
// strip [0,c] x M: finitely many polyhedral pieces, each carrying an
// affine value a*x + b*y + d. The pieces must partition the strip
// (checked, not assumed); continuity is a checkable property.
struct ExtensionCandidate {
  PiecewiseAffine2 f;
};

enum class ObstructionKind {
  Discontinuous,        // the candidate is not continuous on the strip
  BoundaryMismatch,     // continuous, but misses a boundary value
  UnexpectedExtension,  // all checks passed (expected never)
};

struct ObstructionVerdict {
  ObstructionKind kind = ObstructionKind::UnexpectedExtension;
  // A point of the discontinuity set (Discontinuous only).
  Point witness;
  // The probe height y* (BoundaryMismatch and UnexpectedExtension): with
  // L the largest |x-slope| over the pieces, any continuous candidate
  // satisfies |F(c,y) - F(0,y)| <= L*c, while the boundary values demand
  // 2y (Sec5) or y (Appendix); y* is chosen past that threshold and past
  // every horizontal piece boundary, so the two requirements conflict.
  Rational y_star;
};

// Refutes the candidate as an extension of the chosen gadget: either a
// continuity violation with a witness point, or the probe height where
// the boundary values cannot both be met. UnexpectedExtension is
// returned only if every check passes, which the slope bound rules out
// for genuine piecewise affine candidates. Throws DomainError when
// c <= 0 or the pieces do not partition the strip.
ObstructionVerdict extension_obstruction(const ExtensionCandidate& cand,
                                         const Rational& c,
                                         GadgetVariant variant,
                                         const QeOptions& opts = {});

// The modulus-of-continuity profile of the candidate across the strip:
// phi(y) = sup{ 0 < delta <= c : all x, x' in [0,c] with |x - x'| <
// delta have |F(x,y) - F(x',y)| < eps }, with sup of the empty set
// taken as 0. Throws DomainError when eps <= 0 or c <= 0 or the pieces
// do not partition the strip.
PiecewiseLinearFunction tietze_modulus(const ExtensionCandidate& cand,
                                       const Rational& eps, const Rational& c,
                                       const QeOptions& opts = {});

// inf{ phi(y) : y > d } for a modulus profile phi defined on the whole
// line. A true extension of either gadget would force this infimum to 0
// for every d; piecewise affine candidates keep it positive. Throws
// DomainError when phi is unbounded below on the tail or undefined
// somewhere past d.
Rational tietze_modulus_inf(const PiecewiseLinearFunction& phi,
                            const Rational& d);

}  // namespace tame
