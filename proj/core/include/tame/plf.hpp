#pragma once

#include <optional>
#include <vector>

#include "tame/formula.hpp"
#include "tame/interval.hpp"

namespace tame {

// One affine piece: x in dom maps to slope*x + intercept.
struct PlfPiece {
  Interval1D dom;
  Rational slope;
  Rational intercept;

  Rational value(const Rational& x) const { return slope * x + intercept; }
};

// Single-valued piecewise affine function of one variable. Pieces are kept
// sorted with pairwise disjoint domains. With a period p the pieces must
// live inside [0,p[ and the function extends by f(x+p) = f(x) to all of M.
class PiecewiseLinearFunction {
 public:
  PiecewiseLinearFunction() = default;
  explicit PiecewiseLinearFunction(std::vector<PlfPiece> pieces,
                                   std::optional<Rational> period = {});

  static PiecewiseLinearFunction affine(Rational slope, Rational intercept);
  // The sawtooth x - floor(x).
  static PiecewiseLinearFunction fractional_part();

  const std::vector<PlfPiece>& pieces() const { return pieces_; }
  bool is_periodic() const { return period_.has_value(); }
  const Rational& period() const;

  // Domain of definition; the whole line for periodic functions.
  IntervalUnion1D domain() const;
  bool defined_at(const Rational& x) const;

  // Throws DomainError outside the domain.
  Rational operator()(const Rational& x) const;

  // {(x,y) : y = f(x)} over coordinates (xvar, yvar). Periodic functions
  // have no finite affine graph; DomainError.
  FormulaPtr graph(const std::string& xvar, const std::string& yvar) const;

  // True when the restriction to each connected component of the domain is
  // continuous (piece values agree at shared endpoints, one-sided limits
  // match at half-open junctions).
  bool is_continuous() const;

 private:
  const PlfPiece* piece_at(const Rational& x) const;

  std::vector<PlfPiece> pieces_;
  std::optional<Rational> period_;
};

}  // namespace tame
