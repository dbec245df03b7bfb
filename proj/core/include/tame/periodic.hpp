#pragma once

#include <string>

#include "tame/interval.hpp"

namespace tame {

// Subset of M^1 of the form  F  union  ((B + pZ) intersect [m, +inf[),
// with F bounded and B inside [0,p[. This represents the eventually
// periodic sets (Z, Z>=0, unions of translated windows, ...) that the
// plain semilinear language cannot express.
class PeriodicSet1D {
 public:
  // threshold: the periodic carrier is cut to [m, +inf[; pass
  // ExtRational::neg_inf() for the two-sided carrier.
  PeriodicSet1D(IntervalUnion1D finite_part, IntervalUnion1D base,
                Rational period, ExtRational threshold);

  static PeriodicSet1D integers();
  static PeriodicSet1D natural_numbers();

  const IntervalUnion1D& finite_part() const { return finite_; }
  const IntervalUnion1D& base() const { return base_; }
  const Rational& period() const { return period_; }
  const ExtRational& threshold() const { return threshold_; }

  bool contains(const Rational& q) const;

  // S intersected with the open window ]a,b[.
  IntervalUnion1D window(const Rational& a, const Rational& b) const;

  bool is_discrete_closed() const;

  // Maximum number of connected components of S cut to any open window of
  // radius c, over all window centers.
  long local_complexity(const Rational& c) const;

  bool empty() const;

 private:
  // Canonical form: base folded into [0,p[, finite part disjoint from the
  // periodic carrier.
  void normalize();

  IntervalUnion1D carrier_window(const Rational& a, const Rational& b) const;

  IntervalUnion1D finite_;
  IntervalUnion1D base_;
  Rational period_;
  ExtRational threshold_;
};

}  // namespace tame
