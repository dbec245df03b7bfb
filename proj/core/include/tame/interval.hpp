#pragma once

#include <string>
#include <vector>

#include "tame/rational.hpp"

namespace tame {

// Rational extended with the two infinities, for interval endpoints and
// inf/sup results.
struct ExtRational {
  enum Kind { NegInf, Finite, PosInf };
  Kind kind = Finite;
  Rational value = 0;

  static ExtRational neg_inf() { return {NegInf, 0}; }
  static ExtRational pos_inf() { return {PosInf, 0}; }
  static ExtRational finite(Rational q) { return {Finite, std::move(q)}; }

  bool is_finite() const { return kind == Finite; }
  bool operator==(const ExtRational& o) const {
    return kind == o.kind && (kind != Finite || value == o.value);
  }
  bool operator<(const ExtRational& o) const;
  bool operator<=(const ExtRational& o) const { return *this < o || *this == o; }
  std::string str() const;
};

// One connected component: a point [a,a] or an interval with open or closed
// finite endpoints (infinite ends are always open).
struct Interval1D {
  ExtRational lo = ExtRational::neg_inf();
  ExtRational hi = ExtRational::pos_inf();
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval1D point(Rational a) {
    return {ExtRational::finite(a), ExtRational::finite(std::move(a)), true,
            true};
  }
  static Interval1D open(ExtRational a, ExtRational b) {
    return {std::move(a), std::move(b), false, false};
  }
  static Interval1D closed(Rational a, Rational b) {
    return {ExtRational::finite(std::move(a)), ExtRational::finite(std::move(b)),
            true, true};
  }

  bool is_point() const { return lo == hi; }
  bool is_open_interval() const { return !lo_closed && !hi_closed; }
  bool empty() const;
  bool contains(const Rational& q) const;
  std::string str() const;
};

// Finite union of pairwise disjoint, sorted, maximally merged components.
// This is the 1-D normal form delivered by quantifier elimination.
class IntervalUnion1D {
 public:
  IntervalUnion1D() = default;
  static IntervalUnion1D empty_set() { return {}; }
  static IntervalUnion1D whole_line() {
    return from_intervals({Interval1D{}});
  }
  static IntervalUnion1D from_intervals(std::vector<Interval1D> parts);

  const std::vector<Interval1D>& components() const { return comps_; }
  bool empty() const { return comps_.empty(); }
  bool contains(const Rational& q) const;

  IntervalUnion1D unite(const IntervalUnion1D& o) const;
  IntervalUnion1D intersect(const IntervalUnion1D& o) const;
  IntervalUnion1D complement() const;
  IntervalUnion1D difference(const IntervalUnion1D& o) const {
    return intersect(o.complement());
  }
  IntervalUnion1D shifted(const Rational& d) const;

  // Closure and interior in the order topology.
  IntervalUnion1D closure() const;
  IntervalUnion1D interior() const;

  // (value, attained). Throws DomainError on the empty set.
  std::pair<ExtRational, bool> inf() const;
  std::pair<ExtRational, bool> sup() const;

  // True when every component is a single point.
  bool points_only() const;

  bool operator==(const IntervalUnion1D& o) const;
  std::string str() const;

 private:
  std::vector<Interval1D> comps_;
};

}  // namespace tame
