#include "tame/periodic.hpp"

#include <algorithm>

#include "tame/errors.hpp"

namespace tame {

namespace {

// Number of integer multiples of p needed to shift q into [0,p[.
Rational fold_shift(const Rational& q, const Rational& p) {
  return Rational(floor_int(q / p)) * p;
}

bool bounded(const IntervalUnion1D& u) {
  if (u.empty()) return true;
  return u.components().front().lo.is_finite() &&
         u.components().back().hi.is_finite();
}

}  // namespace

PeriodicSet1D::PeriodicSet1D(IntervalUnion1D finite_part, IntervalUnion1D base,
                             Rational period, ExtRational threshold)
    : finite_(std::move(finite_part)),
      base_(std::move(base)),
      period_(std::move(period)),
      threshold_(std::move(threshold)) {
  if (period_ <= 0) throw DomainError("period must be positive");
  if (!bounded(finite_)) throw DomainError("finite part must be bounded");
  if (!bounded(base_)) throw DomainError("base must be bounded");
  if (threshold_.kind == ExtRational::PosInf)
    throw DomainError("threshold +inf leaves no periodic part");
  normalize();
}

PeriodicSet1D PeriodicSet1D::integers() {
  return PeriodicSet1D(IntervalUnion1D::empty_set(),
                       IntervalUnion1D::from_intervals({Interval1D::point(0)}),
                       Rational(1), ExtRational::neg_inf());
}

PeriodicSet1D PeriodicSet1D::natural_numbers() {
  return PeriodicSet1D(IntervalUnion1D::empty_set(),
                       IntervalUnion1D::from_intervals({Interval1D::point(0)}),
                       Rational(1), ExtRational::finite(0));
}

void PeriodicSet1D::normalize() {
  // Fold the base into [0,p[. A component may straddle several period
  // marks; cut it at each multiple of p and shift every slice back.
  std::vector<Interval1D> folded;
  for (const Interval1D& c : base_.components()) {
    Rational len = c.hi.value - c.lo.value;
    if (len > period_ ||
        (len == period_ && (c.lo_closed || c.hi_closed))) {
      // Covers a full period; the carrier is everything.
      folded = {Interval1D{ExtRational::finite(0),
                           ExtRational::finite(period_), true, false}};
      break;
    }
    if (c.is_point()) {
      Rational v = c.lo.value;
      folded.push_back(Interval1D::point(v - fold_shift(v, period_)));
      continue;
    }
    Rational s = c.lo.value;
    bool s_closed = c.lo_closed;
    while (s < c.hi.value) {
      Rational shift = fold_shift(s, period_);
      Rational next = shift + period_;
      Interval1D slice;
      slice.lo = ExtRational::finite(s - shift);
      slice.lo_closed = s_closed;
      if (c.hi.value < next ||
          (c.hi.value == next && !c.hi_closed)) {
        slice.hi = ExtRational::finite(c.hi.value - shift);
        slice.hi_closed = c.hi_closed;
      } else {
        // Runs to the period mark; the mark itself folds to 0.
        slice.hi = ExtRational::finite(period_);
        slice.hi_closed = false;
        if (c.hi.value == next && c.hi_closed)
          folded.push_back(Interval1D::point(0));
      }
      if (!slice.empty() && slice.hi.value <= period_) folded.push_back(slice);
      s = next;
      s_closed = true;
    }
  }
  base_ = IntervalUnion1D::from_intervals(std::move(folded));

  // Drop the finite points already produced by the carrier.
  if (!finite_.empty() && !base_.empty()) {
    Rational lo = finite_.components().front().lo.value - period_;
    Rational hi = finite_.components().back().hi.value + period_;
    finite_ = finite_.difference(carrier_window(lo, hi));
  }
}

IntervalUnion1D PeriodicSet1D::carrier_window(const Rational& a,
                                              const Rational& b) const {
  std::vector<Interval1D> parts;
  if (!base_.empty() && a < b) {
    Integer k0 = floor_int(a / period_) - 1;
    Integer k1 = floor_int(b / period_) + 1;
    for (Integer k = k0; k <= k1; ++k) {
      IntervalUnion1D moved = base_.shifted(Rational(k) * period_);
      for (const Interval1D& c : moved.components()) parts.push_back(c);
    }
  }
  IntervalUnion1D u = IntervalUnion1D::from_intervals(std::move(parts));
  if (threshold_.is_finite()) {
    Interval1D ray;
    ray.lo = threshold_;
    ray.lo_closed = true;
    u = u.intersect(IntervalUnion1D::from_intervals({ray}));
  }
  return u;
}

bool PeriodicSet1D::contains(const Rational& q) const {
  if (finite_.contains(q)) return true;
  if (threshold_.is_finite() && q < threshold_.value) return false;
  return base_.contains(q - fold_shift(q, period_));
}

IntervalUnion1D PeriodicSet1D::window(const Rational& a,
                                      const Rational& b) const {
  if (!(a < b)) throw DomainError("empty window");
  Interval1D w = Interval1D::open(ExtRational::finite(a),
                                  ExtRational::finite(b));
  IntervalUnion1D cut = IntervalUnion1D::from_intervals({w});
  return finite_.unite(carrier_window(a, b)).intersect(cut);
}

bool PeriodicSet1D::empty() const {
  return finite_.empty() && base_.empty();
}

bool PeriodicSet1D::is_discrete_closed() const {
  return finite_.points_only() && base_.points_only();
}

long PeriodicSet1D::local_complexity(const Rational& c) const {
  if (c <= 0) throw DomainError("window radius must be positive");
  if (empty()) return 0;

  // A window of radius c sees a pattern that is eventually periodic in its
  // center. Every extremal count is reached when a window endpoint touches
  // a component endpoint, so it is enough to scan a span covering the
  // finite part, the threshold transition, and one extra full period, and
  // take candidate centers from the component endpoints there.
  Rational lo(0), hi(0);
  auto widen = [&](const IntervalUnion1D& u) {
    if (u.empty()) return;
    lo = std::min(lo, u.components().front().lo.value);
    hi = std::max(hi, u.components().back().hi.value);
  };
  widen(finite_);
  if (threshold_.is_finite()) {
    lo = std::min(lo, threshold_.value);
    hi = std::max(hi, threshold_.value);
  }
  Rational pad = 2 * c + 2 * period_;
  Rational span_lo = lo - pad;
  Rational span_hi = hi + pad;
  IntervalUnion1D w = window(span_lo, span_hi);

  std::vector<Rational> centers;
  for (const Interval1D& comp : w.components()) {
    for (const Rational& e : {comp.lo.value, comp.hi.value}) {
      centers.push_back(e - c);
      centers.push_back(e);
      centers.push_back(e + c);
    }
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  std::vector<Rational> all = centers;
  for (size_t i = 0; i + 1 < centers.size(); ++i)
    all.push_back((centers[i] + centers[i + 1]) / 2);

  long best = 0;
  for (const Rational& x : all) {
    if (x - c < span_lo || x + c > span_hi) continue;
    IntervalUnion1D cut = w.intersect(IntervalUnion1D::from_intervals(
        {Interval1D::open(ExtRational::finite(x - c),
                          ExtRational::finite(x + c))}));
    best = std::max(best, static_cast<long>(cut.components().size()));
  }
  return best;
}

}  // namespace tame
