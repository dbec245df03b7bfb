#include "tame/interval.hpp"

#include <algorithm>
#include <sstream>

#include "tame/errors.hpp"

namespace tame {

bool ExtRational::operator<(const ExtRational& o) const {
  if (kind == NegInf) return o.kind != NegInf;
  if (kind == PosInf) return false;
  if (o.kind == NegInf) return false;
  if (o.kind == PosInf) return true;
  return value < o.value;
}

std::string ExtRational::str() const {
  switch (kind) {
    case NegInf: return "-inf";
    case PosInf: return "+inf";
    case Finite: return to_string(value);
  }
  return "?";
}

bool Interval1D::empty() const {
  if (hi < lo) return true;
  if (lo == hi) return !(lo.is_finite() && lo_closed && hi_closed);
  return false;
}

bool Interval1D::contains(const Rational& q) const {
  ExtRational x = ExtRational::finite(q);
  if (x < lo || hi < x) return false;
  if (x == lo && !(lo.is_finite() && lo_closed)) return false;
  if (x == hi && !(hi.is_finite() && hi_closed)) return false;
  return true;
}

std::string Interval1D::str() const {
  if (is_point()) return "[" + lo.str() + "," + hi.str() + "]";
  std::string s = lo_closed ? "[" : "]";
  s += lo.str() + "," + hi.str();
  s += hi_closed ? "]" : "[";
  return s;
}

namespace {

// True when a and b overlap or touch so that their union is connected.
bool can_merge(const Interval1D& a, const Interval1D& b) {
  // a.lo <= b.lo assumed.
  if (b.lo < a.hi) return true;
  if (b.lo == a.hi) {
    if (!a.hi.is_finite()) return true;
    return a.hi_closed || b.lo_closed;
  }
  return false;
}

}  // namespace

IntervalUnion1D IntervalUnion1D::from_intervals(std::vector<Interval1D> parts) {
  std::erase_if(parts, [](const Interval1D& i) { return i.empty(); });
  std::sort(parts.begin(), parts.end(), [](const Interval1D& a,
                                           const Interval1D& b) {
    if (!(a.lo == b.lo)) return a.lo < b.lo;
    // Closed lower end comes first at equal position.
    if (a.lo_closed != b.lo_closed) return a.lo_closed;
    return a.hi < b.hi;
  });
  IntervalUnion1D u;
  for (auto& p : parts) {
    if (!u.comps_.empty() && can_merge(u.comps_.back(), p)) {
      Interval1D& last = u.comps_.back();
      if (last.hi < p.hi) {
        last.hi = p.hi;
        last.hi_closed = p.hi_closed;
      } else if (last.hi == p.hi) {
        last.hi_closed = last.hi_closed || p.hi_closed;
      }
    } else {
      u.comps_.push_back(std::move(p));
    }
  }
  return u;
}

bool IntervalUnion1D::contains(const Rational& q) const {
  for (const auto& c : comps_)
    if (c.contains(q)) return true;
  return false;
}

IntervalUnion1D IntervalUnion1D::unite(const IntervalUnion1D& o) const {
  std::vector<Interval1D> parts = comps_;
  parts.insert(parts.end(), o.comps_.begin(), o.comps_.end());
  return from_intervals(std::move(parts));
}

IntervalUnion1D IntervalUnion1D::intersect(const IntervalUnion1D& o) const {
  std::vector<Interval1D> parts;
  for (const auto& a : comps_) {
    for (const auto& b : o.comps_) {
      Interval1D r;
      if (a.lo < b.lo) {
        r.lo = b.lo;
        r.lo_closed = b.lo_closed;
      } else if (b.lo < a.lo) {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed;
      } else {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed && b.lo_closed;
      }
      if (a.hi < b.hi) {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed;
      } else if (b.hi < a.hi) {
        r.hi = b.hi;
        r.hi_closed = b.hi_closed;
      } else {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed && b.hi_closed;
      }
      if (!r.empty()) parts.push_back(std::move(r));
    }
  }
  return from_intervals(std::move(parts));
}

IntervalUnion1D IntervalUnion1D::complement() const {
  std::vector<Interval1D> parts;
  ExtRational cursor = ExtRational::neg_inf();
  bool cursor_closed = false;  // whether cursor itself is already excluded
  for (const auto& c : comps_) {
    Interval1D gap;
    gap.lo = cursor;
    gap.lo_closed = cursor.is_finite() && !cursor_closed;
    gap.hi = c.lo;
    gap.hi_closed = c.lo.is_finite() && !c.lo_closed;
    if (!gap.empty()) parts.push_back(gap);
    cursor = c.hi;
    cursor_closed = c.hi_closed;
  }
  Interval1D tail;
  tail.lo = cursor;
  tail.lo_closed = cursor.is_finite() && !cursor_closed;
  tail.hi = ExtRational::pos_inf();
  tail.hi_closed = false;
  if (!tail.empty()) parts.push_back(tail);
  return from_intervals(std::move(parts));
}

IntervalUnion1D IntervalUnion1D::shifted(const Rational& d) const {
  std::vector<Interval1D> parts = comps_;
  for (auto& p : parts) {
    if (p.lo.is_finite()) p.lo.value += d;
    if (p.hi.is_finite()) p.hi.value += d;
  }
  return from_intervals(std::move(parts));
}

IntervalUnion1D IntervalUnion1D::closure() const {
  std::vector<Interval1D> parts = comps_;
  for (auto& p : parts) {
    if (p.lo.is_finite()) p.lo_closed = true;
    if (p.hi.is_finite()) p.hi_closed = true;
  }
  return from_intervals(std::move(parts));
}

IntervalUnion1D IntervalUnion1D::interior() const {
  std::vector<Interval1D> parts;
  for (const auto& c : comps_) {
    Interval1D p = c;
    p.lo_closed = false;
    p.hi_closed = false;
    if (!p.empty()) parts.push_back(p);
  }
  return from_intervals(std::move(parts));
}

std::pair<ExtRational, bool> IntervalUnion1D::inf() const {
  if (comps_.empty()) throw DomainError("inf of empty set");
  const Interval1D& c = comps_.front();
  bool attained = c.lo.is_finite() && c.lo_closed;
  return {c.lo, attained};
}

std::pair<ExtRational, bool> IntervalUnion1D::sup() const {
  if (comps_.empty()) throw DomainError("sup of empty set");
  const Interval1D& c = comps_.back();
  bool attained = c.hi.is_finite() && c.hi_closed;
  return {c.hi, attained};
}

bool IntervalUnion1D::points_only() const {
  for (const auto& c : comps_)
    if (!c.is_point()) return false;
  return true;
}

bool IntervalUnion1D::operator==(const IntervalUnion1D& o) const {
  if (comps_.size() != o.comps_.size()) return false;
  for (size_t i = 0; i < comps_.size(); ++i) {
    const auto& a = comps_[i];
    const auto& b = o.comps_[i];
    if (!(a.lo == b.lo) || !(a.hi == b.hi) || a.lo_closed != b.lo_closed ||
        a.hi_closed != b.hi_closed)
      return false;
  }
  return true;
}

std::string IntervalUnion1D::str() const {
  if (comps_.empty()) return "{}";
  std::ostringstream os;
  for (size_t i = 0; i < comps_.size(); ++i) {
    if (i) os << " u ";
    os << comps_[i].str();
  }
  return os.str();
}

}  // namespace tame
