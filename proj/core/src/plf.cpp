#include "tame/plf.hpp"

#include <algorithm>

#include "tame/errors.hpp"

namespace tame {

PiecewiseLinearFunction::PiecewiseLinearFunction(std::vector<PlfPiece> pieces,
                                                std::optional<Rational> period)
    : pieces_(std::move(pieces)), period_(std::move(period)) {
  std::sort(pieces_.begin(), pieces_.end(),
            [](const PlfPiece& a, const PlfPiece& b) {
              if (a.dom.lo == b.dom.lo) return b.dom.lo_closed < a.dom.lo_closed;
              return a.dom.lo < b.dom.lo;
            });
  for (const PlfPiece& p : pieces_)
    if (p.dom.empty()) throw DomainError("empty piece domain");
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const Interval1D& a = pieces_[i].dom;
    const Interval1D& b = pieces_[i + 1].dom;
    bool disjoint =
        a.hi < b.lo || (a.hi == b.lo && !(a.hi_closed && b.lo_closed));
    if (!disjoint) throw DomainError("piece domains overlap");
  }
  if (period_) {
    if (*period_ <= 0) throw DomainError("period must be positive");
    for (const PlfPiece& p : pieces_) {
      if (!p.dom.lo.is_finite() || !p.dom.hi.is_finite() ||
          p.dom.lo.value < 0 || p.dom.hi.value > *period_ ||
          (p.dom.hi.value == *period_ && p.dom.hi_closed))
        throw DomainError("periodic pieces must live inside [0,period[");
    }
  }
}

PiecewiseLinearFunction PiecewiseLinearFunction::affine(Rational slope,
                                                        Rational intercept) {
  return PiecewiseLinearFunction(
      {{Interval1D{}, std::move(slope), std::move(intercept)}});
}

PiecewiseLinearFunction PiecewiseLinearFunction::fractional_part() {
  Interval1D base{ExtRational::finite(0), ExtRational::finite(1), true, false};
  return PiecewiseLinearFunction({{base, 1, 0}}, Rational(1));
}

const Rational& PiecewiseLinearFunction::period() const {
  if (!period_) throw DomainError("function is not periodic");
  return *period_;
}

IntervalUnion1D PiecewiseLinearFunction::domain() const {
  if (period_) return IntervalUnion1D::whole_line();
  std::vector<Interval1D> parts;
  for (const PlfPiece& p : pieces_) parts.push_back(p.dom);
  return IntervalUnion1D::from_intervals(std::move(parts));
}

const PlfPiece* PiecewiseLinearFunction::piece_at(const Rational& x) const {
  for (const PlfPiece& p : pieces_)
    if (p.dom.contains(x)) return &p;
  return nullptr;
}

bool PiecewiseLinearFunction::defined_at(const Rational& x) const {
  if (!period_) return piece_at(x) != nullptr;
  Rational r = x - Rational(floor_int(x / *period_)) * *period_;
  return piece_at(r) != nullptr;
}

Rational PiecewiseLinearFunction::operator()(const Rational& x) const {
  Rational arg = x;
  if (period_)
    arg = x - Rational(floor_int(x / *period_)) * *period_;
  const PlfPiece* p = piece_at(arg);
  if (!p) throw DomainError("argument outside the domain");
  return p->value(arg);
}

FormulaPtr PiecewiseLinearFunction::graph(const std::string& xvar,
                                          const std::string& yvar) const {
  if (period_)
    throw DomainError("periodic function has no finite affine graph");
  AffineTerm x = AffineTerm::variable(xvar);
  AffineTerm y = AffineTerm::variable(yvar);
  std::vector<FormulaPtr> parts;
  for (const PlfPiece& p : pieces_) {
    std::vector<FormulaPtr> conj;
    if (p.dom.lo.is_finite()) {
      AffineTerm lo = AffineTerm::constant(p.dom.lo.value);
      conj.push_back(p.dom.lo_closed ? Formula::cmp_le(lo, x)
                                     : Formula::cmp_lt(lo, x));
    }
    if (p.dom.hi.is_finite()) {
      AffineTerm hi = AffineTerm::constant(p.dom.hi.value);
      conj.push_back(p.dom.hi_closed ? Formula::cmp_le(x, hi)
                                     : Formula::cmp_lt(x, hi));
    }
    AffineTerm val = x.scaled(p.slope) + AffineTerm::constant(p.intercept);
    conj.push_back(Formula::cmp_eq(y, val));
    parts.push_back(Formula::conjoin(conj));
  }
  return Formula::disjoin(parts);
}

bool PiecewiseLinearFunction::is_continuous() const {
  auto junction_ok = [](const PlfPiece& a, const PlfPiece& b) {
    // Pieces whose domains touch must take the same value at the seam.
    if (!a.dom.hi.is_finite() || !b.dom.lo.is_finite()) return true;
    if (a.dom.hi != b.dom.lo) return true;
    if (!a.dom.hi_closed && !b.dom.lo_closed) return true;  // domain breaks
    const Rational& s = a.dom.hi.value;
    return a.value(s) == b.value(s);
  };
  for (size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (!junction_ok(pieces_[i], pieces_[i + 1])) return false;
  if (period_ && !pieces_.empty()) {
    // Seam across the period mark: f(p^-) against f(0) when the domain
    // reaches both ends of the base window.
    const PlfPiece& last = pieces_.back();
    const PlfPiece& first = pieces_.front();
    if (last.dom.hi.value == *period_ && first.dom.lo.value == 0 &&
        first.dom.lo_closed) {
      if (last.value(*period_) != first.value(0)) return false;
    }
  }
  return true;
}

}  // namespace tame
