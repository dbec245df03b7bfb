#include "tame/set.hpp"

#include <algorithm>

#include "tame/errors.hpp"

namespace tame {

std::string SemilinearSet::coord(int i) {
  return "x" + std::to_string(i + 1);
}

std::vector<std::string> SemilinearSet::coords(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(coord(i));
  return out;
}

SemilinearSet::SemilinearSet(int ambient, FormulaPtr formula)
    : ambient_(ambient),
      formula_(std::move(formula)),
      cache_(std::make_shared<Cache>()) {
  if (ambient_ < 1) throw DomainError("ambient dimension must be positive");
  auto allowed = coords(ambient_);
  for (const auto& v : formula_->free_variables()) {
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
      throw DomainError("free variable outside the ambient coordinates: " + v);
  }
}

SemilinearSet SemilinearSet::from_formula(
    const FormulaPtr& f, const std::vector<std::string>& vars) {
  std::map<std::string, std::string> renaming;
  for (size_t i = 0; i < vars.size(); ++i)
    renaming[vars[i]] = coord(static_cast<int>(i));
  return SemilinearSet(static_cast<int>(vars.size()),
                       rename_free(f, renaming));
}

SemilinearSet SemilinearSet::empty_set(int ambient) {
  return SemilinearSet(ambient, Formula::truth(false));
}

SemilinearSet SemilinearSet::whole_space(int ambient) {
  return SemilinearSet(ambient, Formula::truth(true));
}

SemilinearSet SemilinearSet::from_interval_union(const IntervalUnion1D& u) {
  return SemilinearSet(1, interval_union_to_formula(u, coord(0)));
}

FormulaPtr SemilinearSet::qf_formula() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->qf) cache_->qf = eliminate(formula_);
  return cache_->qf;
}

bool SemilinearSet::member(const Point& p) const {
  if (static_cast<int>(p.size()) != ambient_)
    throw DomainError("point arity does not match the ambient dimension");
  Assignment a;
  for (int i = 0; i < ambient_; ++i) a[coord(i)] = p[i];
  return evaluate(qf_formula(), a);
}

bool SemilinearSet::is_empty() const {
  FormulaPtr closed = formula_;
  for (int i = ambient_ - 1; i >= 0; --i)
    closed = Formula::exists(coord(i), closed);
  return !decide(closed);
}

void SemilinearSet::check_same_ambient(const SemilinearSet& o) const {
  if (ambient_ != o.ambient_)
    throw DomainError("ambient dimensions differ");
}

SemilinearSet SemilinearSet::unite(const SemilinearSet& o) const {
  check_same_ambient(o);
  return SemilinearSet(ambient_, Formula::disjunction(formula_, o.formula_));
}

SemilinearSet SemilinearSet::intersect(const SemilinearSet& o) const {
  check_same_ambient(o);
  return SemilinearSet(ambient_, Formula::conjunction(formula_, o.formula_));
}

SemilinearSet SemilinearSet::difference(const SemilinearSet& o) const {
  check_same_ambient(o);
  return SemilinearSet(
      ambient_,
      Formula::conjunction(formula_, Formula::negation(o.formula_)));
}

SemilinearSet SemilinearSet::complement() const {
  return SemilinearSet(ambient_, Formula::negation(formula_));
}

SemilinearSet SemilinearSet::closure() const {
  // x in cl(S) iff every max-norm ball around x meets S.
  std::vector<AffineTerm> xs, ys;
  for (int i = 0; i < ambient_; ++i) {
    xs.push_back(AffineTerm::variable(coord(i)));
    ys.push_back(AffineTerm::variable("__y" + std::to_string(i + 1)));
  }
  std::map<std::string, std::string> to_y;
  for (int i = 0; i < ambient_; ++i)
    to_y[coord(i)] = "__y" + std::to_string(i + 1);
  FormulaPtr in_s = rename_free(formula_, to_y);
  AffineTerm eps = AffineTerm::variable("__e");
  FormulaPtr near = max_norm_lt(xs, ys, eps);
  FormulaPtr inner = Formula::conjunction(in_s, near);
  for (int i = ambient_ - 1; i >= 0; --i)
    inner = Formula::exists("__y" + std::to_string(i + 1), inner);
  FormulaPtr body = Formula::implication(
      Formula::cmp_lt(AffineTerm{}, eps), inner);
  return SemilinearSet(ambient_, eliminate(Formula::forall("__e", body)));
}

SemilinearSet SemilinearSet::interior() const {
  return complement().closure().complement();
}

SemilinearSet SemilinearSet::frontier() const {
  return closure().difference(*this);
}

IntervalUnion1D SemilinearSet::to_interval_union() const {
  if (ambient_ != 1) throw DomainError("not a one-dimensional ambient");
  return tame::to_interval_union(formula_, coord(0));
}

std::pair<ExtRational, bool> SemilinearSet::inf_1d() const {
  return to_interval_union().inf();
}

std::pair<ExtRational, bool> SemilinearSet::sup_1d() const {
  return to_interval_union().sup();
}

bool SemilinearSet::is_discrete_closed() const {
  return to_interval_union().points_only();
}

std::optional<int> SemilinearSet::cached_dimension() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->dim;
}

void SemilinearSet::store_dimension(int d) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->dim = d;
}

}  // namespace tame
