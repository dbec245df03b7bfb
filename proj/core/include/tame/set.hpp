#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tame/formula.hpp"
#include "tame/interval.hpp"
#include "tame/qe.hpp"

namespace tame {

using Point = std::vector<Rational>;

// Subset of M^n carved out by a first-order formula over the canonical
// coordinates x1..xn. Values are immutable; the eliminated form and the
// dimension are cached on first use.
class SemilinearSet {
 public:
  // Coordinate name of axis i (zero-based): "x1", "x2", ...
  static std::string coord(int i);
  static std::vector<std::string> coords(int n);

  // Formula over the canonical coordinates x1..xn.
  SemilinearSet(int ambient, FormulaPtr formula);

  // Renames the given ordered variables to the canonical coordinates.
  static SemilinearSet from_formula(const FormulaPtr& f,
                                    const std::vector<std::string>& vars);

  static SemilinearSet empty_set(int ambient);
  static SemilinearSet whole_space(int ambient);
  static SemilinearSet from_interval_union(const IntervalUnion1D& u);

  int ambient() const { return ambient_; }
  const FormulaPtr& formula() const { return formula_; }

  // Quantifier-free defining formula (eliminated once, then shared).
  FormulaPtr qf_formula() const;

  bool member(const Point& p) const;
  bool is_empty() const;

  SemilinearSet unite(const SemilinearSet& o) const;
  SemilinearSet intersect(const SemilinearSet& o) const;
  SemilinearSet difference(const SemilinearSet& o) const;
  SemilinearSet complement() const;

  SemilinearSet closure() const;
  SemilinearSet interior() const;
  SemilinearSet frontier() const;

  // 1-D normal form; requires ambient() == 1.
  IntervalUnion1D to_interval_union() const;

  // Exact extremum of a nonempty 1-D set. Throws DomainError when empty
  // or not one-dimensional ambient.
  std::pair<ExtRational, bool> inf_1d() const;
  std::pair<ExtRational, bool> sup_1d() const;

  // Requires ambient() == 1: every component a point (then automatically
  // closed). The empty set qualifies.
  bool is_discrete_closed() const;

  // Dimension cache written by the dimension calculus.
  std::optional<int> cached_dimension() const;
  void store_dimension(int d) const;

 private:
  void check_same_ambient(const SemilinearSet& o) const;

  int ambient_;
  FormulaPtr formula_;

  struct Cache {
    std::mutex mu;
    FormulaPtr qf;
    std::optional<int> dim;
  };
  std::shared_ptr<Cache> cache_;
};

}  // namespace tame
