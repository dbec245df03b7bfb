#pragma once

#include <string>

#include "tame/formula.hpp"
#include "tame/interval.hpp"

namespace tame {

struct QeOptions {
  // Elimination aborts with ResourceLimitError once more than this many
  // constraints have been materialized. Fourier-Motzkin is worst-case
  // doubly exponential, so the budget is a hard stop, not a tuning knob.
  long atom_budget = 200000;
};

// Linear quantifier elimination over the ordered divisible abelian group
// with rational scalars. The result is quantifier-free and equivalent to
// the input over the model.
FormulaPtr eliminate(const FormulaPtr& f, const QeOptions& opts = {});

// Truth value of a sentence in the model.
bool decide(const FormulaPtr& sentence, const QeOptions& opts = {});

// Solution set of a formula with exactly one free variable, as the sorted
// maximal 1-D normal form.
IntervalUnion1D to_interval_union(const FormulaPtr& f, const std::string& var,
                                  const QeOptions& opts = {});

// 1-D normal form of an already quantifier-free formula whose free
// variables are contained in {var}.
IntervalUnion1D interval_union_of_qf(const FormulaPtr& qf,
                                     const std::string& var);

// One-sided limit of a quantifier-free formula: the truth value with
// var := c + epsilon for an infinitesimal positive epsilon, i.e. the
// stable value on ]c, c + delta[ for small delta. Exact atom-wise
// substitution; the result no longer mentions var.
FormulaPtr limit_from_above(const FormulaPtr& qf, const std::string& var,
                            const Rational& c);

// Formula whose solutions are exactly the given union of intervals.
FormulaPtr interval_union_to_formula(const IntervalUnion1D& u,
                                     const std::string& var);

}  // namespace tame
