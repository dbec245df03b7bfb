#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tame/choice.hpp"
#include "tame/periodic.hpp"
#include "tame/plf.hpp"
#include "tame/set.hpp"

namespace tame {

// Graph of a total single-valued function on C x P, with the value in the
// last coordinate. Totality and single-valuedness are decided by
// elimination at construction; DomainError otherwise. The parameter set
// may optionally be declared as an interval ]0,s[, which the convergence
// deciders require.
class DefinableFamily {
 public:
  DefinableFamily(SemilinearSet graph, SemilinearSet c, SemilinearSet p,
                  const QeOptions& opts = {});

  // Family over the parameter interval ]0,s[.
  static DefinableFamily over_interval(SemilinearSet graph, SemilinearSet c,
                                       const Rational& s,
                                       const QeOptions& opts = {});

  const SemilinearSet& graph() const { return graph_; }
  const SemilinearSet& c_set() const { return c_; }
  const SemilinearSet& p_set() const { return p_; }
  int c_arity() const { return c_.ambient(); }
  int p_arity() const { return p_.ambient(); }

  bool has_interval_param() const { return s_.has_value(); }
  // Right endpoint of the parameter interval; DomainError when the family
  // was not declared over an interval.
  const Rational& s() const;

  // C x P as a subset of M^{c_arity + p_arity}.
  SemilinearSet domain() const;

 private:
  SemilinearSet graph_, c_, p_;
  std::optional<Rational> s_;
};

// Partition of the domain of a one-variable function by local behaviour:
// locally constant on x_c, locally strictly increasing and continuous on
// x_plus, locally strictly decreasing and continuous on x_minus, and the
// discrete closed leftover x_d. Periodic functions yield periodic parts.
struct MonotonicityPartition {
  PeriodicSet1D x_d;
  PeriodicSet1D x_c;
  PeriodicSet1D x_plus;
  PeriodicSet1D x_minus;
};

MonotonicityPartition mono_partition(const PiecewiseLinearFunction& f);

// Deciders for the displayed first-order conditions on a family, via
// elimination. The convergence deciders require an interval parameter.
bool equi_continuous(const DefinableFamily& fam, const QeOptions& opts = {});
bool uniformly_equi_continuous(const DefinableFamily& fam,
                               const QeOptions& opts = {});
bool pointwise_bounded(const DefinableFamily& fam, const QeOptions& opts = {});
bool pointwise_convergent(const DefinableFamily& fam,
                          const QeOptions& opts = {});
bool uniformly_convergent(const DefinableFamily& fam,
                          const QeOptions& opts = {});

// Pointwise limit g(x) = lim_{t -> +0} F(x, t) of a pointwise convergent
// family over an interval parameter with one-dimensional C, extracted as
// an explicit piecewise function. DomainError when the preconditions fail.
PiecewiseLinearFunction limit_function(const DefinableFamily& fam,
                                       const QeOptions& opts = {});

// Modulus of continuity at level eps with cap c:
//   phi(x) = sup{0 < delta < c | for all p in P and x' in C,
//                |x - x'| < delta implies |f(x,p) - f(x',p)| < eps},
// with sup of the empty set taken as 0. Requires one-dimensional C.
PiecewiseLinearFunction modulus(const DefinableFamily& fam,
                                const Rational& eps, const Rational& cap = 1,
                                const QeOptions& opts = {});

// Infimum of the modulus over C: (value, attained).
std::pair<Rational, bool> inf_modulus(const DefinableFamily& fam,
                                      const Rational& eps,
                                      const Rational& cap = 1,
                                      const QeOptions& opts = {});

// Report of the Ascoli-style implication: a pointwise convergent family of
// equi-continuous functions on a closed bounded C is uniformly convergent.
struct AscoliReport {
  bool c_closed = false;
  bool c_bounded = false;
  bool equi = false;
  bool pointwise = false;
  bool uniform = false;
  bool hypotheses_met() const {
    return c_closed && c_bounded && equi && pointwise;
  }
  // Meaningful only when the hypotheses hold.
  bool conclusion_holds() const { return uniform; }
};

AscoliReport ascoli_check(const DefinableFamily& fam,
                          const QeOptions& opts = {});

// For F on C x P equi-continuous and pointwise bounded, and a target
// p in the closure of P: the family g_t(x) = F(x, gamma(t)) over ]0,eps[
// along a continuous definable curve gamma -> p. Points already in P get
// the constant curve. DomainError when the preconditions fail.
DefinableFamily curve_family(const DefinableFamily& fam, const Point& p,
                             const Selector& sel = {},
                             const QeOptions& opts = {});

// The projection to P of the set D of discontinuity points of F on C x P
// drops dimension when F is equi-continuous and C is closed and bounded.
struct DiscontinuityProjection {
  SemilinearSet d;       // discontinuity points inside C x P
  int dim_projection;    // dim pi(D), projection onto P
  int dim_p;             // dim P
  bool pass;             // dim pi(D) < dim P
};

DiscontinuityProjection discontinuity_projection_check(
    const DefinableFamily& fam, const QeOptions& opts = {});

}  // namespace tame
