#include "tame/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "tame/cells.hpp"
#include "tame/dim.hpp"
#include "tame/errors.hpp"

namespace tame {

namespace {

std::string coord(int i) { return SemilinearSet::coord(i); }

std::vector<std::string> fresh(const std::string& stem, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

std::vector<AffineTerm> terms(const std::vector<std::string>& vars) {
  std::vector<AffineTerm> out;
  for (const std::string& v : vars) out.push_back(AffineTerm::variable(v));
  return out;
}

// Membership formula of the set with its canonical coordinates renamed.
FormulaPtr set_at(const SemilinearSet& s,
                  const std::vector<std::string>& vars) {
  std::map<std::string, std::string> m;
  for (int i = 0; i < s.ambient(); ++i) m[coord(i)] = vars[i];
  return rename_free(s.formula(), m);
}

// F(x, p) = y as a formula over the given variable names.
FormulaPtr graph_at(const DefinableFamily& fam,
                    const std::vector<std::string>& xs,
                    const std::vector<std::string>& ps,
                    const std::string& y) {
  std::map<std::string, std::string> m;
  int mm = fam.c_arity(), n = fam.p_arity();
  for (int i = 0; i < mm; ++i) m[coord(i)] = xs[i];
  for (int j = 0; j < n; ++j) m[coord(mm + j)] = ps[j];
  m[coord(mm + n)] = y;
  return rename_free(fam.graph().formula(), m);
}

FormulaPtr forall_all(const std::vector<std::string>& vars, FormulaPtr f) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    f = Formula::forall(*it, std::move(f));
  return f;
}

FormulaPtr exists_all(const std::vector<std::string>& vars, FormulaPtr f) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    f = Formula::exists(*it, std::move(f));
  return f;
}

FormulaPtr positive(const std::string& v) {
  return Formula::cmp_lt(AffineTerm{}, AffineTerm::variable(v));
}

}  // namespace

DefinableFamily::DefinableFamily(SemilinearSet graph, SemilinearSet c,
                                 SemilinearSet p, const QeOptions& opts)
    : graph_(std::move(graph)), c_(std::move(c)), p_(std::move(p)) {
  if (graph_.ambient() != c_.ambient() + p_.ambient() + 1)
    throw DomainError("family graph arity must be |C| + |P| + 1");
  if (!is_function_graph(graph_, domain(), opts))
    throw DomainError("not the graph of a total function on C x P");
}

DefinableFamily DefinableFamily::over_interval(SemilinearSet graph,
                                               SemilinearSet c,
                                               const Rational& s,
                                               const QeOptions& opts) {
  if (!(s > 0)) throw DomainError("parameter interval needs s > 0");
  AffineTerm t = AffineTerm::variable(coord(0));
  FormulaPtr p = Formula::conjunction(
      Formula::cmp_lt(AffineTerm{}, t),
      Formula::cmp_lt(t, AffineTerm::constant(s)));
  DefinableFamily fam(std::move(graph), std::move(c),
                      SemilinearSet(1, std::move(p)), opts);
  fam.s_ = s;
  return fam;
}

const Rational& DefinableFamily::s() const {
  if (!s_) throw DomainError("family has no interval parameter");
  return *s_;
}

SemilinearSet DefinableFamily::domain() const {
  int m = c_.ambient(), n = p_.ambient();
  std::map<std::string, std::string> shift;
  for (int j = 0; j < n; ++j) shift[coord(j)] = coord(m + j);
  return SemilinearSet(
      m + n,
      Formula::conjunction(c_.formula(), rename_free(p_.formula(), shift)));
}

namespace {

// The set of (x..., e) (or just (e) with x existential) such that for
// every d > 0 some x' in C within distance d of x has
// |f(x,p) - f(x',p)| >= e for some parameter p. The inner condition is
// monotone in d, so the universal quantifier over d collapses to the
// one-sided limit d -> +0 of a pure existential formula.
SemilinearSet persistent_bad_pairs(const DefinableFamily& fam,
                                   bool x_existential,
                                   const QeOptions& opts) {
  int m = fam.c_arity(), n = fam.p_arity();
  auto us = fresh("__u", m), ps = fresh("__q", n);
  int base = x_existential ? 0 : m;
  std::string evar = coord(base);
  std::vector<std::string> xs;
  if (x_existential) {
    xs = fresh("__x", m);
  } else {
    for (int i = 0; i < m; ++i) xs.push_back(coord(i));
  }
  std::vector<FormulaPtr> body{
      set_at(fam.c_set(), xs),
      set_at(fam.c_set(), us),
      set_at(fam.p_set(), ps),
      graph_at(fam, xs, ps, "__fy"),
      graph_at(fam, us, ps, "__fz"),
      Formula::negation(max_norm_lt({AffineTerm::variable("__fy")},
                                    {AffineTerm::variable("__fz")},
                                    AffineTerm::variable(evar))),
      max_norm_lt(terms(xs), terms(us), AffineTerm::variable("__d"))};
  FormulaPtr phi = Formula::conjoin(body);
  phi = Formula::exists(
      "__fy", Formula::exists("__fz", exists_all(ps, exists_all(us, phi))));
  if (x_existential) phi = exists_all(xs, phi);
  return SemilinearSet(base + 1,
                       limit_from_above(eliminate(phi, opts), "__d", 0));
}

}  // namespace

bool equi_continuous(const DefinableFamily& fam, const QeOptions& opts) {
  int m = fam.c_arity();
  SemilinearSet bad = persistent_bad_pairs(fam, false, opts);
  SemilinearSet fail(
      m + 1, Formula::conjunction(bad.formula(), positive(coord(m))));
  return fail.is_empty();
}

bool uniformly_equi_continuous(const DefinableFamily& fam,
                               const QeOptions& opts) {
  SemilinearSet bad = persistent_bad_pairs(fam, true, opts);
  SemilinearSet fail(
      1, Formula::conjunction(bad.formula(), positive(coord(0))));
  return fail.is_empty();
}

bool pointwise_bounded(const DefinableFamily& fam, const QeOptions& opts) {
  int m = fam.c_arity(), n = fam.p_arity();
  auto ps = fresh("__q", n);
  std::vector<std::string> xs;
  for (int i = 0; i < m; ++i) xs.push_back(coord(i));
  // Values of the family over x, with the value in the last coordinate.
  FormulaPtr phi = Formula::conjunction(
      fam.c_set().formula(),
      exists_all(ps, Formula::conjunction(set_at(fam.p_set(), ps),
                                          graph_at(fam, xs, ps, coord(m)))));
  SemilinearSet values(m + 1, phi);
  // The value fiber over x is a finite union of intervals with affine
  // endpoints; it is unbounded exactly on the bases of cells reaching an
  // infinite bound.
  CellDecomposition d =
      decompose(SemilinearSet::whole_space(m + 1), {values}, opts);
  std::vector<FormulaPtr> unbounded;
  for (const Cell& c : d.cells()) {
    if (!values.member(c.center())) continue;
    const CellLevel& top = c.levels()[m];
    if (!top.is_band) continue;
    if (top.lo.kind == CellBound::NegInf || top.hi.kind == CellBound::PosInf)
      unbounded.push_back(c.base().formula());
  }
  return SemilinearSet(m, Formula::disjoin(unbounded)).is_empty();
}

namespace {

// Graph of x -> lim_{t -> +0} F(x, t) over C. The value y is the limit
// exactly when for every e > 0 the trajectory stays within e of y on some
// right neighbourhood of 0; both thresholds enter monotonically, so the
// epsilon-delta sentence collapses to two one-sided limit substitutions
// applied to a pure existential "escape" formula.
SemilinearSet candidate_limit_graph(const DefinableFamily& fam,
                                    const QeOptions& opts) {
  if (!fam.has_interval_param())
    throw DomainError("convergence needs an interval parameter");
  int m = fam.c_arity();
  std::vector<std::string> xs;
  for (int i = 0; i < m; ++i) xs.push_back(coord(i));
  std::string yvar = coord(m);
  // Escape(x, y, e, d): some t in ]0, min(s,d)[ has |F(x,t) - y| >= e.
  AffineTerm t = AffineTerm::variable("__t");
  std::vector<FormulaPtr> body{
      Formula::cmp_lt(AffineTerm{}, t),
      Formula::cmp_lt(t, AffineTerm::constant(fam.s())),
      Formula::cmp_lt(t, AffineTerm::variable("__d")),
      graph_at(fam, xs, {"__t"}, "__fy"),
      Formula::negation(max_norm_lt({AffineTerm::variable("__fy")},
                                    {AffineTerm::variable(yvar)},
                                    AffineTerm::variable("__e")))};
  FormulaPtr escape = Formula::exists(
      "__t", Formula::exists("__fy", Formula::conjoin(body)));
  // Escapes persist down to d -> +0 for some e > 0 exactly when y is not
  // the limit; the set of persistent escapes shrinks as e does.
  FormulaPtr persistent =
      limit_from_above(eliminate(escape, opts), "__d", 0);
  FormulaPtr diverges = limit_from_above(persistent, "__e", 0);
  return SemilinearSet(
      m + 1,
      Formula::conjunction(fam.c_set().formula(),
                           Formula::negation(diverges)));
}

}  // namespace

bool pointwise_convergent(const DefinableFamily& fam, const QeOptions& opts) {
  SemilinearSet limit = candidate_limit_graph(fam, opts);
  return is_function_graph(limit, fam.c_set(), opts);
}

bool uniformly_convergent(const DefinableFamily& fam, const QeOptions& opts) {
  if (!pointwise_convergent(fam, opts)) return false;
  SemilinearSet limit = candidate_limit_graph(fam, opts);
  int m = fam.c_arity();
  auto xs = fresh("__x", m);
  // Deviations (r, t): some x in C has |F(x,t) - g(x)| >= r. Uniform
  // convergence to the limit g says such t cannot approach 0 for any
  // positive r; by the triangle inequality (halving r) this is equivalent
  // to the uniform Cauchy condition.
  std::string rvar = coord(0);
  std::vector<std::string> lim_vars = xs;
  lim_vars.push_back("__fz");
  AffineTerm t = AffineTerm::variable("__t");
  std::vector<FormulaPtr> body{
      set_at(fam.c_set(), xs),
      graph_at(fam, xs, {"__t"}, "__fy"),
      set_at(limit, lim_vars),
      Formula::negation(max_norm_lt({AffineTerm::variable("__fy")},
                                    {AffineTerm::variable("__fz")},
                                    AffineTerm::variable(rvar))),
      Formula::cmp_lt(AffineTerm{}, t),
      Formula::cmp_lt(t, AffineTerm::constant(fam.s())),
      Formula::cmp_lt(t, AffineTerm::variable("__s"))};
  FormulaPtr dev = Formula::exists(
      "__t",
      Formula::exists(
          "__fy",
          Formula::exists("__fz", exists_all(xs, Formula::conjoin(body)))));
  // Deviations by at least r occur arbitrarily close to 0 exactly when
  // they persist as the window ]0, s'[ shrinks; the window bound enters
  // monotonically, so the shrinking collapses to a one-sided limit.
  FormulaPtr persistent = limit_from_above(eliminate(dev, opts), "__s", 0);
  SemilinearSet fail(1,
                     Formula::conjunction(persistent, positive(rvar)));
  return fail.is_empty();
}

namespace {

// Endpoints of a one-dimensional base cell level; bounds are constants.
Interval1D base_cell_interval(const CellLevel& l) {
  if (!l.is_band) return Interval1D::point(l.section.constant_part());
  Interval1D out;
  out.lo = l.lo.kind == CellBound::Fn
               ? ExtRational::finite(l.lo.fn.constant_part())
               : ExtRational::neg_inf();
  out.hi = l.hi.kind == CellBound::Fn
               ? ExtRational::finite(l.hi.fn.constant_part())
               : ExtRational::pos_inf();
  out.lo_closed = false;
  out.hi_closed = false;
  return out;
}

PlfPiece piece_from(const Interval1D& dom, const AffineTerm& value) {
  return {dom, value.coefficient(coord(0)), value.constant_part()};
}

void sort_pieces(std::vector<PlfPiece>& pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const PlfPiece& a, const PlfPiece& b) {
              if (!(a.dom.lo == b.dom.lo)) return a.dom.lo < b.dom.lo;
              return a.dom.lo_closed && !b.dom.lo_closed;
            });
}

}  // namespace

PiecewiseLinearFunction limit_function(const DefinableFamily& fam,
                                       const QeOptions& opts) {
  if (fam.c_arity() != 1)
    throw DomainError("limit extraction needs a one-dimensional C");
  if (!pointwise_convergent(fam, opts))
    throw DomainError("family is not pointwise convergent");

  SemilinearSet limit_graph = candidate_limit_graph(fam, opts);
  CellDecomposition d =
      decompose(SemilinearSet::whole_space(2), {limit_graph}, opts);
  std::vector<PlfPiece> pieces;
  for (const Cell& c : d.cells()) {
    if (c.levels()[1].is_band) continue;
    if (!limit_graph.member(c.center())) continue;
    pieces.push_back(piece_from(base_cell_interval(c.levels()[0]),
                                c.levels()[1].section));
  }
  sort_pieces(pieces);
  return PiecewiseLinearFunction(std::move(pieces));
}

PiecewiseLinearFunction modulus(const DefinableFamily& fam,
                                const Rational& eps, const Rational& cap,
                                const QeOptions& opts) {
  if (fam.c_arity() != 1)
    throw DomainError("modulus extraction needs a one-dimensional C");
  if (!(eps > 0) || !(cap > 0))
    throw DomainError("modulus needs positive eps and cap");
  int n = fam.p_arity();
  auto ps = fresh("__q", n);

  // A delta fails at x when some x' in C within delta has a value gap of
  // at least eps for some parameter; the witnesses at x are the deltas in
  // ]0,cap[ below every failure.
  AffineTerm x = AffineTerm::variable(coord(0));
  AffineTerm delta = AffineTerm::variable(coord(1));
  FormulaPtr guard = Formula::conjunction(
      Formula::cmp_lt(AffineTerm{}, delta),
      Formula::cmp_lt(delta, AffineTerm::constant(cap)));
  std::vector<FormulaPtr> bad_body{
      set_at(fam.c_set(), {"__u0"}),
      set_at(fam.p_set(), ps),
      max_norm_lt({x}, {AffineTerm::variable("__u0")}, delta),
      graph_at(fam, {coord(0)}, ps, "__fy"),
      graph_at(fam, {"__u0"}, ps, "__fz"),
      Formula::negation(max_norm_lt({AffineTerm::variable("__fy")},
                                    {AffineTerm::variable("__fz")},
                                    AffineTerm::constant(eps)))};
  FormulaPtr bad = Formula::exists(
      "__u0", exists_all(ps, Formula::exists(
                                 "__fy", Formula::exists(
                                             "__fz",
                                             Formula::conjoin(bad_body)))));
  SemilinearSet good(2, Formula::conjoin({fam.c_set().formula(), guard,
                                          Formula::negation(bad)}));
  SemilinearSet c_cyl(2, fam.c_set().formula());

  CellDecomposition d = decompose(SemilinearSet::whole_space(2),
                                  {good, c_cyl}, opts);
  // For each base cell inside C the witnesses form a stack of fibers with
  // affine bounds; the supremum is the largest upper bound, or 0 when no
  // delta works there.
  struct Stack {
    Interval1D dom;
    Point sample;          // base center
    bool any = false;
    AffineTerm sup;        // valid when any
  };
  std::map<std::string, Stack> stacks;
  for (const Cell& c : d.cells()) {
    Cell base = c.base();
    std::string key = base.str();
    auto it = stacks.find(key);
    if (it == stacks.end()) {
      Stack s;
      s.dom = base_cell_interval(c.levels()[0]);
      s.sample = base.center();
      it = stacks.emplace(key, std::move(s)).first;
    }
    Stack& s = it->second;
    if (!fam.c_set().member(s.sample)) continue;
    if (!good.member(c.center())) continue;
    const CellLevel& top = c.levels()[1];
    AffineTerm ub = top.is_band
                        ? (top.hi.kind == CellBound::Fn
                               ? top.hi.fn
                               : AffineTerm::constant(cap))
                        : top.section;
    Assignment at;
    at[coord(0)] = s.sample[0];
    if (!s.any || s.sup.evaluate(at) < ub.evaluate(at)) {
      s.sup = ub;
      s.any = true;
    }
  }
  std::vector<PlfPiece> pieces;
  for (auto& [key, s] : stacks) {
    if (!fam.c_set().member(s.sample)) continue;
    pieces.push_back(s.any ? piece_from(s.dom, s.sup)
                           : PlfPiece{s.dom, 0, 0});
  }
  sort_pieces(pieces);
  return PiecewiseLinearFunction(std::move(pieces));
}

std::pair<Rational, bool> inf_modulus(const DefinableFamily& fam,
                                      const Rational& eps,
                                      const Rational& cap,
                                      const QeOptions& opts) {
  PiecewiseLinearFunction phi = modulus(fam, eps, cap, opts);
  if (phi.pieces().empty()) throw DomainError("modulus over an empty C");
  bool have = false, attained = false;
  Rational best = 0;
  for (const PlfPiece& p : phi.pieces()) {
    Rational v;
    bool att;
    if (p.slope == 0) {
      v = p.intercept;
      att = true;
    } else if (p.slope > 0) {
      if (!p.dom.lo.is_finite())
        throw DomainError("unbounded modulus piece");
      v = p.value(p.dom.lo.value);
      att = p.dom.lo_closed;
    } else {
      if (!p.dom.hi.is_finite())
        throw DomainError("unbounded modulus piece");
      v = p.value(p.dom.hi.value);
      att = p.dom.hi_closed;
    }
    if (!have || v < best) {
      best = v;
      attained = att;
      have = true;
    } else if (v == best) {
      attained = attained || att;
    }
  }
  return {best, attained};
}

namespace {

bool set_closed(const SemilinearSet& s) {
  return s.closure().difference(s).is_empty();
}

bool set_bounded(const SemilinearSet& s, const QeOptions& opts) {
  int n = s.ambient();
  auto xs = fresh("__x", n);
  std::vector<AffineTerm> zeros(n, AffineTerm{});
  FormulaPtr inside = Formula::implication(
      set_at(s, xs),
      max_norm_lt(terms(xs), zeros, AffineTerm::variable("__b")));
  FormulaPtr sentence =
      Formula::exists("__b", forall_all(xs, inside));
  return decide(sentence, opts);
}

}  // namespace

AscoliReport ascoli_check(const DefinableFamily& fam, const QeOptions& opts) {
  AscoliReport r;
  r.c_closed = set_closed(fam.c_set());
  r.c_bounded = set_bounded(fam.c_set(), opts);
  r.equi = equi_continuous(fam, opts);
  r.pointwise = pointwise_convergent(fam, opts);
  r.uniform = uniformly_convergent(fam, opts);
  return r;
}

DefinableFamily curve_family(const DefinableFamily& fam, const Point& p,
                             const Selector& sel, const QeOptions& opts) {
  int m = fam.c_arity(), n = fam.p_arity();
  if (static_cast<int>(p.size()) != n)
    throw DomainError("target point arity differs from P");
  if (!equi_continuous(fam, opts))
    throw DomainError("family is not equi-continuous");
  if (!pointwise_bounded(fam, opts))
    throw DomainError("family is not pointwise bounded");
  if (!fam.p_set().closure().member(p))
    throw DomainError("target point is not in the closure of P");

  std::string tvar = coord(m);            // parameter of the new family
  std::string vvar = coord(m + 1);        // value of the new family

  if (fam.p_set().member(p)) {
    // The constant curve at p already works.
    FormulaPtr g = fam.graph().formula();
    for (int j = 0; j < n; ++j)
      g = substitute(g, coord(m + j), AffineTerm::constant(p[j]));
    g = rename_free(g, {{coord(m + n), vvar}});
    FormulaPtr in_t = Formula::conjunction(
        positive(tvar), Formula::cmp_lt(AffineTerm::variable(tvar),
                                        AffineTerm::constant(1)));
    return DefinableFamily::over_interval(
        SemilinearSet(m + 2, Formula::conjunction(in_t, g)), fam.c_set(), 1,
        opts);
  }

  CurveSelection cs = curve_selection(fam.p_set(), p, sel, opts);
  auto pvars = fresh("__p", n);
  std::vector<FormulaPtr> parts;
  for (int j = 0; j < n; ++j)
    parts.push_back(cs.gamma.coords[j].graph(tvar, pvars[j]));
  std::map<std::string, std::string> ren;
  for (int j = 0; j < n; ++j) ren[coord(m + j)] = pvars[j];
  ren[coord(m + n)] = vvar;
  parts.push_back(rename_free(fam.graph().formula(), ren));
  FormulaPtr g = exists_all(pvars, Formula::conjoin(parts));
  FormulaPtr in_t = Formula::conjunction(
      positive(tvar), Formula::cmp_lt(AffineTerm::variable(tvar),
                                      AffineTerm::constant(cs.epsilon)));
  return DefinableFamily::over_interval(
      SemilinearSet(m + 2, Formula::conjunction(in_t, g)), fam.c_set(),
      cs.epsilon, opts);
}

DiscontinuityProjection discontinuity_projection_check(
    const DefinableFamily& fam, const QeOptions& opts) {
  if (!set_closed(fam.c_set()) || !set_bounded(fam.c_set(), opts))
    throw DomainError("C must be closed and bounded");
  if (!equi_continuous(fam, opts))
    throw DomainError("family is not equi-continuous");
  int n = fam.p_arity();
  SemilinearSet d = discontinuity_set(fam.graph(), fam.domain(), opts);
  SemilinearSet proj = project_last(d, n, opts);
  int dim_proj = dimension(proj, opts);
  int dim_p = dimension(fam.p_set(), opts);
  return {std::move(d), dim_proj, dim_p, dim_proj < dim_p};
}

namespace {

PeriodicSet1D finite_only(IntervalUnion1D u) {
  return PeriodicSet1D(std::move(u), IntervalUnion1D::empty_set(), 1,
                       ExtRational::neg_inf());
}

enum class LocalKind { Dead, Constant, Up, Down };

LocalKind slope_kind(const Rational& s) {
  if (s == 0) return LocalKind::Constant;
  return s > 0 ? LocalKind::Up : LocalKind::Down;
}

// Behaviour at a junction with the given one-sided germs and the value at
// the point itself.
LocalKind junction_kind(const Rational& left_limit, const Rational& left_slope,
                        const Rational& value, const Rational& right_limit,
                        const Rational& right_slope) {
  if (left_limit != value || right_limit != value) return LocalKind::Dead;
  LocalKind l = slope_kind(left_slope), r = slope_kind(right_slope);
  return l == r ? l : LocalKind::Dead;
}

}  // namespace

MonotonicityPartition mono_partition(const PiecewiseLinearFunction& f) {
  std::vector<Interval1D> cs, up, down;
  std::vector<Interval1D> dead;

  const auto& pieces = f.pieces();
  auto interior_of = [](const Interval1D& i) {
    return Interval1D{i.lo, i.hi, false, false};
  };
  auto push_kind = [&](LocalKind k, Interval1D part) {
    switch (k) {
      case LocalKind::Dead: dead.push_back(std::move(part)); break;
      case LocalKind::Constant: cs.push_back(std::move(part)); break;
      case LocalKind::Up: up.push_back(std::move(part)); break;
      case LocalKind::Down: down.push_back(std::move(part)); break;
    }
  };

  // Open piece interiors are classified by their slope alone.
  for (const PlfPiece& p : pieces) {
    Interval1D inner = interior_of(p.dom);
    if (!inner.empty()) push_kind(slope_kind(p.slope), inner);
  }

  // The piece at x, when defined, with its affine data.
  auto piece_index_at = [&](const Rational& x) -> int {
    for (size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].dom.contains(x)) return static_cast<int>(i);
    return -1;
  };

  if (!f.is_periodic()) {
    IntervalUnion1D dom = f.domain();
    // Junctions: finite piece endpoints that belong to the domain.
    std::vector<Rational> junctions;
    auto add = [&](const ExtRational& e) {
      if (!e.is_finite() || !f.defined_at(e.value)) return;
      if (std::find(junctions.begin(), junctions.end(), e.value) ==
          junctions.end())
        junctions.push_back(e.value);
    };
    for (const PlfPiece& p : pieces) {
      add(p.dom.lo);
      add(p.dom.hi);
    }
    for (const Rational& b : junctions) {
      // Component endpoints have no two-sided neighbourhood.
      bool interior = false;
      for (const Interval1D& comp : dom.components())
        if (comp.lo < ExtRational::finite(b) &&
            ExtRational::finite(b) < comp.hi)
          interior = true;
      if (!interior) {
        dead.push_back(Interval1D::point(b));
        continue;
      }
      int at = piece_index_at(b);
      const PlfPiece& pc = pieces[at];
      const PlfPiece& pl =
          pc.dom.lo < ExtRational::finite(b) ? pc : pieces[at - 1];
      const PlfPiece& pr =
          ExtRational::finite(b) < pc.dom.hi ? pc : pieces[at + 1];
      push_kind(junction_kind(pl.value(b), pl.slope, pc.value(b),
                              pr.value(b), pr.slope),
                Interval1D::point(b));
    }
    return {finite_only(IntervalUnion1D::from_intervals(std::move(dead))),
            finite_only(IntervalUnion1D::from_intervals(std::move(cs))),
            finite_only(IntervalUnion1D::from_intervals(std::move(up))),
            finite_only(IntervalUnion1D::from_intervals(std::move(down)))};
  }

  // Periodic case: pieces live in [0, period[ and every point has a
  // two-sided neighbourhood. Junctions inside the period classify as
  // above; the wrap junction at 0 sees the last piece shifted back.
  const Rational& period = f.period();
  std::vector<Rational> junctions;
  auto add = [&](const ExtRational& e) {
    if (!e.is_finite()) return;
    Rational v = e.value;
    if (v == period) v = 0;
    if (!f.defined_at(v)) return;
    if (std::find(junctions.begin(), junctions.end(), v) == junctions.end())
      junctions.push_back(v);
  };
  for (const PlfPiece& p : pieces) {
    add(p.dom.lo);
    add(p.dom.hi);
  }
  for (const Rational& b : junctions) {
    Rational left_limit, left_slope;
    if (b == 0) {
      const PlfPiece& last = pieces.back();
      left_limit = last.value(period);
      left_slope = last.slope;
    } else {
      int at = piece_index_at(b);
      const PlfPiece& pc = pieces[at];
      const PlfPiece& pl =
          pc.dom.lo < ExtRational::finite(b) ? pc : pieces[at - 1];
      left_limit = pl.value(b);
      left_slope = pl.slope;
    }
    int at = piece_index_at(b);
    const PlfPiece& pc = pieces[at];
    const PlfPiece& pr =
        ExtRational::finite(b) < pc.dom.hi ? pc : pieces[at + 1];
    push_kind(junction_kind(left_limit, left_slope, pc.value(b), pr.value(b),
                            pr.slope),
              Interval1D::point(b));
  }
  auto periodic = [&](std::vector<Interval1D> parts) {
    return PeriodicSet1D(IntervalUnion1D::empty_set(),
                         IntervalUnion1D::from_intervals(std::move(parts)),
                         period, ExtRational::neg_inf());
  };
  return {periodic(std::move(dead)), periodic(std::move(cs)),
          periodic(std::move(up)), periodic(std::move(down))};
}

}  // namespace tame
