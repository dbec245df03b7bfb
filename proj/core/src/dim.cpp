#include "tame/dim.hpp"

#include "tame/cells.hpp"

#include <algorithm>

#include "tame/errors.hpp"

namespace tame {

namespace {

std::string coord(int i) { return SemilinearSet::coord(i); }

bool lex_less(const Point& a, const Point& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace

int dimension(const SemilinearSet& s, const QeOptions& opts) {
  if (auto cached = s.cached_dimension()) return *cached;
  CellDecomposition d =
      decompose(SemilinearSet::whole_space(s.ambient()), {s}, opts);
  int best = -1;
  for (const Cell& c : d.cells()) {
    if (!s.member(c.center())) continue;
    best = std::max(best, c.dimension());
  }
  s.store_dimension(best);
  return best;
}

Point local_dim_point(const SemilinearSet& s, const QeOptions& opts) {
  CellDecomposition d =
      decompose(SemilinearSet::whole_space(s.ambient()), {s}, opts);
  int best = -1;
  for (const Cell& c : d.cells())
    if (s.member(c.center())) best = std::max(best, c.dimension());
  if (best < 0) throw DomainError("no point in the empty set");
  const Point* pick = nullptr;
  std::vector<Point> centers;
  for (const Cell& c : d.cells()) {
    if (c.dimension() != best) continue;
    Point p = c.center();
    if (!s.member(p)) continue;
    centers.push_back(std::move(p));
  }
  for (const Point& p : centers)
    if (!pick || lex_less(p, *pick)) pick = &p;
  return *pick;
}

SemilinearSet project_last(const SemilinearSet& X, int keep,
                           const QeOptions& opts) {
  int n = X.ambient();
  if (keep < 1 || keep > n) throw DomainError("bad projection arity");
  int drop = n - keep;
  // Quantify away the leading block, then shift the survivors down.
  FormulaPtr f = X.formula();
  for (int j = 0; j < drop; ++j) f = Formula::exists(coord(j), f);
  f = eliminate(f, opts);
  std::map<std::string, std::string> shift;
  for (int j = 0; j < keep; ++j) shift[coord(drop + j)] = coord(j);
  return SemilinearSet(keep, rename_free(f, shift));
}

Point proj_dim_point(const SemilinearSet& X, const SemilinearSet& C,
                     const SemilinearSet& P, const QeOptions& opts) {
  int m = C.ambient(), n = P.ambient();
  if (X.ambient() != m + n) throw DomainError("ambient dimensions differ");

  SemilinearSet piX = project_last(X, n, opts);
  int target = dimension(P, opts);
  if (dimension(piX, opts) != target)
    throw DomainError("projection does not have the dimension of P");

  // Swap the blocks so the P coordinates come first; the cylindrical
  // decomposition then projects onto P by dropping the trailing levels.
  std::map<std::string, std::string> swap;
  for (int j = 0; j < m; ++j) swap[coord(j)] = coord(n + j);
  for (int j = 0; j < n; ++j) swap[coord(m + j)] = coord(j);
  SemilinearSet Xs(m + n, rename_free(X.formula(), swap));

  CellDecomposition d =
      decompose(SemilinearSet::whole_space(m + n), {Xs}, opts);
  std::vector<Point> candidates;
  for (const Cell& c : d.cells()) {
    Point p = c.center();
    if (!Xs.member(p)) continue;
    int base_dim = 0;
    for (int j = 0; j < n; ++j)
      base_dim += c.levels()[j].is_band ? 1 : 0;
    if (base_dim != target) continue;
    candidates.push_back(std::move(p));
  }
  if (candidates.empty())
    throw DomainError("projection does not have the dimension of P");
  const Point* pick = nullptr;
  for (const Point& p : candidates)
    if (!pick || lex_less(p, *pick)) pick = &p;
  // Swap back to (c, p) order.
  Point out;
  for (int j = 0; j < m; ++j) out.push_back((*pick)[n + j]);
  for (int j = 0; j < n; ++j) out.push_back((*pick)[j]);
  return out;
}

namespace {

// Total single-valued function check for a graph over the domain.
bool is_total_function(const SemilinearSet& graph, const SemilinearSet& domain,
                       const QeOptions& opts) {
  int k = domain.ambient();
  FormulaPtr g = graph.formula();
  std::string val = coord(k);
  FormulaPtr total = Formula::implication(domain.formula(),
                                          Formula::exists(val, g));
  for (int j = k - 1; j >= 0; --j) total = Formula::forall(coord(j), total);
  if (!decide(total, opts)) return false;
  FormulaPtr gu = rename_free(g, {{val, "__u"}});
  FormulaPtr gv = rename_free(g, {{val, "__v"}});
  FormulaPtr single = Formula::implication(
      Formula::conjunction(gu, gv),
      Formula::cmp_eq(AffineTerm::variable("__u"),
                      AffineTerm::variable("__v")));
  single = Formula::forall("__u", Formula::forall("__v", single));
  for (int j = k - 1; j >= 0; --j) single = Formula::forall(coord(j), single);
  return decide(single, opts);
}

}  // namespace

bool is_function_graph(const SemilinearSet& graph, const SemilinearSet& domain,
                       const QeOptions& opts) {
  if (graph.ambient() != domain.ambient() + 1)
    throw DomainError("graph must have one more coordinate than the domain");
  return is_total_function(graph, domain, opts);
}

namespace {

// Closure of a cylindrical cell: sections persist and strict band bounds
// relax. Affine bounds extend continuously to the closed base, and the
// relaxed constraints are void wherever the bounds cross.
FormulaPtr cell_closure_formula(const Cell& c) {
  std::vector<FormulaPtr> parts;
  const auto& levels = c.levels();
  for (size_t j = 0; j < levels.size(); ++j) {
    AffineTerm xj = AffineTerm::variable(coord(static_cast<int>(j)));
    const CellLevel& l = levels[j];
    if (!l.is_band) {
      parts.push_back(Formula::cmp_eq(xj, l.section));
      continue;
    }
    if (l.lo.kind == CellBound::Fn)
      parts.push_back(Formula::cmp_le(l.lo.fn, xj));
    if (l.hi.kind == CellBound::Fn)
      parts.push_back(Formula::cmp_le(xj, l.hi.fn));
  }
  return Formula::conjoin(parts);
}

}  // namespace

SemilinearSet discontinuity_set(const SemilinearSet& graph,
                                const SemilinearSet& domain,
                                const QeOptions& opts) {
  int k = domain.ambient();
  if (graph.ambient() != k + 1)
    throw DomainError("graph must have one more coordinate than the domain");
  if (!is_total_function(graph, domain, opts))
    throw DomainError("not the graph of a total function on the domain");

  // Decompose so the function is an affine section over every base cell.
  // Affine pieces extend continuously to cell closures, so the function is
  // discontinuous at x exactly when some adjacent piece's extension
  // disagrees there with the value: the epsilon-delta condition reduces to
  // finitely many quantifier-free comparisons between cell pairs.
  SemilinearSet graph_over_domain(
      k + 1, Formula::conjunction(graph.formula(), domain.formula()));
  CellDecomposition d = decompose(SemilinearSet::whole_space(k + 1),
                                  {graph_over_domain}, opts);
  struct Piece {
    FormulaPtr base;          // the base cell
    FormulaPtr base_closure;  // closure of the base cell
    AffineTerm value;         // the function on the base cell
  };
  std::vector<Piece> pieces;
  for (const Cell& c : d.cells()) {
    if (!graph_over_domain.member(c.center())) continue;
    const CellLevel& top = c.levels()[k];
    if (top.is_band) continue;  // a function graph has no band cells
    Cell base = c.base();
    pieces.push_back(
        {base.formula(), cell_closure_formula(base), top.section});
  }

  std::vector<FormulaPtr> parts;
  for (const Piece& at : pieces) {
    for (const Piece& nb : pieces) {
      if (&at == &nb) continue;
      FormulaPtr mismatch = Formula::conjoin(
          {at.base, nb.base_closure,
           Formula::negation(Formula::cmp_eq(at.value, nb.value))});
      if (SemilinearSet(k, mismatch).is_empty()) continue;
      parts.push_back(std::move(mismatch));
    }
  }
  return SemilinearSet(k, Formula::disjoin(parts));
}

}  // namespace tame
