#include "tame/cells.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tame/errors.hpp"

#include "json.hpp"

namespace tame {

namespace {

std::string coord(int j) { return SemilinearSet::coord(j); }

// Highest coordinate index (zero-based) with a nonzero coefficient, or -1
// for constants.
int top_level(const AffineTerm& t) {
  int top = -1;
  for (const auto& [v, c] : t.coefficients()) {
    if (v.size() < 2 || v[0] != 'x') continue;
    int idx = std::stoi(v.substr(1)) - 1;
    top = std::max(top, idx);
  }
  return top;
}

FormulaPtr level_formula(const CellLevel& l, int j) {
  AffineTerm xj = AffineTerm::variable(coord(j));
  if (!l.is_band) return Formula::cmp_eq(xj, l.section);
  std::vector<FormulaPtr> conj;
  if (l.lo.kind == CellBound::Fn)
    conj.push_back(Formula::cmp_lt(l.lo.fn, xj));
  if (l.hi.kind == CellBound::Fn)
    conj.push_back(Formula::cmp_lt(xj, l.hi.fn));
  return Formula::conjoin(conj);
}

}  // namespace

Cell::Cell(std::vector<CellLevel> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw DomainError("cell needs at least one level");
  for (int j = 0; j < ambient(); ++j) {
    const CellLevel& l = levels_[j];
    auto check = [&](const AffineTerm& t) {
      if (top_level(t) >= j)
        throw DomainError("level bound mentions a later coordinate");
    };
    if (l.is_band) {
      if (l.lo.kind == CellBound::Fn) check(l.lo.fn);
      if (l.hi.kind == CellBound::Fn) check(l.hi.fn);
    } else {
      check(l.section);
    }
  }
}

std::vector<int> Cell::signature() const {
  std::vector<int> s;
  for (const CellLevel& l : levels_) s.push_back(l.is_band ? 1 : 0);
  return s;
}

int Cell::dimension() const {
  int d = 0;
  for (const CellLevel& l : levels_) d += l.is_band ? 1 : 0;
  return d;
}

FormulaPtr Cell::formula() const {
  std::vector<FormulaPtr> conj;
  for (int j = 0; j < ambient(); ++j)
    conj.push_back(level_formula(levels_[j], j));
  return Formula::conjoin(conj);
}

bool Cell::contains(const Point& p) const {
  if (static_cast<int>(p.size()) != ambient())
    throw DomainError("point arity does not match the cell ambient");
  Assignment a;
  for (int j = 0; j < ambient(); ++j) a[coord(j)] = p[j];
  for (int j = 0; j < ambient(); ++j) {
    const CellLevel& l = levels_[j];
    if (!l.is_band) {
      if (p[j] != l.section.evaluate(a)) return false;
    } else {
      if (l.lo.kind == CellBound::Fn && !(l.lo.fn.evaluate(a) < p[j]))
        return false;
      if (l.hi.kind == CellBound::Fn && !(p[j] < l.hi.fn.evaluate(a)))
        return false;
    }
  }
  return true;
}

Point Cell::center() const {
  Point p;
  Assignment a;
  for (int j = 0; j < ambient(); ++j) {
    const CellLevel& l = levels_[j];
    Rational v;
    if (!l.is_band) {
      v = l.section.evaluate(a);
    } else if (l.lo.kind == CellBound::Fn && l.hi.kind == CellBound::Fn) {
      v = (l.lo.fn.evaluate(a) + l.hi.fn.evaluate(a)) / 2;
    } else if (l.lo.kind == CellBound::Fn) {
      v = l.lo.fn.evaluate(a) + 1;
    } else if (l.hi.kind == CellBound::Fn) {
      v = l.hi.fn.evaluate(a) - 1;
    } else {
      v = 0;
    }
    p.push_back(v);
    a[coord(j)] = v;
  }
  return p;
}

Cell Cell::base() const {
  if (ambient() < 2) throw DomainError("cell has no base");
  return Cell(std::vector<CellLevel>(levels_.begin(), levels_.end() - 1));
}

std::string Cell::str() const {
  return format_formula(formula());
}

CellDecomposition::CellDecomposition(int ambient, FormulaPtr box,
                                     std::vector<Cell> cells)
    : ambient_(ambient), box_(std::move(box)), cells_(std::move(cells)) {
  for (const Cell& c : cells_)
    if (c.ambient() != ambient_)
      throw DomainError("cell ambient does not match the decomposition");
}

int CellDecomposition::locate(const Point& p) const {
  for (size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].contains(p)) return static_cast<int>(i);
  return -1;
}

namespace {

nlohmann::json term_to_json(const AffineTerm& t) {
  nlohmann::json coeffs = nlohmann::json::object();
  for (const auto& [v, c] : t.coefficients()) coeffs[v] = to_string(c);
  return {{"coeffs", coeffs}, {"constant", to_string(t.constant_part())}};
}

nlohmann::json bound_to_json(const CellBound& b) {
  switch (b.kind) {
    case CellBound::NegInf: return {{"kind", "-inf"}};
    case CellBound::PosInf: return {{"kind", "+inf"}};
    case CellBound::Fn: return {{"kind", "fn"}, {"value", term_to_json(b.fn)}};
  }
  return {};
}

}  // namespace

std::string CellDecomposition::to_json() const {
  nlohmann::json cells = nlohmann::json::array();
  for (const Cell& c : cells_) {
    nlohmann::json levels = nlohmann::json::array();
    for (const CellLevel& l : c.levels()) {
      if (l.is_band) {
        levels.push_back({{"type", "band"},
                          {"lo", bound_to_json(l.lo)},
                          {"hi", bound_to_json(l.hi)}});
      } else {
        levels.push_back(
            {{"type", "section"}, {"value", term_to_json(l.section)}});
      }
    }
    cells.push_back({{"signature", c.signature()}, {"levels", levels}});
  }
  nlohmann::json doc = {{"schema", "1"},
                        {"ambient", ambient_},
                        {"box", format_formula(box_)},
                        {"cells", cells}};
  return doc.dump(2);
}

namespace {

// Monic normalization against the top coordinate so equal loci coincide.
AffineTerm monic(const AffineTerm& t, int level) {
  Rational a = t.coefficient(coord(level));
  return t.scaled(1 / a);
}

struct Pools {
  // pool[j]: monic terms whose top coordinate is x_{j+1}.
  std::vector<std::vector<AffineTerm>> pool;
  long budget;

  void add(const AffineTerm& t) {
    int top = top_level(t);
    if (top < 0) return;
    AffineTerm m = monic(t, top);
    auto& v = pool[top];
    if (std::find(v.begin(), v.end(), m) == v.end()) {
      v.push_back(m);
      if (--budget < 0)
        throw ResourceLimitError("decomposition exceeded the atom budget");
    }
  }
};

}  // namespace

CellDecomposition decompose(const SemilinearSet& box,
                            const std::vector<SemilinearSet>& family,
                            const QeOptions& opts) {
  int n = box.ambient();
  for (const SemilinearSet& s : family)
    if (s.ambient() != n) throw DomainError("ambient dimensions differ");

  Pools pools;
  pools.pool.resize(n);
  pools.budget = opts.atom_budget;
  auto harvest = [&](const FormulaPtr& f) {
    std::vector<std::pair<AffineTerm, Rel>> atoms;
    collect_atoms(f, atoms);
    for (const auto& [t, r] : atoms) pools.add(t);
  };
  harvest(box.qf_formula());
  for (const SemilinearSet& s : family) harvest(s.qf_formula());

  // Projection: crossings of two sections at level j become constraints on
  // the base coordinates.
  for (int j = n - 1; j >= 1; --j) {
    const auto snapshot = pools.pool[j];
    for (size_t a = 0; a < snapshot.size(); ++a)
      for (size_t b = a + 1; b < snapshot.size(); ++b)
        pools.add(snapshot[a] - snapshot[b]);
  }

  // Lifting: extend every partial cell through each level in turn.
  std::vector<std::vector<CellLevel>> partial{{}};
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<CellLevel>> next;
    for (const auto& prefix : partial) {
      Assignment at;
      {
        Cell pc = prefix.empty() ? Cell({CellLevel::band(
                                       CellBound::neg_inf(),
                                       CellBound::pos_inf())})
                                 : Cell(prefix);
        Point c = prefix.empty() ? Point{} : pc.center();
        for (size_t k = 0; k < c.size(); ++k) at[coord(static_cast<int>(k))] =
            c[k];
      }
      // Section functions over this base, ordered by their value at the
      // base center (the order is constant across the base cell).
      std::vector<std::pair<Rational, AffineTerm>> secs;
      for (const AffineTerm& t : pools.pool[j]) {
        AffineTerm theta = -t;
        theta.set_coefficient(coord(j), Rational(0));
        Rational v = theta.evaluate(at);
        bool dup = false;
        for (auto& [w, u] : secs)
          if (w == v) { dup = true; break; }
        if (!dup) secs.emplace_back(v, theta);
      }
      std::sort(secs.begin(), secs.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::vector<CellLevel> ls;
      if (secs.empty()) {
        ls.push_back(CellLevel::band(CellBound::neg_inf(),
                                     CellBound::pos_inf()));
      } else {
        ls.push_back(CellLevel::band(CellBound::neg_inf(),
                                     CellBound::of(secs.front().second)));
        for (size_t k = 0; k < secs.size(); ++k) {
          ls.push_back(CellLevel::graph(secs[k].second));
          if (k + 1 < secs.size())
            ls.push_back(CellLevel::band(CellBound::of(secs[k].second),
                                         CellBound::of(secs[k + 1].second)));
        }
        ls.push_back(CellLevel::band(CellBound::of(secs.back().second),
                                     CellBound::pos_inf()));
      }
      for (CellLevel& l : ls) {
        auto ext = prefix;
        ext.push_back(std::move(l));
        next.push_back(std::move(ext));
        if (--pools.budget < 0)
          throw ResourceLimitError("decomposition exceeded the atom budget");
      }
    }
    partial = std::move(next);
  }

  // Keep the cells inside the box; the box formula is sign-invariant on
  // every cell, so the center decides.
  std::vector<Cell> cells;
  for (auto& ls : partial) {
    Cell c(std::move(ls));
    if (box.member(c.center())) cells.push_back(std::move(c));
  }
  return CellDecomposition(n, box.formula(), std::move(cells));
}

namespace {

// forall x1..xk (prefix -> f).
FormulaPtr for_all_coords(int k, const FormulaPtr& f) {
  FormulaPtr g = f;
  for (int j = k - 1; j >= 0; --j) g = Formula::forall(coord(j), g);
  return g;
}

FormulaPtr exists_coords(int k, const FormulaPtr& f) {
  FormulaPtr g = f;
  for (int j = k - 1; j >= 0; --j) g = Formula::exists(coord(j), g);
  return g;
}

FormulaPtr prefix_formula(const Cell& c, int upto) {
  std::vector<FormulaPtr> conj;
  for (int j = 0; j < upto; ++j)
    conj.push_back(level_formula(c.levels()[j], j));
  return Formula::conjoin(conj);
}

// Partial cells of ambient j, structurally deduped, checked level by level.
// Within a group (cells sharing a base prefix) the top-level sections and
// bands must tile the fiber over the projected box; the distinct prefixes
// are then checked recursively as a decomposition one level down. Every
// decided sentence stays small, so large decompositions verify in
// polynomial time.
class Verifier {
 public:
  Verifier(const QeOptions& opts) : opts_(opts) {}

  bool verify(int j, const std::vector<std::vector<CellLevel>>& cells,
              const FormulaPtr& boxproj) {
    if (j == 0) return true;
    if (cells.empty()) return !dec(exists_coords(j, boxproj));
    // Group by the structural base prefix.
    std::map<std::string, std::vector<const std::vector<CellLevel>*>> groups;
    std::map<std::string, std::vector<CellLevel>> prefixes;
    for (const auto& c : cells) {
      std::vector<CellLevel> pre(c.begin(), c.end() - 1);
      FormulaPtr pf = levels_formula(pre);
      std::string key = format_formula(pf);
      groups[key].push_back(&c);
      prefixes.emplace(key, std::move(pre));
    }
    for (const auto& [key, members] : groups) {
      const auto& pre = prefixes[key];
      FormulaPtr pf = levels_formula(pre);
      Assignment at = prefix_center(pre);
      if (!check_group(j, pf, at, members, boxproj)) return false;
    }
    // Recurse on the distinct prefixes.
    std::vector<std::vector<CellLevel>> bases;
    for (auto& [key, pre] : prefixes) bases.push_back(std::move(pre));
    FormulaPtr down = Formula::exists(coord(j - 1), boxproj);
    return verify(j - 1, bases, down);
  }

 private:
  static FormulaPtr levels_formula(const std::vector<CellLevel>& ls) {
    std::vector<FormulaPtr> conj;
    for (size_t i = 0; i < ls.size(); ++i)
      conj.push_back(level_formula(ls[i], static_cast<int>(i)));
    return Formula::conjoin(conj);
  }

  static Assignment prefix_center(const std::vector<CellLevel>& pre) {
    Assignment at;
    if (pre.empty()) return at;
    Point p = Cell(pre).center();
    for (size_t k = 0; k < p.size(); ++k)
      at[coord(static_cast<int>(k))] = p[k];
    return at;
  }

  bool dec(const FormulaPtr& f) { return decide(f, opts_); }

  // True when the terms agree everywhere on the prefix.
  bool equal_on(const FormulaPtr& pf, int j, const AffineTerm& a,
                const AffineTerm& b) {
    if (a == b) return true;
    return !dec(exists_coords(
        j, Formula::conjunction(pf, Formula::cmp_ne(a, b))));
  }

  bool region_empty(const FormulaPtr& pf, const FormulaPtr& boxproj, int j,
                    const FormulaPtr& constraint) {
    FormulaPtr region =
        Formula::conjoin({pf, boxproj, constraint});
    return !dec(exists_coords(j, region));
  }

  bool check_group(int j, const FormulaPtr& pf, const Assignment& at,
                   const std::vector<const std::vector<CellLevel>*>& members,
                   const FormulaPtr& boxproj) {
    AffineTerm xj = AffineTerm::variable(coord(j - 1));

    // Order the fiber items by their position at the prefix center.
    struct Item {
      const CellLevel* l;
      Rational key;
    };
    std::vector<Item> items;
    for (const auto* c : members) {
      const CellLevel& l = c->back();
      Rational key;
      if (!l.is_band) {
        key = l.section.evaluate(at);
      } else {
        bool lo = l.lo.kind == CellBound::Fn;
        bool hi = l.hi.kind == CellBound::Fn;
        if (lo && hi)
          key = (l.lo.fn.evaluate(at) + l.hi.fn.evaluate(at)) / 2;
        else if (lo)
          key = l.lo.fn.evaluate(at) + 1;
        else if (hi)
          key = l.hi.fn.evaluate(at) - 1;
        else
          key = 0;
      }
      items.push_back({&l, std::move(key)});
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.key < b.key; });

    // Pairwise disjoint within the group.
    for (size_t a = 0; a < items.size(); ++a)
      for (size_t b = a + 1; b < items.size(); ++b) {
        FormulaPtr both = Formula::conjoin(
            {pf, level_formula(*items[a].l, j - 1),
             level_formula(*items[b].l, j - 1)});
        if (dec(exists_coords(j, both))) return false;
      }

    // Sweep upward, proving every skipped stretch misses the box.
    bool at_start = true;       // nothing to the left of the cursor yet
    bool done = false;          // covered through +inf
    AffineTerm cur;             // last reached bound
    bool point_covered = true;  // the cursor value itself is covered
    auto gap_to = [&](const AffineTerm& next) {
      std::vector<FormulaPtr> conj;
      if (!at_start)
        conj.push_back(point_covered ? Formula::cmp_lt(cur, xj)
                                     : Formula::cmp_le(cur, xj));
      conj.push_back(Formula::cmp_lt(xj, next));
      return region_empty(pf, boxproj, j, Formula::conjoin(conj));
    };
    for (const Item& it : items) {
      if (done) continue;  // overlap beyond +inf is caught above
      const CellLevel& l = *it.l;
      if (!l.is_band) {
        if (!at_start && equal_on(pf, j - 1, cur, l.section)) {
          point_covered = true;
          continue;
        }
        if (!gap_to(l.section)) return false;
        cur = l.section;
        at_start = false;
        point_covered = true;
        continue;
      }
      if (l.lo.kind == CellBound::Fn) {
        if (at_start || !equal_on(pf, j - 1, cur, l.lo.fn)) {
          if (!gap_to(l.lo.fn)) return false;
          cur = l.lo.fn;
          at_start = false;
          point_covered = false;
        }
        if (!point_covered &&
            !region_empty(pf, boxproj, j, Formula::cmp_eq(xj, cur)))
          return false;
      }
      // The band covers everything up to its top bound.
      if (l.hi.kind == CellBound::Fn) {
        cur = l.hi.fn;
        at_start = false;
        point_covered = false;
      } else {
        done = true;
      }
    }
    if (done) return true;
    std::vector<FormulaPtr> tail;
    if (!at_start)
      tail.push_back(point_covered ? Formula::cmp_lt(cur, xj)
                                   : Formula::cmp_le(cur, xj));
    else
      tail.push_back(Formula::truth(true));
    return region_empty(pf, boxproj, j, Formula::conjoin(tail));
  }

  QeOptions opts_;
};

}  // namespace

bool verify_decomposition(const CellDecomposition& d,
                          const std::vector<SemilinearSet>& family,
                          const QeOptions& opts) {
  int n = d.ambient();
  const auto& cells = d.cells();

  // Band bounds ordered over the base.
  for (const Cell& c : cells) {
    for (int j = 0; j < n; ++j) {
      const CellLevel& l = c.levels()[j];
      if (!l.is_band || l.lo.kind != CellBound::Fn ||
          l.hi.kind != CellBound::Fn)
        continue;
      FormulaPtr claim = for_all_coords(
          j, Formula::implication(prefix_formula(c, j),
                                  Formula::cmp_lt(l.lo.fn, l.hi.fn)));
      if (!decide(claim, opts)) return false;
    }
  }

  // Cells inside the box.
  for (const Cell& c : cells) {
    if (decide(exists_coords(
            n, Formula::conjunction(c.formula(),
                                    Formula::negation(d.box()))),
               opts))
      return false;
  }

  // Disjointness and coverage, level by level.
  std::vector<std::vector<CellLevel>> as_levels;
  for (const Cell& c : cells) as_levels.push_back(c.levels());
  Verifier v(opts);
  if (!v.verify(n, as_levels, d.box())) return false;

  // Every family set is a union of cells.
  for (const SemilinearSet& s : family) {
    for (const Cell& c : cells) {
      bool meets = decide(
          exists_coords(n, Formula::conjunction(c.formula(), s.formula())),
          opts);
      bool escapes = decide(
          exists_coords(n, Formula::conjunction(
                               c.formula(), Formula::negation(s.formula()))),
          opts);
      if (meets && escapes) return false;
    }
  }
  return true;
}

MonotonePartition monotone_fiber_partition(const SemilinearSet& graph,
                                           const SemilinearSet& domain,
                                           const QeOptions& opts) {
  if (graph.ambient() != 3 || domain.ambient() != 2)
    throw DomainError("expected a planar domain and a graph in M^3");

  const std::string x1 = coord(0), x2 = coord(1), x3 = coord(2);
  FormulaPtr g = graph.formula();

  // Totality and single-valuedness over the domain.
  FormulaPtr total = Formula::forall(
      x1, Formula::forall(
              x2, Formula::implication(domain.formula(),
                                       Formula::exists(x3, g))));
  FormulaPtr gu = rename_free(g, {{x3, "__u"}});
  FormulaPtr gv = rename_free(g, {{x3, "__v"}});
  FormulaPtr single = Formula::forall(
      x1,
      Formula::forall(
          x2,
          Formula::forall(
              "__u",
              Formula::forall(
                  "__v",
                  Formula::implication(
                      Formula::conjunction(gu, gv),
                      Formula::cmp_eq(AffineTerm::variable("__u"),
                                      AffineTerm::variable("__v")))))));
  if (!decide(total, opts) || !decide(single, opts))
    throw DomainError("not the graph of a total function on the domain");

  // Horizontal split keeps vertical lines out of any one cell.
  SemilinearSet split(3, Formula::cmp_lt(AffineTerm::variable(x2),
                                         AffineTerm{}));
  SemilinearSet dom_cyl(3, domain.formula());
  CellDecomposition d3 =
      decompose(SemilinearSet::whole_space(3), {graph, dom_cyl, split}, opts);

  std::vector<Cell> out;
  std::vector<FiberTag> tags;
  std::set<std::string> seen;
  for (const Cell& c : d3.cells()) {
    const CellLevel& top = c.levels()[2];
    if (top.is_band) continue;
    Point p = c.center();
    if (!graph.member(p)) continue;
    if (!domain.member({p[0], p[1]})) continue;
    Cell base = c.base();
    if (!seen.insert(format_formula(base.formula())).second) continue;
    Rational slope = top.section.coefficient(x2);
    // A point fiber (section base) is constant no matter the formal slope.
    bool point_fiber = !base.levels()[1].is_band;
    FiberTag t = point_fiber || slope == 0 ? FiberTag::Constant
                 : slope > 0 ? FiberTag::Increasing
                             : FiberTag::Decreasing;
    out.push_back(std::move(base));
    tags.push_back(t);
  }
  return {CellDecomposition(2, domain.formula(), std::move(out)),
          std::move(tags)};
}

std::vector<RoofTag> classify_roofs(const CellDecomposition& d) {
  if (d.ambient() != 2) throw DomainError("roofs live in M^2");
  std::vector<RoofTag> tags;
  for (const Cell& c : d.cells()) {
    const CellLevel& top = c.levels()[1];
    bool upward =
        top.is_band && top.hi.kind == CellBound::PosInf &&
        top.lo.kind == CellBound::Fn;
    if (!upward) {
      tags.push_back(RoofTag::NotRoof);
    } else if (c.levels()[0].is_band) {
      tags.push_back(RoofTag::OpenRoof);
    } else {
      tags.push_back(RoofTag::NonOpenRoof);
    }
  }
  return tags;
}

}  // namespace tame
