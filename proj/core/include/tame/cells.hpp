#pragma once

#include <string>
#include <vector>

#include "tame/formula.hpp"
#include "tame/qe.hpp"
#include "tame/set.hpp"

namespace tame {

// Bound of a band level: an affine function of the base coordinates or one
// of the infinities.
struct CellBound {
  enum Kind { NegInf, Fn, PosInf };
  Kind kind = NegInf;
  AffineTerm fn;

  static CellBound neg_inf() { return {NegInf, {}}; }
  static CellBound pos_inf() { return {PosInf, {}}; }
  static CellBound of(AffineTerm t) { return {Fn, std::move(t)}; }
};

// One coordinate level of a cell. A section pins the coordinate to an
// affine function of the previous coordinates; a band leaves it ranging
// strictly between two bounds.
struct CellLevel {
  bool is_band = false;
  AffineTerm section;    // when !is_band
  CellBound lo, hi;      // when is_band

  static CellLevel graph(AffineTerm t) {
    CellLevel l;
    l.section = std::move(t);
    return l;
  }
  static CellLevel band(CellBound lo, CellBound hi) {
    CellLevel l;
    l.is_band = true;
    l.lo = std::move(lo);
    l.hi = std::move(hi);
    return l;
  }
};

// Cylindrical cell over the canonical coordinates x1..xn. Level j only
// mentions coordinates x1..x_{j-1} in its bounding functions; the prefix
// of the first j levels is itself a cell in M^j.
class Cell {
 public:
  explicit Cell(std::vector<CellLevel> levels);

  int ambient() const { return static_cast<int>(levels_.size()); }
  const std::vector<CellLevel>& levels() const { return levels_; }
  std::vector<int> signature() const;
  int dimension() const;  // number of band levels

  FormulaPtr formula() const;
  bool contains(const Point& p) const;

  // Canonical interior sample: sections evaluated exactly, bands at the
  // midpoint (or one unit inside an unbounded end).
  Point center() const;

  // Cell in M^{n-1} made of the first n-1 levels; ambient() must exceed 1.
  Cell base() const;

  std::string str() const;

 private:
  std::vector<CellLevel> levels_;
};

class CellDecomposition {
 public:
  CellDecomposition(int ambient, FormulaPtr box, std::vector<Cell> cells);

  int ambient() const { return ambient_; }
  const FormulaPtr& box() const { return box_; }
  const std::vector<Cell>& cells() const { return cells_; }

  // Index of the unique cell containing p; -1 when p is outside the box.
  int locate(const Point& p) const;

  std::string to_json() const;

 private:
  int ambient_;
  FormulaPtr box_;
  std::vector<Cell> cells_;
};

// Cylindrical decomposition of the box partitioning every set of the
// family. The box must be given by a quantifier-free-expressible formula
// over x1..xn (the whole space is fine).
CellDecomposition decompose(const SemilinearSet& box,
                            const std::vector<SemilinearSet>& family,
                            const QeOptions& opts = {});

// Checks the decomposition clauses by decided sentences: cells disjoint,
// union equals the box, band bounds ordered, base prefixes compatible,
// every family set a union of cells.
bool verify_decomposition(const CellDecomposition& d,
                          const std::vector<SemilinearSet>& family,
                          const QeOptions& opts = {});

enum class FiberTag { Increasing, Decreasing, Constant };

struct MonotonePartition {
  CellDecomposition domain_cells;
  std::vector<FiberTag> tags;  // one per cell
};

// Partition of the planar domain of a total function F(x1,x2) so that on
// each cell every fiber x1 = c is strictly monotone or constant in x2, and
// no cell contains a whole vertical line. graph is the subset
// {(x1,x2,x3) : x3 = F(x1,x2)} of M^3; domain its projection.
MonotonePartition monotone_fiber_partition(const SemilinearSet& graph,
                                           const SemilinearSet& domain,
                                           const QeOptions& opts = {});

enum class RoofTag { OpenRoof, NonOpenRoof, NotRoof };

// Tags for cells of a decomposition of a vertical strip in M^2: upward
// unbounded bands over an interval are open roofs, upward unbounded rays
// over a point are non-open roofs.
std::vector<RoofTag> classify_roofs(const CellDecomposition& d);

}  // namespace tame
