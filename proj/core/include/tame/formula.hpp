#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tame/term.hpp"

namespace tame {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Atoms are normalized to t < 0 and t = 0; every other comparison is sugar
// resolved by the parser or the builder helpers below.
enum class Rel { Lt, Eq };

// Immutable first-order formula over affine atoms.
class Formula {
 public:
  enum class Kind { True, False, Atom, Not, And, Or, Implies, Exists, Forall };

  Kind kind() const { return kind_; }
  const AffineTerm& term() const { return term_; }
  Rel rel() const { return rel_; }
  const FormulaPtr& lhs() const { return lhs_; }
  const FormulaPtr& rhs() const { return rhs_; }
  const FormulaPtr& body() const { return lhs_; }
  const std::string& var() const { return var_; }

  bool is_quantifier_free() const;
  bool is_sentence() const { return free_variables().empty(); }
  std::set<std::string> free_variables() const;

  static FormulaPtr truth(bool b);
  static FormulaPtr atom(AffineTerm t, Rel r);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr implication(FormulaPtr a, FormulaPtr b);
  static FormulaPtr exists(std::string v, FormulaPtr body);
  static FormulaPtr forall(std::string v, FormulaPtr body);

  static FormulaPtr conjoin(const std::vector<FormulaPtr>& fs);
  static FormulaPtr disjoin(const std::vector<FormulaPtr>& fs);

  // Comparison sugar between two terms.
  static FormulaPtr cmp_lt(const AffineTerm& a, const AffineTerm& b);
  static FormulaPtr cmp_le(const AffineTerm& a, const AffineTerm& b);
  static FormulaPtr cmp_eq(const AffineTerm& a, const AffineTerm& b);
  static FormulaPtr cmp_ne(const AffineTerm& a, const AffineTerm& b);

 private:
  Formula() = default;
  static std::shared_ptr<Formula> make_node();

  Kind kind_ = Kind::True;
  AffineTerm term_;
  Rel rel_ = Rel::Lt;
  FormulaPtr lhs_;
  FormulaPtr rhs_;
  std::string var_;
};

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

// Canonical printing; format_formula(parse_formula(s)) round-trips.
std::string format_formula(const FormulaPtr& f);

// Truth of a quantifier-free formula at an exact rational point.
// Throws DomainError on a quantifier, std::invalid_argument on a free
// variable missing from the assignment.
bool evaluate(const FormulaPtr& f, const Assignment& point);

// Capture-avoiding substitution of an affine term for a free variable.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var,
                      const AffineTerm& t);

// Renames bound variables so no variable is bound twice on a root-to-leaf
// path and no bound name collides with a free name.
FormulaPtr normalize_bound_variables(const FormulaPtr& f);

// Renames free variables according to the map (capture-avoiding).
FormulaPtr rename_free(const FormulaPtr& f,
                       const std::map<std::string, std::string>& renaming);

// Collects every atom in the formula, including under quantifiers.
void collect_atoms(const FormulaPtr& f,
                   std::vector<std::pair<AffineTerm, Rel>>& out);

// |a - b| < r and |a - b| <= r expanded coordinate-wise (max-norm), where
// a, b are coordinate term vectors and r a term.
FormulaPtr max_norm_lt(const std::vector<AffineTerm>& a,
                       const std::vector<AffineTerm>& b, const AffineTerm& r);
FormulaPtr max_norm_eq(const std::vector<AffineTerm>& a,
                       const std::vector<AffineTerm>& b, const AffineTerm& r);

}  // namespace tame
