#pragma once

// Seeded random generators for formulas, terms, and points shared by the
// property suites. All deterministic given the engine state.

#include <random>
#include <string>
#include <vector>

#include "tame/formula.hpp"
#include "tame/rational.hpp"

namespace testgen {

using tame::AffineTerm;
using tame::Assignment;
using tame::Formula;
using tame::FormulaPtr;
using tame::Rational;

inline int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rational random_rational(std::mt19937& rng, int max_num = 6,
                                int max_den = 4) {
  int num = pick(rng, -max_num, max_num);
  int den = pick(rng, 1, max_den);
  return Rational(num, den);
}

inline std::vector<std::string> var_pool(int nvars) {
  static const char* names[] = {"x", "y", "z", "w", "v"};
  std::vector<std::string> out;
  for (int i = 0; i < nvars && i < 5; ++i) out.push_back(names[i]);
  return out;
}

inline AffineTerm random_term(std::mt19937& rng, int nvars) {
  AffineTerm t;
  auto vars = var_pool(nvars);
  for (const auto& v : vars)
    if (pick(rng, 0, 2) != 0) t.set_coefficient(v, random_rational(rng));
  t.set_constant(random_rational(rng));
  return t;
}

inline Assignment random_point(std::mt19937& rng,
                               const std::vector<std::string>& vars,
                               int max_num = 20, int max_den = 6) {
  Assignment p;
  for (const auto& v : vars) p[v] = random_rational(rng, max_num, max_den);
  return p;
}

inline FormulaPtr random_atom(std::mt19937& rng, int nvars) {
  AffineTerm t = random_term(rng, nvars);
  return Formula::atom(t, pick(rng, 0, 3) == 0 ? tame::Rel::Eq : tame::Rel::Lt);
}

inline FormulaPtr random_qf_formula(std::mt19937& rng, int nvars,
                                    int depth = 3) {
  if (depth == 0 || pick(rng, 0, 2) == 0) return random_atom(rng, nvars);
  switch (pick(rng, 0, 3)) {
    case 0:
      return Formula::negation(random_qf_formula(rng, nvars, depth - 1));
    case 1:
      return Formula::conjunction(random_qf_formula(rng, nvars, depth - 1),
                                  random_qf_formula(rng, nvars, depth - 1));
    case 2:
      return Formula::disjunction(random_qf_formula(rng, nvars, depth - 1),
                                  random_qf_formula(rng, nvars, depth - 1));
    default:
      return Formula::implication(random_qf_formula(rng, nvars, depth - 1),
                                  random_qf_formula(rng, nvars, depth - 1));
  }
}

// Formula that may carry up to max_q quantifiers over fresh variables
// u0, u1, ... so the free variables stay within the x,y,z pool.
inline FormulaPtr random_formula(std::mt19937& rng, int nvars, int max_q) {
  FormulaPtr f = random_qf_formula(rng, nvars);
  int quantifiers = pick(rng, 0, max_q);
  for (int i = 0; i < quantifiers; ++i) {
    std::string u = "u" + std::to_string(i);
    // Inject the bound variable so the quantifier is not vacuous.
    AffineTerm t = random_term(rng, nvars);
    t.set_coefficient(u, Rational(pick(rng, 0, 1) ? 1 : -1));
    FormulaPtr atom = Formula::atom(t, tame::Rel::Lt);
    f = pick(rng, 0, 1) ? Formula::conjunction(f, atom)
                        : Formula::disjunction(f, atom);
    f = pick(rng, 0, 1) ? Formula::exists(u, f) : Formula::forall(u, f);
  }
  return f;
}

// Quantified formula whose free variables form a prefix of the pool;
// used by the soundness suite (<= max_q quantifiers, <= max_atoms atoms).
inline FormulaPtr random_quantified(std::mt19937& rng, int free_vars,
                                    int max_q) {
  return random_formula(rng, free_vars, max_q);
}

}  // namespace testgen
