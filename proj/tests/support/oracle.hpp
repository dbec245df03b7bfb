#pragma once

// Independent evaluator for quantified formulas, used to cross-check the
// elimination kernel. Quantifiers are resolved by sampling: the candidate
// points come from a linear projection of the atom set (drop atoms with the
// variable, pair up the rest), which overapproximates every truth
// breakpoint, so testing breakpoints, midpoints and the two outer samples
// decides exists/forall exactly. This shares no code path with
// tame::eliminate.

#include <algorithm>
#include <map>
#include <vector>

#include "tame/formula.hpp"

namespace oracle {

using tame::AffineTerm;
using tame::Assignment;
using tame::Formula;
using tame::FormulaPtr;
using tame::Rational;

class Evaluator {
 public:
  bool eval(const FormulaPtr& f, const Assignment& point) {
    switch (f->kind()) {
      case Formula::Kind::True:
        return true;
      case Formula::Kind::False:
        return false;
      case Formula::Kind::Atom: {
        Rational v = f->term().evaluate(point);
        return f->rel() == tame::Rel::Lt ? v < 0 : v == 0;
      }
      case Formula::Kind::Not:
        return !eval(f->lhs(), point);
      case Formula::Kind::And:
        return eval(f->lhs(), point) && eval(f->rhs(), point);
      case Formula::Kind::Or:
        return eval(f->lhs(), point) || eval(f->rhs(), point);
      case Formula::Kind::Implies:
        return !eval(f->lhs(), point) || eval(f->rhs(), point);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        bool is_exists = f->kind() == Formula::Kind::Exists;
        const std::string& v = f->var();
        std::vector<Rational> roots;
        for (const AffineTerm& t : projected_atoms(f->body())) {
          Rational a = t.coefficient(v);
          if (a == 0) continue;
          AffineTerm rest = t;
          rest.set_coefficient(v, Rational(0));
          Rational r = rest.evaluate(shadowed(point, t, v));
          roots.push_back(-r / a);
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        std::vector<Rational> samples;
        if (roots.empty()) {
          samples.push_back(0);
        } else {
          samples.push_back(roots.front() - 1);
          for (size_t i = 0; i < roots.size(); ++i) {
            samples.push_back(roots[i]);
            if (i + 1 < roots.size())
              samples.push_back((roots[i] + roots[i + 1]) / 2);
          }
          samples.push_back(roots.back() + 1);
        }
        Assignment sub = point;
        for (const Rational& s : samples) {
          sub[v] = s;
          bool holds = eval(f->body(), sub);
          if (is_exists && holds) return true;
          if (!is_exists && !holds) return false;
        }
        return !is_exists;
      }
    }
    return false;
  }

 private:
  // Evaluating a projected atom only needs the outer assignment; any other
  // name in it must already be assigned, so this is just the point.
  static const Assignment& shadowed(const Assignment& point, const AffineTerm&,
                                    const std::string&) {
    return point;
  }

  // Atom terms of f with every quantified variable projected out by the
  // pairing rule; the result mentions only free variables of f (and, one
  // level up, the variable being sampled).
  const std::vector<AffineTerm>& projected_atoms(const FormulaPtr& f) {
    auto it = cache_.find(f.get());
    if (it != cache_.end()) return it->second;
    std::vector<AffineTerm> out;
    collect(f, out);
    dedupe(out);
    return cache_.emplace(f.get(), std::move(out)).first->second;
  }

  void collect(const FormulaPtr& f, std::vector<AffineTerm>& out) {
    switch (f->kind()) {
      case Formula::Kind::True:
      case Formula::Kind::False:
        return;
      case Formula::Kind::Atom:
        out.push_back(f->term());
        return;
      case Formula::Kind::Not:
        collect(f->lhs(), out);
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
        collect(f->lhs(), out);
        collect(f->rhs(), out);
        return;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        std::vector<AffineTerm> inner = projected_atoms(f->body());
        project(inner, f->var());
        out.insert(out.end(), inner.begin(), inner.end());
        return;
      }
    }
  }

  static void project(std::vector<AffineTerm>& atoms, const std::string& v) {
    std::vector<AffineTerm> with, without;
    for (auto& t : atoms) {
      if (t.coefficient(v) == 0)
        without.push_back(t);
      else
        with.push_back(t);
    }
    for (size_t i = 0; i < with.size(); ++i) {
      for (size_t j = i + 1; j < with.size(); ++j) {
        Rational a = with[i].coefficient(v);
        Rational b = with[j].coefficient(v);
        AffineTerm combo = with[i].scaled(b) - with[j].scaled(a);
        if (!combo.is_constant()) without.push_back(combo);
      }
    }
    atoms = std::move(without);
    dedupe(atoms);
  }

  static void dedupe(std::vector<AffineTerm>& atoms) {
    for (auto& t : atoms) {
      if (t.coefficients().empty()) continue;
      Rational k = t.coefficients().begin()->second;
      t = t.scaled(1 / k);
    }
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  }

  std::map<const Formula*, std::vector<AffineTerm>> cache_;
};

inline bool eval(const FormulaPtr& f, const Assignment& point) {
  Evaluator ev;
  return ev.eval(f, point);
}

}  // namespace oracle
