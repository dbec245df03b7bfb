#include "tame/qe.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "tame/errors.hpp"

namespace tame {

namespace {

enum class LKind { Lt, Le, Eq, Ne };

struct Literal {
  AffineTerm term;
  LKind kind;
};

struct Budget {
  long used = 0;  // atoms materialized into output formulas
  long work = 0;  // raw constraint operations, including discarded ones
  long limit;
  void charge(long n = 1) {
    used += n;
    check_live(used);
  }
  // Bounds the number of constraints materialized at one time; pruned
  // constraints stop counting once they are dropped.
  void check_live(long n) const {
    if (n > limit)
      throw ResourceLimitError("atom budget exceeded during elimination (" +
                               std::to_string(limit) + ")");
  }
  // Transient work is allowed a wide margin over the materialization
  // budget so pruning-heavy runs can converge, but still terminates.
  long work_margin = 256;
  void charge_work(long n = 1) {
    work += n;
    if (work / work_margin > limit)
      throw ResourceLimitError("atom budget exceeded during elimination (" +
                               std::to_string(limit) + ")");
  }
};

struct Bound {
  Rational v;
  bool strict;
};

// Homogeneous part with the leading coefficient normalized to 1.
using Hom = std::map<std::string, Rational>;

// Lexicographic order on homogeneous parts using the cheap comparison.
struct HomLess {
  bool operator()(const Hom& a, const Hom& b) const {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first;
      int c = rational_cmp(ia->second, ib->second);
      if (c != 0) return c < 0;
    }
    return ib != b.end();
  }
};

// All constraints sharing one homogeneous part, kept in tightest form.
struct BoundSet {
  std::optional<Bound> lo, hi;
  std::optional<Rational> eq;
  std::vector<Rational> ne;

  bool operator==(const BoundSet& o) const {
    auto beq = [](const std::optional<Bound>& a, const std::optional<Bound>& b) {
      if (a.has_value() != b.has_value()) return false;
      return !a || (a->v == b->v && a->strict == b->strict);
    };
    return beq(lo, o.lo) && beq(hi, o.hi) && eq == o.eq && ne == o.ne;
  }
};

class Conjunct {
 public:
  bool infeasible() const { return infeasible_; }
  bool trivial() const { return !infeasible_ && rows_.empty(); }

  // Adds term REL 0. Returns false once the conjunct is known empty.
  bool add(const AffineTerm& t, LKind k, Budget& budget) {
    if (infeasible_) return false;
    budget.charge_work();
    if (t.is_constant()) {
      const Rational& c = t.constant_part();
      bool truth = false;
      switch (k) {
        case LKind::Lt: truth = c < 0; break;
        case LKind::Le: truth = c <= 0; break;
        case LKind::Eq: truth = c == 0; break;
        case LKind::Ne: truth = c != 0; break;
      }
      if (!truth) infeasible_ = true;
      return !infeasible_;
    }
    const auto& first = *t.coefficients().begin();
    Rational k0 = first.second;
    Hom hom;
    for (const auto& [v, c] : t.coefficients()) hom[v] = c / k0;
    Rational rhs = -t.constant_part() / k0;
    BoundSet& bs = rows_[hom];
    switch (k) {
      case LKind::Lt:
      case LKind::Le: {
        bool strict = (k == LKind::Lt);
        if (k0 > 0)
          set_upper(bs, rhs, strict);
        else
          set_lower(bs, rhs, strict);
        break;
      }
      case LKind::Eq:
        if (bs.eq && *bs.eq != rhs)
          infeasible_ = true;
        else
          bs.eq = rhs;
        break;
      case LKind::Ne:
        if (std::find(bs.ne.begin(), bs.ne.end(), rhs) == bs.ne.end())
          bs.ne.push_back(rhs);
        std::sort(bs.ne.begin(), bs.ne.end());
        break;
    }
    if (!infeasible_) settle(bs);
    return !infeasible_;
  }

  // Merges another conjunct's rows directly; both sides are normalized.
  bool add_all(const Conjunct& o, Budget& budget) {
    if (infeasible_) return false;
    if (o.infeasible_) {
      infeasible_ = true;
      return false;
    }
    for (const auto& [hom, obs] : o.rows_) {
      budget.charge_work();
      BoundSet& bs = rows_[hom];
      if (obs.eq) {
        if (bs.eq && *bs.eq != *obs.eq) {
          infeasible_ = true;
          return false;
        }
        bs.eq = obs.eq;
      }
      if (obs.lo) set_lower(bs, obs.lo->v, obs.lo->strict);
      if (obs.hi) set_upper(bs, obs.hi->v, obs.hi->strict);
      bool ne_added = false;
      for (const Rational& n : obs.ne) {
        if (std::find(bs.ne.begin(), bs.ne.end(), n) == bs.ne.end()) {
          bs.ne.push_back(n);
          ne_added = true;
        }
      }
      if (ne_added) std::sort(bs.ne.begin(), bs.ne.end());
      settle(bs);
      if (infeasible_) return false;
    }
    return true;
  }

  std::vector<Literal> literals() const {
    std::vector<Literal> out;
    for (const auto& [hom, bs] : rows_) {
      AffineTerm h;
      for (const auto& [v, c] : hom) h.set_coefficient(v, c);
      if (bs.eq) {
        out.push_back({h - AffineTerm::constant(*bs.eq), LKind::Eq});
        continue;
      }
      if (bs.lo)
        out.push_back({AffineTerm::constant(bs.lo->v) - h,
                       bs.lo->strict ? LKind::Lt : LKind::Le});
      if (bs.hi)
        out.push_back({h - AffineTerm::constant(bs.hi->v),
                       bs.hi->strict ? LKind::Lt : LKind::Le});
      for (const auto& n : bs.ne)
        out.push_back({h - AffineTerm::constant(n), LKind::Ne});
    }
    return out;
  }

  long row_count() const { return static_cast<long>(rows_.size()); }

  const std::map<Hom, BoundSet, HomLess>& rows() const { return rows_; }
  std::map<Hom, BoundSet, HomLess>& mutable_rows() { return rows_; }

  // Serialized rows with one hom left out entirely; conjuncts sharing a
  // key differ at most in that hom's constraints.
  std::string merge_key(const Hom& skip) const {
    std::string out;
    for (const auto& [hom, bs] : rows_) {
      for (const auto& [v, c] : hom) out += v + ":" + to_string(c) + ",";
      out += ";";
      if (&hom == &skip) {
        out += "@|";
        continue;
      }
      if (bs.eq) out += "=" + to_string(*bs.eq);
      if (bs.lo) out += (bs.lo->strict ? "(" : "[") + to_string(bs.lo->v);
      if (bs.hi) out += to_string(bs.hi->v) + (bs.hi->strict ? ")" : "]");
      for (const Rational& n : bs.ne) out += "!" + to_string(n);
      out += "|";
    }
    return out;
  }

  bool operator==(const Conjunct& o) const {
    return infeasible_ == o.infeasible_ && rows_ == o.rows_;
  }

  // True when every point satisfying this conjunct satisfies o. Decided
  // row-by-row, so it is sound but not complete across rows.
  bool implies(const Conjunct& o) const {
    if (infeasible_) return true;
    if (o.infeasible_) return false;
    for (const auto& [hom, os] : o.rows_) {
      auto it = rows_.find(hom);
      if (it == rows_.end()) return false;
      const BoundSet& ms = it->second;
      if (os.eq) {
        if (!(ms.eq && *ms.eq == *os.eq)) return false;
        continue;
      }
      if (os.lo) {
        if (ms.eq) {
          if (rational_lt(*ms.eq, os.lo->v) || (*ms.eq == os.lo->v && os.lo->strict))
            return false;
        } else if (!ms.lo || rational_lt(ms.lo->v, os.lo->v) ||
                   (ms.lo->v == os.lo->v && os.lo->strict &&
                    !ms.lo->strict)) {
          return false;
        }
      }
      if (os.hi) {
        if (ms.eq) {
          if (rational_lt(os.hi->v, *ms.eq) || (*ms.eq == os.hi->v && os.hi->strict))
            return false;
        } else if (!ms.hi || rational_lt(os.hi->v, ms.hi->v) ||
                   (ms.hi->v == os.hi->v && os.hi->strict &&
                    !ms.hi->strict)) {
          return false;
        }
      }
      for (const Rational& n : os.ne) {
        bool excluded = false;
        if (ms.eq) {
          excluded = *ms.eq != n;
        } else {
          if (ms.lo && (rational_lt(n, ms.lo->v) || (n == ms.lo->v && ms.lo->strict)))
            excluded = true;
          if (ms.hi && (rational_lt(ms.hi->v, n) || (n == ms.hi->v && ms.hi->strict)))
            excluded = true;
          if (std::find(ms.ne.begin(), ms.ne.end(), n) != ms.ne.end())
            excluded = true;
        }
        if (!excluded) return false;
      }
    }
    return true;
  }

 private:
  void set_upper(BoundSet& bs, const Rational& v, bool strict) {
    if (!bs.hi || rational_lt(v, bs.hi->v) || (v == bs.hi->v && strict))
      bs.hi = Bound{v, strict};
  }
  void set_lower(BoundSet& bs, const Rational& v, bool strict) {
    if (!bs.lo || rational_lt(bs.lo->v, v) || (v == bs.lo->v && strict))
      bs.lo = Bound{v, strict};
  }

  void settle(BoundSet& bs) {
    for (int pass = 0; pass < 3 && !infeasible_; ++pass) {
      if (bs.eq) {
        const Rational& e = *bs.eq;
        if (bs.lo && (rational_lt(e, bs.lo->v) || (e == bs.lo->v && bs.lo->strict)))
          infeasible_ = true;
        if (bs.hi && (rational_lt(bs.hi->v, e) || (e == bs.hi->v && bs.hi->strict)))
          infeasible_ = true;
        for (const auto& n : bs.ne)
          if (n == e) infeasible_ = true;
        bs.lo.reset();
        bs.hi.reset();
        bs.ne.clear();
        return;
      }
      if (bs.lo && bs.hi) {
        if (rational_lt(bs.hi->v, bs.lo->v) ||
            (bs.hi->v == bs.lo->v && (bs.lo->strict || bs.hi->strict))) {
          infeasible_ = true;
          return;
        }
        if (bs.hi->v == bs.lo->v) {
          bs.eq = bs.lo->v;
          continue;  // re-run the eq checks
        }
      }
      // Disequalities at a non-strict endpoint sharpen it; ones outside
      // the feasible band are vacuous.
      bool changed = false;
      std::vector<Rational> kept;
      for (const auto& n : bs.ne) {
        if (bs.lo) {
          if (rational_lt(n, bs.lo->v) || (n == bs.lo->v && bs.lo->strict)) continue;
          if (n == bs.lo->v) {
            bs.lo->strict = true;
            changed = true;
            continue;
          }
        }
        if (bs.hi) {
          if (rational_lt(bs.hi->v, n) || (n == bs.hi->v && bs.hi->strict)) continue;
          if (n == bs.hi->v) {
            bs.hi->strict = true;
            changed = true;
            continue;
          }
        }
        kept.push_back(n);
      }
      bs.ne = std::move(kept);
      if (!changed) return;
    }
  }

  std::map<Hom, BoundSet, HomLess> rows_;
  bool infeasible_ = false;
};

// Disjunction of conjuncts; empty vector means false.
using Dnf = std::vector<Conjunct>;

Dnf dnf_true() { return {Conjunct{}}; }

bool dnf_is_true(const Dnf& d) {
  return std::any_of(d.begin(), d.end(),
                     [](const Conjunct& c) { return c.trivial(); });
}

void push_conjunct(Dnf& d, Conjunct c, Budget& budget) {
  if (c.infeasible()) return;
  for (const auto& existing : d) {
    budget.charge_work();
    if (c.implies(existing)) return;
  }
  std::erase_if(d, [&](const Conjunct& e) { return e.implies(c); });
  d.push_back(std::move(c));
  long live = 0;
  for (const Conjunct& e : d) live += std::max<long>(1, e.row_count());
  budget.check_live(live);
}

Dnf dnf_or(Dnf a, const Dnf& b, Budget& budget) {
  for (const auto& c : b) push_conjunct(a, c, budget);
  if (dnf_is_true(a)) return dnf_true();
  return a;
}

Dnf dnf_and(const Dnf& a, const Dnf& b, Budget& budget) {
  Dnf out;
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      Conjunct merged = ca;
      if (merged.add_all(cb, budget)) push_conjunct(out, std::move(merged), budget);
    }
  }
  return out;
}

Dnf literal_dnf(const AffineTerm& t, LKind k, Budget& budget) {
  Conjunct c;
  if (!c.add(t, k, budget)) return {};
  budget.check_live(c.row_count());
  return {std::move(c)};
}

// Negation-normal DNF of a quantifier-free formula.
Dnf to_dnf(const FormulaPtr& f, bool positive, Budget& budget) {
  switch (f->kind()) {
    case Formula::Kind::True:
      return positive ? dnf_true() : Dnf{};
    case Formula::Kind::False:
      return positive ? Dnf{} : dnf_true();
    case Formula::Kind::Atom:
      if (f->rel() == Rel::Lt)
        return positive ? literal_dnf(f->term(), LKind::Lt, budget)
                        : literal_dnf(-f->term(), LKind::Le, budget);
      return positive ? literal_dnf(f->term(), LKind::Eq, budget)
                      : literal_dnf(f->term(), LKind::Ne, budget);
    case Formula::Kind::Not:
      return to_dnf(f->lhs(), !positive, budget);
    case Formula::Kind::And:
      return positive ? dnf_and(to_dnf(f->lhs(), true, budget),
                                to_dnf(f->rhs(), true, budget), budget)
                      : dnf_or(to_dnf(f->lhs(), false, budget),
                               to_dnf(f->rhs(), false, budget), budget);
    case Formula::Kind::Or:
      return positive ? dnf_or(to_dnf(f->lhs(), true, budget),
                               to_dnf(f->rhs(), true, budget), budget)
                      : dnf_and(to_dnf(f->lhs(), false, budget),
                                to_dnf(f->rhs(), false, budget), budget);
    case Formula::Kind::Implies:
      return positive ? dnf_or(to_dnf(f->lhs(), false, budget),
                               to_dnf(f->rhs(), true, budget), budget)
                      : dnf_and(to_dnf(f->lhs(), true, budget),
                                to_dnf(f->rhs(), false, budget), budget);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      throw DomainError("to_dnf expects a quantifier-free formula");
  }
  throw DomainError("corrupt formula node");
}

// One conjunct with the given variable eliminated; may split on
// disequalities, hence returns a disjunction.
void eliminate_from_conjunct(const Conjunct& c, const std::string& var,
                             Budget& budget, Dnf& out) {
  std::vector<Literal> lits = c.literals();

  // An equality solves the variable outright.
  for (const auto& lit : lits) {
    if (lit.kind != LKind::Eq) continue;
    Rational a = lit.term.coefficient(var);
    if (a == 0) continue;
    AffineTerm rest = lit.term;
    rest.set_coefficient(var, Rational(0));
    AffineTerm solution = rest.scaled(Rational(-1) / a);
    Conjunct reduced;
    bool ok = true;
    for (const auto& other : lits) {
      if (&other == &lit) continue;
      if (!reduced.add(other.term.substituted(var, solution), other.kind,
                       budget)) {
        ok = false;
        break;
      }
    }
    if (ok) push_conjunct(out, std::move(reduced), budget);
    return;
  }

  // Disequalities split into the two strict sides over a dense order.
  for (size_t i = 0; i < lits.size(); ++i) {
    if (lits[i].kind != LKind::Ne || lits[i].term.coefficient(var) == 0)
      continue;
    for (int side = 0; side < 2; ++side) {
      Conjunct split;
      bool ok = true;
      for (size_t j = 0; j < lits.size() && ok; ++j) {
        if (j == i)
          ok = split.add(side == 0 ? lits[j].term : -lits[j].term, LKind::Lt,
                         budget);
        else
          ok = split.add(lits[j].term, lits[j].kind, budget);
      }
      if (ok) eliminate_from_conjunct(split, var, budget, out);
    }
    return;
  }

  // Fourier-Motzkin pairing of lower and upper bounds.
  std::vector<std::pair<AffineTerm, bool>> lowers, uppers;  // (term, strict)
  Conjunct reduced;
  for (const auto& lit : lits) {
    Rational a = lit.term.coefficient(var);
    if (a == 0) {
      if (!reduced.add(lit.term, lit.kind, budget)) return;
      continue;
    }
    AffineTerm rest = lit.term;
    rest.set_coefficient(var, Rational(0));
    AffineTerm bound = rest.scaled(Rational(-1) / a);
    bool strict = lit.kind == LKind::Lt;
    if (a > 0)
      uppers.emplace_back(bound, strict);  // var < bound
    else
      lowers.emplace_back(bound, strict);  // var > bound
  }
  for (const auto& [lo, lo_strict] : lowers)
    for (const auto& [up, up_strict] : uppers)
      if (!reduced.add(lo - up, (lo_strict || up_strict) ? LKind::Lt : LKind::Le,
                       budget))
        return;
  push_conjunct(out, std::move(reduced), budget);
}


// Fuses conjuncts that are identical except for one row whose intervals
// overlap or touch; their union is again a single conjunct. Row-local
// subsumption cannot see these, yet eliminations over piecewise data
// produce long chains of adjacent slabs.
bool compress_pass(Dnf& d, Budget& budget) {
  bool changed = false;
  std::map<std::string, std::pair<Hom, std::vector<size_t>>> groups;
  for (size_t i = 0; i < d.size(); ++i) {
    for (const auto& [hom, bs] : d[i].rows()) {
      budget.charge_work();
      if (bs.eq || !bs.ne.empty()) continue;
      auto& slot = groups[d[i].merge_key(hom)];
      slot.first = hom;
      slot.second.push_back(i);
    }
  }
  std::vector<bool> dead(d.size(), false), touched(d.size(), false);
  for (auto& [key, slot] : groups) {
    const Hom& h = slot.first;
    std::vector<size_t>& idxs = slot.second;
    std::erase_if(idxs, [&](size_t i) { return dead[i] || touched[i]; });
    if (idxs.size() < 2) continue;
    // Sort by lower endpoint; a missing bound is infinite.
    auto lo_of = [&](size_t i) { return d[i].rows().at(h).lo; };
    auto hi_of = [&](size_t i) { return d[i].rows().at(h).hi; };
    std::sort(idxs.begin(), idxs.end(), [&](size_t a, size_t b) {
      const auto &la = lo_of(a), &lb = lo_of(b);
      if (!la || !lb) return la.has_value() < lb.has_value();
      int c = rational_cmp(la->v, lb->v);
      if (c != 0) return c < 0;
      return lb->strict && !la->strict;
    });
    size_t cur = idxs[0];
    bool cur_whole = false;  // cur's row became the whole line and was erased
    for (size_t k = 1; k < idxs.size(); ++k) {
      size_t nxt = idxs[k];
      budget.charge_work();
      if (cur_whole) {
        dead[nxt] = true;
        changed = true;
        continue;
      }
      const auto &chi = hi_of(cur), &nlo = lo_of(nxt);
      bool joins = !chi || !nlo;
      if (!joins) {
        int c = rational_cmp(nlo->v, chi->v);
        joins = c < 0 || (c == 0 && !(nlo->strict && chi->strict));
      }
      if (!joins) {
        cur = nxt;
        continue;
      }
      BoundSet& target = d[cur].mutable_rows().at(h);
      const auto& nhi = hi_of(nxt);
      if (!target.hi || !nhi) {
        target.hi.reset();
      } else {
        int c = rational_cmp(target.hi->v, nhi->v);
        if (c < 0 || (c == 0 && target.hi->strict && !nhi->strict))
          target.hi = nhi;
      }
      if (!target.lo && !target.hi) {
        d[cur].mutable_rows().erase(h);
        cur_whole = true;
      }
      dead[nxt] = true;
      touched[cur] = true;
      changed = true;
    }
  }
  if (!changed) return false;
  Dnf out;
  for (size_t i = 0; i < d.size(); ++i)
    if (!dead[i]) push_conjunct(out, std::move(d[i]), budget);
  d = std::move(out);
  return true;
}

void compress_dnf(Dnf& d, Budget& budget) {
  while (d.size() > 1 && compress_pass(d, budget)) {
  }
}

Dnf eliminate_var(const Dnf& d, const std::string& var, Budget& budget) {
  Dnf out;
  for (const auto& c : d) {
    eliminate_from_conjunct(c, var, budget, out);
    if (dnf_is_true(out)) return dnf_true();
  }
  compress_dnf(out, budget);
  return out;
}

FormulaPtr literal_to_formula(const Literal& lit) {
  switch (lit.kind) {
    case LKind::Lt:
      return Formula::atom(lit.term, Rel::Lt);
    case LKind::Eq:
      return Formula::atom(lit.term, Rel::Eq);
    case LKind::Le:
      return Formula::disjunction(Formula::atom(lit.term, Rel::Lt),
                                  Formula::atom(lit.term, Rel::Eq));
    case LKind::Ne:
      return Formula::negation(Formula::atom(lit.term, Rel::Eq));
  }
  throw DomainError("corrupt literal");
}

FormulaPtr dnf_to_formula(const Dnf& d) {
  if (d.empty()) return Formula::truth(false);
  std::vector<FormulaPtr> disjuncts;
  for (const auto& c : d) {
    if (c.trivial()) return Formula::truth(true);
    std::vector<FormulaPtr> parts;
    for (const auto& lit : c.literals()) parts.push_back(literal_to_formula(lit));
    disjuncts.push_back(Formula::conjoin(parts));
  }
  return Formula::disjoin(disjuncts);
}

// ----- virtual substitution (test-point) elimination -----
//
// Fallback for bodies whose disjunctive normal form explodes: an
// existential over a linear formula holds iff it holds at one of the
// Loos-Weispfenning test points (minus infinity, each atom root, each
// root nudged right by an infinitesimal), and substituting a test point
// is linear in the formula size.

FormulaPtr simplify_qf(const FormulaPtr& f) {
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
      if (f->term().is_constant()) {
        const Rational& c = f->term().constant_part();
        return Formula::truth(f->rel() == Rel::Lt ? c < 0 : c == 0);
      }
      return f;
    case Formula::Kind::Not: {
      FormulaPtr b = simplify_qf(f->body());
      if (b->kind() == Formula::Kind::True) return Formula::truth(false);
      if (b->kind() == Formula::Kind::False) return Formula::truth(true);
      if (b->kind() == Formula::Kind::Not) return b->body();
      return Formula::negation(b);
    }
    case Formula::Kind::And: {
      FormulaPtr a = simplify_qf(f->lhs()), b = simplify_qf(f->rhs());
      if (a->kind() == Formula::Kind::False ||
          b->kind() == Formula::Kind::False)
        return Formula::truth(false);
      if (a->kind() == Formula::Kind::True) return b;
      if (b->kind() == Formula::Kind::True) return a;
      return Formula::conjunction(a, b);
    }
    case Formula::Kind::Or: {
      FormulaPtr a = simplify_qf(f->lhs()), b = simplify_qf(f->rhs());
      if (a->kind() == Formula::Kind::True ||
          b->kind() == Formula::Kind::True)
        return Formula::truth(true);
      if (a->kind() == Formula::Kind::False) return b;
      if (b->kind() == Formula::Kind::False) return a;
      return Formula::disjunction(a, b);
    }
    case Formula::Kind::Implies: {
      FormulaPtr a = simplify_qf(f->lhs()), b = simplify_qf(f->rhs());
      if (a->kind() == Formula::Kind::False ||
          b->kind() == Formula::Kind::True)
        return Formula::truth(true);
      if (a->kind() == Formula::Kind::True) return b;
      if (b->kind() == Formula::Kind::False)
        return simplify_qf(Formula::negation(a));
      return Formula::implication(a, b);
    }
    default:
      return f;
  }
}

enum class CandKind { MinusInf, Exact, PlusEps };

struct Cand {
  CandKind kind;
  AffineTerm s;
};

FormulaPtr subst_test_point(const FormulaPtr& f, const std::string& var,
                            const Cand& cand, Budget& budget) {
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom: {
      const AffineTerm& t = f->term();
      Rational a = t.coefficient(var);
      if (a == 0) return f;
      budget.charge_work();
      AffineTerm rest = t;
      rest.set_coefficient(var, Rational(0));
      switch (cand.kind) {
        case CandKind::MinusInf:
          if (f->rel() == Rel::Eq) return Formula::truth(false);
          return Formula::truth(a > 0);
        case CandKind::Exact:
          return Formula::atom(rest + cand.s.scaled(a), f->rel());
        case CandKind::PlusEps: {
          if (f->rel() == Rel::Eq) return Formula::truth(false);
          AffineTerm v = rest + cand.s.scaled(a);
          FormulaPtr lt = Formula::atom(v, Rel::Lt);
          if (a < 0)
            return Formula::disjunction(lt, Formula::atom(v, Rel::Eq));
          return lt;
        }
      }
      throw DomainError("corrupt test point");
    }
    case Formula::Kind::Not:
      return Formula::negation(subst_test_point(f->body(), var, cand, budget));
    case Formula::Kind::And:
      return Formula::conjunction(
          subst_test_point(f->lhs(), var, cand, budget),
          subst_test_point(f->rhs(), var, cand, budget));
    case Formula::Kind::Or:
      return Formula::disjunction(
          subst_test_point(f->lhs(), var, cand, budget),
          subst_test_point(f->rhs(), var, cand, budget));
    case Formula::Kind::Implies:
      return Formula::implication(
          subst_test_point(f->lhs(), var, cand, budget),
          subst_test_point(f->rhs(), var, cand, budget));
    default:
      throw DomainError("test-point substitution expects a quantifier-free "
                        "formula");
  }
}

// Collects the lower-bound test points of var: every satisfiable position
// is reached from minus infinity or sits on (or just above) the left
// endpoint contributed by some literal, so upper bounds need no candidates.
void collect_cands(const FormulaPtr& f, const std::string& var, bool positive,
                   std::vector<Cand>& cands) {
  auto push = [&](CandKind k, const AffineTerm& s) {
    for (const Cand& c : cands)
      if (c.kind == k && c.s == s) return;
    cands.push_back({k, s});
  };
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom: {
      const AffineTerm& t = f->term();
      Rational a = t.coefficient(var);
      if (a == 0) return;
      AffineTerm rest = t;
      rest.set_coefficient(var, Rational(0));
      AffineTerm s = rest.scaled(Rational(-1) / a);
      if (f->rel() == Rel::Eq) {
        push(positive ? CandKind::Exact : CandKind::PlusEps, s);
      } else if (positive) {
        if (a < 0) push(CandKind::PlusEps, s);  // var > s
      } else {
        if (a > 0) push(CandKind::Exact, s);  // var >= s
      }
      return;
    }
    case Formula::Kind::Not:
      collect_cands(f->body(), var, !positive, cands);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_cands(f->lhs(), var, positive, cands);
      collect_cands(f->rhs(), var, positive, cands);
      return;
    case Formula::Kind::Implies:
      collect_cands(f->lhs(), var, !positive, cands);
      collect_cands(f->rhs(), var, positive, cands);
      return;
    default:
      throw DomainError("test-point collection expects a quantifier-free "
                        "formula");
  }
}

long count_atoms(const FormulaPtr& f) {
  std::vector<std::pair<AffineTerm, Rel>> v;
  collect_atoms(f, v);
  return static_cast<long>(v.size());
}

FormulaPtr vs_eliminate_exists(const FormulaPtr& body, const std::string& var,
                               Budget& budget) {
  std::vector<Cand> cands;
  cands.push_back({CandKind::MinusInf, {}});
  collect_cands(body, var, true, cands);
  std::vector<FormulaPtr> parts;
  for (const Cand& c : cands) {
    FormulaPtr p = simplify_qf(subst_test_point(body, var, c, budget));
    if (p->kind() == Formula::Kind::True) return p;
    if (p->kind() == Formula::Kind::False) continue;
    budget.charge(count_atoms(p));
    bool dup = false;
    for (const FormulaPtr& q : parts) dup = dup || structurally_equal(p, q);
    if (!dup) parts.push_back(std::move(p));
  }
  return Formula::disjoin(parts);
}

// Budget granted to the normal-form attempt before switching strategies.
constexpr long kDnfAttemptBudget = 50000;


// Negation normal form over quantifier-free formulas; negations end up
// directly on atoms.
FormulaPtr to_nnf(const FormulaPtr& f, bool positive) {
  switch (f->kind()) {
    case Formula::Kind::True:
      return Formula::truth(positive);
    case Formula::Kind::False:
      return Formula::truth(!positive);
    case Formula::Kind::Atom:
      return positive ? f : Formula::negation(f);
    case Formula::Kind::Not:
      return to_nnf(f->body(), !positive);
    case Formula::Kind::And:
      return positive ? Formula::conjunction(to_nnf(f->lhs(), true),
                                             to_nnf(f->rhs(), true))
                      : Formula::disjunction(to_nnf(f->lhs(), false),
                                             to_nnf(f->rhs(), false));
    case Formula::Kind::Or:
      return positive ? Formula::disjunction(to_nnf(f->lhs(), true),
                                             to_nnf(f->rhs(), true))
                      : Formula::conjunction(to_nnf(f->lhs(), false),
                                             to_nnf(f->rhs(), false));
    case Formula::Kind::Implies:
      return positive ? Formula::disjunction(to_nnf(f->lhs(), false),
                                             to_nnf(f->rhs(), true))
                      : Formula::conjunction(to_nnf(f->lhs(), true),
                                             to_nnf(f->rhs(), false));
    default:
      throw DomainError("negation normal form expects a quantifier-free "
                        "formula");
  }
}

void flatten_assoc(const FormulaPtr& f, Formula::Kind k,
                   std::vector<FormulaPtr>& out) {
  if (f->kind() == k) {
    flatten_assoc(f->lhs(), k, out);
    flatten_assoc(f->rhs(), k, out);
    return;
  }
  out.push_back(f);
}

// Eliminates an existential block from a formula in negation normal form.
// The block is miniscoped first: disjunctions split, conjuncts free of the
// block variables move outside, and independent groups of conjuncts are
// handled separately. Only the irreducible core goes through normal-form
// elimination, with test-point substitution as the fallback.
FormulaPtr elim_exists_block(std::vector<std::string> vars, FormulaPtr body,
                             Budget& budget) {
  auto fv = body->free_variables();
  std::erase_if(vars, [&](const std::string& v) { return !fv.count(v); });
  if (vars.empty()) {
    if (count_atoms(body) <= 64) return body;
    // Large residues from test-point substitution often collapse to a
    // short normal form; try within a modest cost cap.
    Budget sub{.limit = std::min<long>(20000, budget.limit)};
    sub.work_margin = 64;
    try {
      Dnf d = to_dnf(body, true, sub);
      compress_dnf(d, sub);
      budget.charge_work(sub.work);
      return dnf_to_formula(d);
    } catch (const ResourceLimitError&) {
      budget.charge_work(sub.work);
      return body;
    }
  }

  if (body->kind() == Formula::Kind::Or) {
    std::vector<FormulaPtr> parts, done;
    flatten_assoc(body, Formula::Kind::Or, parts);
    for (const FormulaPtr& p : parts)
      done.push_back(elim_exists_block(vars, p, budget));
    return simplify_qf(Formula::disjoin(done));
  }

  if (body->kind() == Formula::Kind::And) {
    std::vector<FormulaPtr> parts;
    flatten_assoc(body, Formula::Kind::And, parts);
    // Conjuncts that do not mention the block commute with it.
    std::vector<FormulaPtr> outside, inside;
    std::vector<std::set<std::string>> touched;
    for (FormulaPtr& p : parts) {
      std::set<std::string> pv = p->free_variables();
      std::set<std::string> hit;
      for (const std::string& v : vars)
        if (pv.count(v)) hit.insert(v);
      if (hit.empty()) {
        outside.push_back(std::move(p));
      } else {
        inside.push_back(std::move(p));
        touched.push_back(std::move(hit));
      }
    }
    // Group the remaining conjuncts by shared block variables; groups are
    // independent and eliminate separately.
    std::vector<int> group(inside.size(), -1);
    std::vector<std::set<std::string>> group_vars;
    for (size_t i = 0; i < inside.size(); ++i) {
      if (group[i] >= 0) continue;
      int g = static_cast<int>(group_vars.size());
      group[i] = g;
      std::set<std::string> gv = touched[i];
      bool grew = true;
      while (grew) {
        grew = false;
        for (size_t j = 0; j < inside.size(); ++j) {
          if (group[j] >= 0) continue;
          bool meets = false;
          for (const std::string& v : touched[j])
            if (gv.count(v)) meets = true;
          if (!meets) continue;
          group[j] = g;
          gv.insert(touched[j].begin(), touched[j].end());
          grew = true;
        }
      }
      group_vars.push_back(std::move(gv));
    }
    if (!outside.empty() || group_vars.size() > 1) {
      std::vector<FormulaPtr> done = std::move(outside);
      for (size_t g = 0; g < group_vars.size(); ++g) {
        std::vector<FormulaPtr> piece;
        for (size_t i = 0; i < inside.size(); ++i)
          if (group[i] == static_cast<int>(g)) piece.push_back(inside[i]);
        std::vector<std::string> gv;
        for (const std::string& v : vars)
          if (group_vars[g].count(v)) gv.push_back(v);
        done.push_back(
            elim_exists_block(std::move(gv), Formula::conjoin(piece), budget));
      }
      return simplify_qf(Formula::conjoin(done));
    }
  }

  long remaining = budget.limit - budget.used;
  Budget sub{.limit = std::min(kDnfAttemptBudget, remaining)};
  try {
    Dnf d = to_dnf(body, true, sub);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      d = eliminate_var(d, *it, sub);
    budget.charge_work(sub.work);
    return dnf_to_formula(d);
  } catch (const ResourceLimitError&) {
    if (kDnfAttemptBudget >= remaining) throw;
    budget.charge_work(sub.work);
  }
  // The normal form exploded; substitute test points for the innermost
  // variable and re-miniscope what remains.
  std::string var = vars.back();
  vars.pop_back();
  FormulaPtr rest =
      simplify_qf(vs_eliminate_exists(to_nnf(body, true), var, budget));
  return elim_exists_block(std::move(vars), to_nnf(rest, true), budget);
}

FormulaPtr eliminate_rec(const FormulaPtr& f, Budget& budget) {
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::Not:
      return Formula::negation(eliminate_rec(f->lhs(), budget));
    case Formula::Kind::And:
      return Formula::conjunction(eliminate_rec(f->lhs(), budget),
                                  eliminate_rec(f->rhs(), budget));
    case Formula::Kind::Or:
      return Formula::disjunction(eliminate_rec(f->lhs(), budget),
                                  eliminate_rec(f->rhs(), budget));
    case Formula::Kind::Implies:
      return Formula::implication(eliminate_rec(f->lhs(), budget),
                                  eliminate_rec(f->rhs(), budget));
    case Formula::Kind::Exists: {
      // A maximal block of like quantifiers is eliminated together.
      std::vector<std::string> vars{f->var()};
      FormulaPtr body = f->body();
      while (body->kind() == Formula::Kind::Exists) {
        vars.push_back(body->var());
        body = body->body();
      }
      body = eliminate_rec(body, budget);
      return elim_exists_block(std::move(vars), to_nnf(body, true), budget);
    }
    case Formula::Kind::Forall: {
      // forall v. b == not exists v. not b
      std::vector<std::string> vars{f->var()};
      FormulaPtr body = f->body();
      while (body->kind() == Formula::Kind::Forall) {
        vars.push_back(body->var());
        body = body->body();
      }
      body = eliminate_rec(body, budget);
      FormulaPtr neg =
          elim_exists_block(std::move(vars), to_nnf(body, false), budget);
      if (neg->kind() == Formula::Kind::True) return Formula::truth(false);
      if (neg->kind() == Formula::Kind::False) return Formula::truth(true);
      return Formula::negation(neg);
    }
  }
  throw DomainError("corrupt formula node");
}

}  // namespace

FormulaPtr eliminate(const FormulaPtr& f, const QeOptions& opts) {
  Budget budget{.limit = opts.atom_budget};
  return eliminate_rec(normalize_bound_variables(f), budget);
}

FormulaPtr limit_from_above(const FormulaPtr& qf, const std::string& var,
                            const Rational& c) {
  Budget budget{.limit = std::numeric_limits<long>::max() / 2};
  Cand cand{CandKind::PlusEps, AffineTerm::constant(c)};
  return simplify_qf(subst_test_point(qf, var, cand, budget));
}

bool decide(const FormulaPtr& sentence, const QeOptions& opts) {
  if (!sentence->is_sentence())
    throw DomainError("decide requires a sentence (no free variables)");
  FormulaPtr qf = eliminate(sentence, opts);
  return evaluate(qf, {});
}

IntervalUnion1D interval_union_of_qf(const FormulaPtr& qf,
                                     const std::string& var) {
  std::vector<std::pair<AffineTerm, Rel>> atoms;
  collect_atoms(qf, atoms);
  std::vector<Rational> roots;
  for (const auto& [t, rel] : atoms) {
    Rational a = t.coefficient(var);
    if (a == 0) continue;
    roots.push_back(-t.constant_part() / a);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  auto holds = [&](const Rational& x) {
    return evaluate(qf, Assignment{{var, x}});
  };

  std::vector<Interval1D> parts;
  if (roots.empty()) {
    if (holds(0)) parts.push_back(Interval1D{});
    return IntervalUnion1D::from_intervals(std::move(parts));
  }
  if (holds(roots.front() - 1))
    parts.push_back(Interval1D::open(ExtRational::neg_inf(),
                                     ExtRational::finite(roots.front())));
  for (size_t i = 0; i < roots.size(); ++i) {
    if (holds(roots[i])) parts.push_back(Interval1D::point(roots[i]));
    if (i + 1 < roots.size()) {
      Rational mid = (roots[i] + roots[i + 1]) / 2;
      if (holds(mid))
        parts.push_back(Interval1D::open(ExtRational::finite(roots[i]),
                                         ExtRational::finite(roots[i + 1])));
    }
  }
  if (holds(roots.back() + 1))
    parts.push_back(Interval1D::open(ExtRational::finite(roots.back()),
                                     ExtRational::pos_inf()));
  return IntervalUnion1D::from_intervals(std::move(parts));
}

IntervalUnion1D to_interval_union(const FormulaPtr& f, const std::string& var,
                                  const QeOptions& opts) {
  auto free = f->free_variables();
  free.erase(var);
  if (!free.empty())
    throw DomainError("to_interval_union: more than one free variable");
  return interval_union_of_qf(eliminate(f, opts), var);
}

FormulaPtr interval_union_to_formula(const IntervalUnion1D& u,
                                     const std::string& var) {
  AffineTerm x = AffineTerm::variable(var);
  std::vector<FormulaPtr> parts;
  for (const auto& c : u.components()) {
    if (c.is_point()) {
      parts.push_back(Formula::cmp_eq(x, AffineTerm::constant(c.lo.value)));
      continue;
    }
    std::vector<FormulaPtr> conj;
    if (c.lo.is_finite()) {
      AffineTerm b = AffineTerm::constant(c.lo.value);
      conj.push_back(c.lo_closed ? Formula::cmp_le(b, x) : Formula::cmp_lt(b, x));
    }
    if (c.hi.is_finite()) {
      AffineTerm b = AffineTerm::constant(c.hi.value);
      conj.push_back(c.hi_closed ? Formula::cmp_le(x, b) : Formula::cmp_lt(x, b));
    }
    parts.push_back(Formula::conjoin(conj));
  }
  return Formula::disjoin(parts);
}

}  // namespace tame
