#include "tame/formula.hpp"

#include <sstream>

#include "tame/errors.hpp"

namespace tame {

std::shared_ptr<Formula> Formula::make_node() {
  return std::shared_ptr<Formula>(new Formula());
}

FormulaPtr Formula::truth(bool b) {
  auto n = make_node();
  n->kind_ = b ? Kind::True : Kind::False;
  return n;
}

FormulaPtr Formula::atom(AffineTerm t, Rel r) {
  auto n = make_node();
  n->kind_ = Kind::Atom;
  n->term_ = std::move(t);
  n->rel_ = r;
  return n;
}

FormulaPtr Formula::negation(FormulaPtr f) {
  auto n = make_node();
  n->kind_ = Kind::Not;
  n->lhs_ = std::move(f);
  return n;
}

FormulaPtr Formula::conjunction(FormulaPtr a, FormulaPtr b) {
  auto n = make_node();
  n->kind_ = Kind::And;
  n->lhs_ = std::move(a);
  n->rhs_ = std::move(b);
  return n;
}

FormulaPtr Formula::disjunction(FormulaPtr a, FormulaPtr b) {
  auto n = make_node();
  n->kind_ = Kind::Or;
  n->lhs_ = std::move(a);
  n->rhs_ = std::move(b);
  return n;
}

FormulaPtr Formula::implication(FormulaPtr a, FormulaPtr b) {
  auto n = make_node();
  n->kind_ = Kind::Implies;
  n->lhs_ = std::move(a);
  n->rhs_ = std::move(b);
  return n;
}

FormulaPtr Formula::exists(std::string v, FormulaPtr body) {
  auto n = make_node();
  n->kind_ = Kind::Exists;
  n->var_ = std::move(v);
  n->lhs_ = std::move(body);
  return n;
}

FormulaPtr Formula::forall(std::string v, FormulaPtr body) {
  auto n = make_node();
  n->kind_ = Kind::Forall;
  n->var_ = std::move(v);
  n->lhs_ = std::move(body);
  return n;
}

FormulaPtr Formula::conjoin(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return truth(true);
  FormulaPtr acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = conjunction(acc, fs[i]);
  return acc;
}

FormulaPtr Formula::disjoin(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return truth(false);
  FormulaPtr acc = fs.front();
  for (size_t i = 1; i < fs.size(); ++i) acc = disjunction(acc, fs[i]);
  return acc;
}

FormulaPtr Formula::cmp_lt(const AffineTerm& a, const AffineTerm& b) {
  return atom(a - b, Rel::Lt);
}

FormulaPtr Formula::cmp_eq(const AffineTerm& a, const AffineTerm& b) {
  return atom(a - b, Rel::Eq);
}

FormulaPtr Formula::cmp_le(const AffineTerm& a, const AffineTerm& b) {
  return disjunction(cmp_lt(a, b), cmp_eq(a, b));
}

FormulaPtr Formula::cmp_ne(const AffineTerm& a, const AffineTerm& b) {
  return negation(cmp_eq(a, b));
}

bool Formula::is_quantifier_free() const {
  switch (kind_) {
    case Kind::True:
    case Kind::False:
    case Kind::Atom:
      return true;
    case Kind::Not:
      return lhs_->is_quantifier_free();
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return lhs_->is_quantifier_free() && rhs_->is_quantifier_free();
    case Kind::Exists:
    case Kind::Forall:
      return false;
  }
  return false;
}

namespace {

void free_vars_rec(const Formula& f, std::set<std::string>& bound,
                   std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom:
      for (const auto& [v, c] : f.term().coefficients())
        if (!bound.count(v)) out.insert(v);
      return;
    case Formula::Kind::Not:
      free_vars_rec(*f.lhs(), bound, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      free_vars_rec(*f.lhs(), bound, out);
      free_vars_rec(*f.rhs(), bound, out);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool inserted = bound.insert(f.var()).second;
      free_vars_rec(*f.body(), bound, out);
      if (inserted) bound.erase(f.var());
      return;
    }
  }
}

}  // namespace

std::set<std::string> Formula::free_variables() const {
  std::set<std::string> bound, out;
  free_vars_rec(*this, bound, out);
  return out;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return true;
    case Formula::Kind::Atom:
      return a->rel() == b->rel() && a->term() == b->term();
    case Formula::Kind::Not:
      return structurally_equal(a->lhs(), b->lhs());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return structurally_equal(a->lhs(), b->lhs()) &&
             structurally_equal(a->rhs(), b->rhs());
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return a->var() == b->var() && structurally_equal(a->body(), b->body());
  }
  return false;
}

namespace {

// Precedence: quantifier 0, implies 1, or 2, and 3, not 4, atom 5.
void print_rec(const Formula& f, int parent, std::ostream& os) {
  auto paren = [&](int prec, auto&& inner) {
    if (prec < parent) {
      os << "(";
      inner();
      os << ")";
    } else {
      inner();
    }
  };
  switch (f.kind()) {
    case Formula::Kind::True:
      os << "true";
      return;
    case Formula::Kind::False:
      os << "false";
      return;
    case Formula::Kind::Atom:
      os << f.term().str() << (f.rel() == Rel::Lt ? " < 0" : " = 0");
      return;
    case Formula::Kind::Not:
      paren(4, [&] {
        os << "not ";
        print_rec(*f.lhs(), 4, os);
      });
      return;
    case Formula::Kind::And:
      paren(3, [&] {
        print_rec(*f.lhs(), 3, os);
        os << " and ";
        print_rec(*f.rhs(), 4, os);
      });
      return;
    case Formula::Kind::Or:
      paren(2, [&] {
        print_rec(*f.lhs(), 2, os);
        os << " or ";
        print_rec(*f.rhs(), 3, os);
      });
      return;
    case Formula::Kind::Implies:
      paren(1, [&] {
        print_rec(*f.lhs(), 2, os);
        os << " -> ";
        print_rec(*f.rhs(), 1, os);
      });
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      paren(0, [&] {
        os << (f.kind() == Formula::Kind::Exists ? "exists " : "forall ")
           << f.var() << ". ";
        print_rec(*f.body(), 0, os);
      });
      return;
  }
}

}  // namespace

std::string format_formula(const FormulaPtr& f) {
  std::ostringstream os;
  print_rec(*f, 0, os);
  return os.str();
}

bool evaluate(const FormulaPtr& f, const Assignment& point) {
  switch (f->kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atom: {
      Rational v = f->term().evaluate(point);
      return f->rel() == Rel::Lt ? v < 0 : v == 0;
    }
    case Formula::Kind::Not:
      return !evaluate(f->lhs(), point);
    case Formula::Kind::And:
      return evaluate(f->lhs(), point) && evaluate(f->rhs(), point);
    case Formula::Kind::Or:
      return evaluate(f->lhs(), point) || evaluate(f->rhs(), point);
    case Formula::Kind::Implies:
      return !evaluate(f->lhs(), point) || evaluate(f->rhs(), point);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      throw DomainError("evaluate requires a quantifier-free formula");
  }
  throw DomainError("corrupt formula node");
}

namespace {

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

FormulaPtr subst_rec(const FormulaPtr& f, const std::string& var,
                     const AffineTerm& t, const std::set<std::string>& tvars) {
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
      if (f->term().coefficient(var) == 0) return f;
      return Formula::atom(f->term().substituted(var, t), f->rel());
    case Formula::Kind::Not:
      return Formula::negation(subst_rec(f->lhs(), var, t, tvars));
    case Formula::Kind::And:
      return Formula::conjunction(subst_rec(f->lhs(), var, t, tvars),
                                  subst_rec(f->rhs(), var, t, tvars));
    case Formula::Kind::Or:
      return Formula::disjunction(subst_rec(f->lhs(), var, t, tvars),
                                  subst_rec(f->rhs(), var, t, tvars));
    case Formula::Kind::Implies:
      return Formula::implication(subst_rec(f->lhs(), var, t, tvars),
                                  subst_rec(f->rhs(), var, t, tvars));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (f->var() == var) return f;  // var is not free below
      FormulaPtr body = f->body();
      std::string bound = f->var();
      if (tvars.count(bound)) {
        // Rename the bound variable before substituting to avoid capture.
        std::set<std::string> avoid = tvars;
        avoid.insert(var);
        for (const auto& v : body->free_variables()) avoid.insert(v);
        std::string fresh = fresh_name(bound, avoid);
        body = subst_rec(body, bound, AffineTerm::variable(fresh), {});
        bound = fresh;
      }
      body = subst_rec(body, var, t, tvars);
      return f->kind() == Formula::Kind::Exists
                 ? Formula::exists(bound, body)
                 : Formula::forall(bound, body);
    }
  }
  throw DomainError("corrupt formula node");
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::string& var,
                      const AffineTerm& t) {
  return subst_rec(f, var, t, t.variables());
}

namespace {

FormulaPtr normalize_rec(const FormulaPtr& f, std::set<std::string>& used) {
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::Not:
      return Formula::negation(normalize_rec(f->lhs(), used));
    case Formula::Kind::And:
      return Formula::conjunction(normalize_rec(f->lhs(), used),
                                  normalize_rec(f->rhs(), used));
    case Formula::Kind::Or:
      return Formula::disjunction(normalize_rec(f->lhs(), used),
                                  normalize_rec(f->rhs(), used));
    case Formula::Kind::Implies:
      return Formula::implication(normalize_rec(f->lhs(), used),
                                  normalize_rec(f->rhs(), used));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::string bound = f->var();
      FormulaPtr body = f->body();
      if (used.count(bound)) {
        std::string fresh = fresh_name(bound, used);
        body = substitute(body, bound, AffineTerm::variable(fresh));
        bound = fresh;
      }
      used.insert(bound);
      body = normalize_rec(body, used);
      return f->kind() == Formula::Kind::Exists
                 ? Formula::exists(bound, body)
                 : Formula::forall(bound, body);
    }
  }
  throw DomainError("corrupt formula node");
}

}  // namespace

FormulaPtr normalize_bound_variables(const FormulaPtr& f) {
  std::set<std::string> used = f->free_variables();
  return normalize_rec(f, used);
}

FormulaPtr rename_free(const FormulaPtr& f,
                       const std::map<std::string, std::string>& renaming) {
  // Two-phase renaming through temporaries so swaps are safe.
  FormulaPtr g = f;
  std::vector<std::pair<std::string, std::string>> phase2;
  int k = 0;
  for (const auto& [from, to] : renaming) {
    std::string tmp = "__tmp" + std::to_string(k++);
    g = substitute(g, from, AffineTerm::variable(tmp));
    phase2.emplace_back(tmp, to);
  }
  for (const auto& [tmp, to] : phase2)
    g = substitute(g, tmp, AffineTerm::variable(to));
  return g;
}

void collect_atoms(const FormulaPtr& f,
                   std::vector<std::pair<AffineTerm, Rel>>& out) {
  switch (f->kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom:
      out.emplace_back(f->term(), f->rel());
      return;
    case Formula::Kind::Not:
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      collect_atoms(f->lhs(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_atoms(f->lhs(), out);
      collect_atoms(f->rhs(), out);
      return;
  }
}

FormulaPtr max_norm_lt(const std::vector<AffineTerm>& a,
                       const std::vector<AffineTerm>& b, const AffineTerm& r) {
  std::vector<FormulaPtr> parts;
  for (size_t i = 0; i < a.size(); ++i) {
    parts.push_back(Formula::cmp_lt(a[i] - b[i], r));
    parts.push_back(Formula::cmp_lt(b[i] - a[i], r));
  }
  return Formula::conjoin(parts);
}

FormulaPtr max_norm_eq(const std::vector<AffineTerm>& a,
                       const std::vector<AffineTerm>& b, const AffineTerm& r) {
  std::vector<FormulaPtr> bounds, hits;
  for (size_t i = 0; i < a.size(); ++i) {
    bounds.push_back(Formula::cmp_le(a[i] - b[i], r));
    bounds.push_back(Formula::cmp_le(b[i] - a[i], r));
    hits.push_back(Formula::cmp_eq(a[i] - b[i], r));
    hits.push_back(Formula::cmp_eq(b[i] - a[i], r));
  }
  return Formula::conjunction(Formula::conjoin(bounds),
                              Formula::disjoin(hits));
}

}  // namespace tame
