#include "tame/term.hpp"

#include <sstream>
#include <stdexcept>

namespace tame {

AffineTerm AffineTerm::variable(const std::string& name) {
  AffineTerm t;
  t.coeffs_[name] = 1;
  return t;
}

Rational AffineTerm::coefficient(const std::string& var) const {
  auto it = coeffs_.find(var);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void AffineTerm::set_coefficient(const std::string& var, const Rational& c) {
  if (c == 0)
    coeffs_.erase(var);
  else
    coeffs_[var] = c;
}

AffineTerm AffineTerm::operator+(const AffineTerm& o) const {
  AffineTerm r = *this;
  for (const auto& [v, c] : o.coeffs_) r.set_coefficient(v, r.coefficient(v) + c);
  r.constant_ += o.constant_;
  return r;
}

AffineTerm AffineTerm::operator-(const AffineTerm& o) const {
  return *this + (-o);
}

AffineTerm AffineTerm::operator-() const { return scaled(-1); }

AffineTerm AffineTerm::scaled(const Rational& k) const {
  AffineTerm r;
  if (k == 0) return r;
  for (const auto& [v, c] : coeffs_) r.coeffs_[v] = c * k;
  r.constant_ = constant_ * k;
  return r;
}

AffineTerm AffineTerm::substituted(const std::string& var,
                                   const AffineTerm& t) const {
  auto it = coeffs_.find(var);
  if (it == coeffs_.end()) return *this;
  Rational k = it->second;
  AffineTerm r = *this;
  r.coeffs_.erase(var);
  return r + t.scaled(k);
}

Rational AffineTerm::evaluate(const Assignment& point) const {
  Rational acc = constant_;
  for (const auto& [v, c] : coeffs_) {
    auto it = point.find(v);
    if (it == point.end())
      throw std::invalid_argument("unassigned variable: " + v);
    acc += c * it->second;
  }
  return acc;
}

std::set<std::string> AffineTerm::variables() const {
  std::set<std::string> out;
  collect_variables(out);
  return out;
}

void AffineTerm::collect_variables(std::set<std::string>& out) const {
  for (const auto& [v, c] : coeffs_) out.insert(v);
}

std::string AffineTerm::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs_) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1) os << to_string(a) << "*";
    os << v;
    first = false;
  }
  if (first) {
    os << to_string(constant_);
  } else if (constant_ != 0) {
    os << (constant_ < 0 ? " - " : " + ")
       << to_string(constant_ < 0 ? Rational(-constant_) : constant_);
  }
  return os.str();
}

}  // namespace tame
