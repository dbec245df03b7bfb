#pragma once

#include <map>
#include <set>
#include <string>

#include "tame/rational.hpp"

namespace tame {

using Assignment = std::map<std::string, Rational>;

// Affine combination q1*x1 + ... + qn*xn + q0 over the divisible-group term
// language. Zero coefficients are never stored.
class AffineTerm {
 public:
  AffineTerm() = default;
  explicit AffineTerm(Rational constant) : constant_(std::move(constant)) {}
  static AffineTerm variable(const std::string& name);
  static AffineTerm constant(Rational c) { return AffineTerm(std::move(c)); }

  const std::map<std::string, Rational>& coefficients() const { return coeffs_; }
  const Rational& constant_part() const { return constant_; }
  Rational coefficient(const std::string& var) const;

  void set_coefficient(const std::string& var, const Rational& c);
  void set_constant(Rational c) { constant_ = std::move(c); }

  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }

  AffineTerm operator+(const AffineTerm& o) const;
  AffineTerm operator-(const AffineTerm& o) const;
  AffineTerm operator-() const;
  AffineTerm scaled(const Rational& k) const;

  // Replaces var by the given term.
  AffineTerm substituted(const std::string& var, const AffineTerm& t) const;

  Rational evaluate(const Assignment& point) const;

  std::set<std::string> variables() const;
  void collect_variables(std::set<std::string>& out) const;

  bool operator==(const AffineTerm& o) const {
    return coeffs_ == o.coeffs_ && constant_ == o.constant_;
  }
  // Arbitrary total order for use as a container key.
  bool operator<(const AffineTerm& o) const {
    if (coeffs_ != o.coeffs_) return coeffs_ < o.coeffs_;
    return constant_ < o.constant_;
  }

  std::string str() const;

 private:
  std::map<std::string, Rational> coeffs_;
  Rational constant_ = 0;
};

inline AffineTerm operator*(const Rational& k, const AffineTerm& t) {
  return t.scaled(k);
}

}  // namespace tame
