#pragma once
// Sparse multivariate polynomials over Q in table symbols, with the trig
// rewrite s^2 -> 1 - c^2 applied eagerly so that sin-symbol exponents stay
// below 2. Monomials are compared in graded lexicographic order (total degree
// first, then lex with smaller SymId more significant).
#include <gmpxx.h>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exprcore/symtab.hpp"

namespace gct {

struct Monomial {
  std::map<SymId, int> e;  // symbol -> exponent > 0

  int degree() const {
    int d = 0;
    for (auto& [s, k] : e) d += k;
    return d;
  }
  bool is_one() const { return e.empty(); }
  int exp(SymId s) const {
    auto it = e.find(s);
    return it == e.end() ? 0 : it->second;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
  Monomial times(const Monomial& o) const;
  // Exact division; nullopt when o does not divide *this.
  std::optional<Monomial> divided_by(const Monomial& o) const;
  static int cmp(const Monomial& a, const Monomial& b);  // grlex
};

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return Monomial::cmp(a, b) < 0;
  }
};

class Poly {
 public:
  using Terms = std::map<Monomial, mpq_class, MonoLess>;

  Poly() = default;
  static Poly constant(const mpq_class& q);
  static Poly symbol(SymId s);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one()); }
  mpq_class constant_value() const;  // requires is_constant
  const Terms& terms() const { return t_; }
  size_t size() const { return t_.size(); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const mpq_class& q) const;
  bool operator==(const Poly& o) const { return t_ == o.t_; }
  Poly pow(int n) const;  // n >= 0

  void add_term(const Monomial& m, const mpq_class& c);  // accumulating

  int total_degree() const;
  int degree_in(SymId v) const;
  std::set<SymId> symbols() const;
  bool depends_on(SymId v) const { return degree_in(v) > 0; }

  // Leading term in grlex order (requires nonzero).
  const std::pair<const Monomial, mpq_class>& leading() const { return *t_.rbegin(); }

  // Rewrites every sin-exponent >= 2 via s^2 = 1 - c^2; returns *this reduced.
  Poly trig_reduced() const;

  // Primitive normalization over Q: integer-coprime coefficients, positive
  // leading coefficient. Returns (primitive, content) with *this = content * primitive.
  std::pair<Poly, mpq_class> primitive() const;

  mpq_class eval(const std::map<SymId, mpq_class>& point) const;

  std::string print() const;

 private:
  Terms t_;
};

// Exact polynomial division; nullopt when not divisible.
std::optional<Poly> try_divide(const Poly& a, const Poly& b);
// Multivariate GCD (primitive, positive leading coefficient; 1 for coprime).
Poly poly_gcd(const Poly& a, const Poly& b);

}  // namespace gct
