#pragma once
// Expr: exact symbolic scalar, represented as a canonical fraction of
// trig-reduced polynomials. Equal-as-functions expressions either normalize
// to the identical representation or their difference zero-tests true (the
// trig rewrite makes representatives canonical only up to the circle ideal).
#include <gmpxx.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "exprcore/poly.hpp"

namespace gct {

class Expr {
 public:
  Expr() : num_(), den_(Poly::constant(1)) {}  // zero
  Expr(const Poly& n, const Poly& d);          // normalizes

  static Expr zero() { return Expr(); }
  static Expr one() { return from_int(1); }
  static Expr from_int(long n);
  static Expr from_rat(const mpq_class& q);
  static Expr sym(SymId s);
  static Expr sin(const Expr& arg);
  static Expr cos(const Expr& arg);
  static Expr exp(const Expr& arg);
  static Expr jet(const std::string& func, int order);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool zero_normal_form() const { return num_.is_zero(); }
  bool is_rational_constant() const { return num_.is_constant() && den_.is_constant(); }
  mpq_class rational_value() const;  // requires is_rational_constant

  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator-() const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
  Expr pow(int n) const;  // any integer

  // Partial derivative. Jets bump order when v is the distinguished time
  // symbol; kernels follow the chain rule.
  Expr diff(SymId v) const;

  // Simultaneous substitution; kernels whose arguments mention substituted
  // symbols become kernels of the substituted argument.
  Expr subs(const std::map<SymId, Expr>& map) const;

  // Exact evaluation; throws PoleAtPoint when the denominator vanishes and
  // BadInput when a symbol is missing from the point.
  mpq_class eval(const std::map<SymId, mpq_class>& point) const;

  // Symbols appearing directly in the fraction (kernels count as themselves).
  std::set<SymId> symbols() const;
  // True when the expression depends on v, chasing kernel arguments.
  bool depends_on(SymId v) const;
  // Maximum jet order of the named arbitrary function occurring (direct or
  // inside kernel arguments); -1 when absent.
  int max_jet_order(const std::string& func) const;

  std::string print() const;

 private:
  Poly num_, den_;
  void normalize();
};

// --- zero testing -----------------------------------------------------------

// Builds a consistent random evaluation point for the given symbols: random
// rationals for coordinates/constants/jets, tan-half-angle circle points for
// trig pairs, positive rationals for exp kernels.
std::map<SymId, mpq_class> random_point(const std::set<SymId>& symbols);

// Decides whether e vanishes identically on a dense open set. Primary path is
// the normal form; 5 random-point probes (skipping poles) must agree, else
// Inconclusive is thrown.
bool is_zero(const Expr& e);

// Evaluation with pole retries against freshly drawn points (the supplied
// values are used first; on a pole a fully random point is drawn).
mpq_class eval_at(const Expr& e, const std::map<SymId, mpq_class>& point);

}  // namespace gct
