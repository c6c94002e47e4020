#include "exprcore/expr.hpp"

#include <algorithm>

#include "exprcore/errors.hpp"
#include "exprcore/random.hpp"

namespace gct {

namespace {

// Common monomial divisor of all terms of p (cheap pre-cancellation).
Monomial common_monomial(const Poly& p) {
  Monomial g;
  bool first = true;
  for (auto& [m, c] : p.terms()) {
    if (first) {
      g = m;
      first = false;
    } else {
      Monomial r;
      for (auto& [s, k] : g.e) {
        int o = m.exp(s);
        if (o > 0) r.e[s] = std::min(k, o);
      }
      g = r;
    }
    if (g.is_one()) break;
  }
  return g;
}

Poly divide_exact(const Poly& p, const Poly& d) {
  auto q = try_divide(p, d);
  if (!q) throw GctError(ErrCode::BadInput, "internal: inexact cancellation");
  return *q;
}

}  // namespace

Expr::Expr(const Poly& n, const Poly& d) : num_(n), den_(d) { normalize(); }

Expr Expr::from_int(long n) { return from_rat(mpq_class(n)); }

Expr Expr::from_rat(const mpq_class& q) {
  Expr e;
  e.num_ = Poly::constant(q);
  e.den_ = Poly::constant(1);
  return e;
}

Expr Expr::sym(SymId s) {
  Expr e;
  e.num_ = Poly::symbol(s);
  e.den_ = Poly::constant(1);
  return e;
}

Expr Expr::sin(const Expr& arg) {
  if (arg.zero_normal_form()) return zero();
  return sym(symtab().trig(arg).first);
}

Expr Expr::cos(const Expr& arg) {
  if (arg.zero_normal_form()) return one();
  return sym(symtab().trig(arg).second);
}

Expr Expr::exp(const Expr& arg) {
  if (arg.zero_normal_form()) return one();
  return sym(symtab().exp_kernel(arg));
}

Expr Expr::jet(const std::string& func, int order) {
  return sym(symtab().jet(func, order));
}

mpq_class Expr::rational_value() const {
  return num_.constant_value() / den_.constant_value();
}

void Expr::normalize() {
  num_ = num_.trig_reduced();
  den_ = den_.trig_reduced();
  if (den_.is_zero())
    throw GctError(ErrCode::DivisionByZeroExpr, "denominator is identically zero");
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  if (!den_.is_constant()) {
    // Cheap: cancel the common monomial factor.
    Monomial mn = common_monomial(num_), md = common_monomial(den_);
    Monomial g;
    for (auto& [s, k] : mn.e) {
      int o = md.exp(s);
      if (o > 0) g.e[s] = std::min(k, o);
    }
    if (!g.is_one()) {
      Poly gp;
      gp.add_term(g, 1);
      num_ = divide_exact(num_, gp);
      den_ = divide_exact(den_, gp);
    }
  }
  if (!den_.is_constant() && !num_.is_constant()) {
    Poly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = divide_exact(num_, g);
      den_ = divide_exact(den_, g);
    }
  }
  // Canonical scale: monic denominator in grlex order.
  mpq_class lc = den_.leading().second;
  if (lc != 1) {
    mpq_class inv = 1 / lc;
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
}

Expr Expr::operator+(const Expr& o) const {
  return Expr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Expr Expr::operator-(const Expr& o) const {
  return Expr(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Expr Expr::operator-() const {
  Expr e = *this;
  e.num_ = -e.num_;
  return e;
}

Expr Expr::operator*(const Expr& o) const {
  return Expr(num_ * o.num_, den_ * o.den_);
}

Expr Expr::operator/(const Expr& o) const {
  if (o.num_.is_zero())
    throw GctError(ErrCode::DivisionByZeroExpr, "division by zero expression");
  return Expr(num_ * o.den_, den_ * o.num_);
}

Expr Expr::pow(int n) const {
  if (n == 0) return one();
  if (n < 0) {
    if (num_.is_zero())
      throw GctError(ErrCode::DivisionByZeroExpr, "zero to negative power");
    Expr inv;
    inv.num_ = den_;
    inv.den_ = num_;
    inv.normalize();
    return inv.pow(-n);
  }
  return Expr(num_.pow(n), den_.pow(n));
}

namespace {

// Derivative of a single symbol; Exprs are small so no caching beyond the map.
Expr sym_derivative(SymId s, SymId v, std::map<SymId, Expr>& cache) {
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  const SymbolInfo& si = symtab().info(s);
  Expr d = Expr::zero();
  switch (si.kind) {
    case SymKind::Coord:
      d = (s == v) ? Expr::one() : Expr::zero();
      break;
    case SymKind::Const:
      break;
    case SymKind::Sin:
      d = Expr::sym(si.partner) * si.arg->diff(v);
      break;
    case SymKind::Cos:
      d = -Expr::sym(si.partner) * si.arg->diff(v);
      break;
    case SymKind::Exp:
      d = Expr::sym(s) * si.arg->diff(v);
      break;
    case SymKind::Jet:
      if (v == symtab().time() && v >= 0) d = Expr::jet(si.func, si.order + 1);
      break;
  }
  cache.emplace(s, d);
  return d;
}

Expr poly_diff(const Poly& p, SymId v, std::map<SymId, Expr>& cache) {
  Expr acc = Expr::zero();
  for (auto& [m, c] : p.terms()) {
    for (auto& [s, k] : m.e) {
      Expr ds = sym_derivative(s, v, cache);
      if (ds.zero_normal_form()) continue;
      Monomial rest = m;
      if (k == 1)
        rest.e.erase(s);
      else
        rest.e[s] = k - 1;
      Poly t;
      t.add_term(rest, c * k);
      acc = acc + Expr(t, Poly::constant(1)) * ds;
    }
  }
  return acc;
}

}  // namespace

Expr Expr::diff(SymId v) const {
  std::map<SymId, Expr> cache;
  Expr dn = poly_diff(num_, v, cache);
  Expr dd = poly_diff(den_, v, cache);
  Expr den = Expr(den_, Poly::constant(1));
  Expr num = Expr(num_, Poly::constant(1));
  if (dd.zero_normal_form()) return dn / den;
  return (dn * den - num * dd) / (den * den);
}

namespace {

Expr subs_symbol(SymId s, const std::map<SymId, Expr>& map,
                 std::map<SymId, Expr>& cache) {
  auto hit = map.find(s);
  if (hit != map.end()) return hit->second;
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  const SymbolInfo& si = symtab().info(s);
  Expr r = Expr::sym(s);
  if (si.kind == SymKind::Sin || si.kind == SymKind::Cos ||
      si.kind == SymKind::Exp) {
    bool touched = false;
    for (auto& [k, v] : map)
      if (si.arg->depends_on(k)) {
        touched = true;
        break;
      }
    if (touched) {
      Expr na = si.arg->subs(map);
      if (si.kind == SymKind::Sin)
        r = Expr::sin(na);
      else if (si.kind == SymKind::Cos)
        r = Expr::cos(na);
      else
        r = Expr::exp(na);
    }
  }
  cache.emplace(s, r);
  return r;
}

Expr poly_subs(const Poly& p, const std::map<SymId, Expr>& map,
               std::map<SymId, Expr>& cache) {
  Expr acc = Expr::zero();
  for (auto& [m, c] : p.terms()) {
    Expr term = Expr::from_rat(c);
    for (auto& [s, k] : m.e) term = term * subs_symbol(s, map, cache).pow(k);
    acc = acc + term;
  }
  return acc;
}

}  // namespace

Expr Expr::subs(const std::map<SymId, Expr>& map) const {
  std::map<SymId, Expr> cache;
  Expr n = poly_subs(num_, map, cache);
  Expr d = poly_subs(den_, map, cache);
  return n / d;
}

mpq_class Expr::eval(const std::map<SymId, mpq_class>& point) const {
  mpq_class d = den_.eval(point);
  if (d == 0) throw GctError(ErrCode::PoleAtPoint, "denominator vanishes at point");
  return num_.eval(point) / d;
}

std::set<SymId> Expr::symbols() const {
  std::set<SymId> r = num_.symbols();
  for (SymId s : den_.symbols()) r.insert(s);
  return r;
}

bool Expr::depends_on(SymId v) const {
  for (SymId s : symbols()) {
    if (s == v) return true;
    const SymbolInfo& si = symtab().info(s);
    if (si.arg && si.arg->depends_on(v)) return true;
  }
  return false;
}

int Expr::max_jet_order(const std::string& func) const {
  int best = -1;
  for (SymId s : symbols()) {
    const SymbolInfo& si = symtab().info(s);
    if (si.kind == SymKind::Jet && si.func == func)
      best = std::max(best, si.order);
    if (si.arg) best = std::max(best, si.arg->max_jet_order(func));
  }
  return best;
}

std::string Expr::print() const {
  if (den_.is_constant()) return num_.print();
  return "(" + num_.print() + ")/(" + den_.print() + ")";
}

// --- probing and zero testing -------------------------------------------------

std::map<SymId, mpq_class> random_point(const std::set<SymId>& symbols) {
  std::map<SymId, mpq_class> pt;
  for (SymId s : symbols) {
    if (pt.count(s)) continue;
    const SymbolInfo& si = symtab().info(s);
    switch (si.kind) {
      case SymKind::Coord:
      case SymKind::Const:
      case SymKind::Jet:
        pt[s] = rng().rat_nonzero();
        break;
      case SymKind::Sin:
      case SymKind::Cos: {
        // Circle point via the tan-half-angle substitution.
        mpq_class r = rng().rat();
        mpq_class d = 1 + r * r;
        mpq_class sv = 2 * r / d, cv = (1 - r * r) / d;
        SymId sin_id = si.kind == SymKind::Sin ? s : si.partner;
        SymId cos_id = si.kind == SymKind::Sin ? si.partner : s;
        pt[sin_id] = sv;
        pt[cos_id] = cv;
        break;
      }
      case SymKind::Exp:
        pt[s] = abs(rng().rat_nonzero());
        break;
    }
  }
  return pt;
}

bool is_zero(const Expr& e) {
  bool sym = e.zero_normal_form();
  if (e.is_rational_constant()) return sym;  // probes add nothing
  std::set<SymId> syms = e.symbols();
  int got = 0;
  bool all_zero = true;
  for (int attempt = 0; attempt < 60 && got < 5; ++attempt) {
    auto pt = random_point(syms);
    try {
      mpq_class v = e.eval(pt);
      ++got;
      if (v != 0) all_zero = false;
    } catch (const GctError& err) {
      if (err.code != ErrCode::PoleAtPoint) throw;
    }
  }
  if (got == 0)
    throw GctError(ErrCode::PoleAtPoint, "zero-test probe budget exhausted");
  if (sym != all_zero)
    throw GctError(ErrCode::Inconclusive,
                   "symbolic and numeric zero tests disagree for: " + e.print());
  return sym;
}

mpq_class eval_at(const Expr& e, const std::map<SymId, mpq_class>& point) {
  try {
    return e.eval(point);
  } catch (const GctError& err) {
    if (err.code != ErrCode::PoleAtPoint) throw;
  }
  std::set<SymId> syms = e.symbols();
  for (int attempt = 0; attempt < 40; ++attempt) {
    try {
      return e.eval(random_point(syms));
    } catch (const GctError& err) {
      if (err.code != ErrCode::PoleAtPoint) throw;
    }
  }
  throw GctError(ErrCode::PoleAtPoint, "evaluation retry budget exhausted");
}

}  // namespace gct
