#include "exprcore/poly.hpp"

#include <algorithm>
#include <sstream>

#include "exprcore/errors.hpp"

namespace gct {

// --- Monomial ----------------------------------------------------------------

Monomial Monomial::times(const Monomial& o) const {
  Monomial r = *this;
  for (auto& [s, k] : o.e) {
    int& v = r.e[s];
    v += k;
    if (v == 0) r.e.erase(s);
  }
  return r;
}

std::optional<Monomial> Monomial::divided_by(const Monomial& o) const {
  Monomial r = *this;
  for (auto& [s, k] : o.e) {
    auto it = r.e.find(s);
    if (it == r.e.end() || it->second < k) return std::nullopt;
    it->second -= k;
    if (it->second == 0) r.e.erase(it);
  }
  return r;
}

int Monomial::cmp(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  // Lex: smaller SymId is more significant; larger exponent there wins.
  auto ia = a.e.begin(), ib = b.e.begin();
  while (ia != a.e.end() && ib != b.e.end()) {
    if (ia->first != ib->first) return ia->first < ib->first ? 1 : -1;
    if (ia->second != ib->second) return ia->second > ib->second ? 1 : -1;
    ++ia;
    ++ib;
  }
  if (ia != a.e.end()) return 1;
  if (ib != b.e.end()) return -1;
  return 0;
}

// --- Poly basics -------------------------------------------------------------

Poly Poly::constant(const mpq_class& q) {
  Poly p;
  if (q != 0) p.t_[Monomial{}] = q;
  return p;
}

Poly Poly::symbol(SymId s) {
  Poly p;
  Monomial m;
  m.e[s] = 1;
  p.t_[m] = 1;
  return p;
}

mpq_class Poly::constant_value() const {
  if (t_.empty()) return 0;
  return t_.begin()->second;
}

void Poly::add_term(const Monomial& m, const mpq_class& c) {
  if (c == 0) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_[m] = c;
  } else {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.t_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (auto& [m, c] : o.t_) r.add_term(m, -c);
  return r;
}

Poly Poly::operator-() const {
  Poly r;
  for (auto& [m, c] : t_) r.t_[m] = -c;
  return r;
}

Poly Poly::operator*(const mpq_class& q) const {
  Poly r;
  if (q == 0) return r;
  for (auto& [m, c] : t_) r.t_[m] = c * q;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (auto& [m1, c1] : t_)
    for (auto& [m2, c2] : o.t_) r.add_term(m1.times(m2), c1 * c2);
  return r.trig_reduced();
}

Poly Poly::pow(int n) const {
  if (n < 0) throw GctError(ErrCode::BadInput, "Poly::pow negative exponent");
  Poly r = constant(1);
  Poly b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

int Poly::total_degree() const {
  int d = 0;
  for (auto& [m, c] : t_) d = std::max(d, m.degree());
  return d;
}

int Poly::degree_in(SymId v) const {
  int d = 0;
  for (auto& [m, c] : t_) d = std::max(d, m.exp(v));
  return d;
}

std::set<SymId> Poly::symbols() const {
  std::set<SymId> r;
  for (auto& [m, c] : t_)
    for (auto& [s, k] : m.e) r.insert(s);
  return r;
}

Poly Poly::trig_reduced() const {
  Poly cur = *this;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = cur.t_.begin(); it != cur.t_.end(); ++it) {
      const Monomial& m = it->first;
      SymId sin_sym = -1;
      for (auto& [s, k] : m.e) {
        if (k >= 2 && symtab().info(s).kind == SymKind::Sin) {
          sin_sym = s;
          break;
        }
      }
      if (sin_sym < 0) continue;
      // coeff * m = coeff * (m / s^2) * (1 - c^2)
      mpq_class coeff = it->second;
      SymId cos_sym = symtab().info(sin_sym).partner;
      Monomial base = m;
      base.e[sin_sym] -= 2;
      if (base.e[sin_sym] == 0) base.e.erase(sin_sym);
      Monomial with_c2 = base;
      with_c2.e[cos_sym] += 2;
      cur.t_.erase(it);
      cur.add_term(base, coeff);
      cur.add_term(with_c2, -coeff);
      changed = true;
      break;  // iterators invalidated; rescan
    }
  }
  return cur;
}

std::pair<Poly, mpq_class> Poly::primitive() const {
  if (t_.empty()) return {*this, mpq_class(0)};
  // content = gcd(numerators) / lcm(denominators), signed by leading coeff.
  mpz_class g = 0, l = 1;
  for (auto& [m, c] : t_) {
    g = gcd(g, c.get_num());
    l = lcm(l, c.get_den());
  }
  mpq_class content(g, l);
  content.canonicalize();
  if (leading().second < 0) content = -content;
  Poly p;
  for (auto& [m, c] : t_) p.t_[m] = c / content;
  return {p, content};
}

mpq_class Poly::eval(const std::map<SymId, mpq_class>& point) const {
  mpq_class acc = 0;
  for (auto& [m, c] : t_) {
    mpq_class term = c;
    for (auto& [s, k] : m.e) {
      auto it = point.find(s);
      if (it == point.end())
        throw GctError(ErrCode::BadInput,
                       "eval point missing symbol " + symtab().info(s).name);
      mpq_class v = it->second;
      for (int i = 0; i < k; ++i) term *= v;
    }
    acc += term;
  }
  return acc;
}

std::string Poly::print() const {
  if (t_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Descending grlex order.
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    mpq_class c = it->second;
    bool neg = c < 0;
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    first = false;
    mpq_class a = neg ? mpq_class(-c) : c;
    const Monomial& m = it->first;
    bool coeff_one = (a == 1);
    if (!coeff_one || m.is_one()) out << a.get_str();
    bool lead = coeff_one && !m.is_one();
    for (auto& [s, k] : m.e) {
      if (!lead) out << "*";
      lead = false;
      out << symtab().info(s).name;
      if (k > 1) out << "^" << k;
    }
  }
  return out.str();
}

// --- division and gcd --------------------------------------------------------

namespace {

// Multiplication in the free ring (no trig rewrite). Division and gcd work on
// free-ring representatives: inputs are trig-reduced, and free-ring
// divisibility is preserved under the circle-ideal quotient, so cancellation
// stays sound while leading-term arithmetic stays exact.
Poly mul_free(const Poly& a, const Poly& b) {
  Poly r;
  for (auto& [m1, c1] : a.terms())
    for (auto& [m2, c2] : b.terms()) r.add_term(m1.times(m2), c1 * c2);
  return r;
}

Poly pow_free(const Poly& a, int n) {
  Poly r = Poly::constant(1);
  Poly b = a;
  while (n > 0) {
    if (n & 1) r = mul_free(r, b);
    b = mul_free(b, b);
    n >>= 1;
  }
  return r;
}

// Univariate view in v with Poly coefficients.
std::map<int, Poly> univ_coeffs(const Poly& p, SymId v) {
  std::map<int, Poly> r;
  for (auto& [m, c] : p.terms()) {
    int k = m.exp(v);
    Monomial rest = m;
    rest.e.erase(v);
    r[k].add_term(rest, c);
  }
  return r;
}

[[maybe_unused]] Poly from_univ(const std::map<int, Poly>& coeffs, SymId v) {
  Poly r;
  for (auto& [k, c] : coeffs) r = r + mul_free(c, pow_free(Poly::symbol(v), k));
  return r;
}

// gcd of the coefficients (recursive content).
Poly coeff_gcd(const std::map<int, Poly>& coeffs) {
  Poly g;
  for (auto& [k, c] : coeffs) {
    g = g.is_zero() ? c.primitive().first : poly_gcd(g, c);
    if (g.is_constant() && !g.is_zero()) return Poly::constant(1);
  }
  return g;
}

// Largest monomial dividing every term.
Monomial monomial_content(const Poly& p) {
  Monomial m = p.terms().begin()->first;
  for (auto& [t, c] : p.terms()) {
    for (auto it = m.e.begin(); it != m.e.end();) {
      int k = t.exp(it->first);
      if (k == 0) {
        it = m.e.erase(it);
      } else {
        it->second = std::min(it->second, k);
        ++it;
      }
    }
    if (m.is_one()) break;
  }
  return m;
}

Poly divide_by_monomial(const Poly& p, const Monomial& m) {
  if (m.is_one()) return p;
  Poly r;
  for (auto& [t, c] : p.terms()) r.add_term(*t.divided_by(m), c);
  return r;
}

// Pseudo-remainder of a by b in variable v (deg_v b > 0).
Poly prem(Poly a, const Poly& b, SymId v) {
  auto bc = univ_coeffs(b, v);
  int db = bc.rbegin()->first;
  Poly blead = bc.rbegin()->second;
  while (true) {
    auto ac = univ_coeffs(a, v);
    if (ac.empty()) return a;
    int da = ac.rbegin()->first;
    if (da < db) return a;
    Poly alead = ac.rbegin()->second;
    // a <- blead * a - alead * v^(da-db) * b
    Poly shift = pow_free(Poly::symbol(v), da - db);
    a = mul_free(blead, a) - mul_free(mul_free(alead, shift), b);
  }
}

}  // namespace

std::optional<Poly> try_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  if (b.is_constant()) {
    mpq_class inv = 1 / b.constant_value();
    return a * inv;
  }
  Poly rem = a;
  Poly quot;
  const auto blead = b.leading();
  while (!rem.is_zero()) {
    const auto rlead = rem.leading();
    auto q = rlead.first.divided_by(blead.first);
    if (!q) return std::nullopt;
    mpq_class qc = rlead.second / blead.second;
    Poly qterm;
    qterm.add_term(*q, qc);
    quot = quot + qterm;
    rem = rem - mul_free(qterm, b);
  }
  return quot;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.primitive().first;
  if (b.is_zero()) return a.primitive().first;
  if (a.is_constant() || b.is_constant()) return Poly::constant(1);
  // Split off the monomial content: gcd(m_a a1, m_b b1) = gcd(m_a, m_b) *
  // gcd(a1, b1) once a1, b1 have trivial monomial content. This makes gcds
  // against pure powers (the denominators produced by the quotient rule)
  // immediate instead of triggering the recursive content machinery.
  Monomial ma = monomial_content(a), mb = monomial_content(b);
  if (!ma.is_one() || !mb.is_one()) {
    Monomial mg;
    for (auto& [s, k] : ma.e) {
      int j = mb.exp(s);
      if (std::min(k, j) > 0) mg.e[s] = std::min(k, j);
    }
    Poly g = poly_gcd(divide_by_monomial(a, ma), divide_by_monomial(b, mb));
    Poly mono;
    mono.add_term(mg, 1);
    return mul_free(mono, g).primitive().first;
  }
  std::set<SymId> as = a.symbols(), bs = b.symbols();
  // A nonconstant common divisor needs a common variable; prefer the common
  // variable of smallest degree for the pseudo-remainder sequence.
  SymId v = 0;
  int best = -1;
  for (SymId s : as) {
    if (!bs.count(s)) continue;
    int d = std::min(a.degree_in(s), b.degree_in(s));
    if (best < 0 || d < best) {
      best = d;
      v = s;
    }
  }
  if (best < 0) return Poly::constant(1);
  auto ac = univ_coeffs(a, v);
  auto bc = univ_coeffs(b, v);
  Poly ca = coeff_gcd(ac);
  Poly cb = coeff_gcd(bc);
  Poly cg = poly_gcd(ca, cb);
  auto primpart = [&](const Poly& p, const Poly& cont) {
    auto q = try_divide(p, cont);
    if (!q) throw GctError(ErrCode::BadInput, "content division failed");
    return q->primitive().first;
  };
  Poly A = primpart(a, ca), B = primpart(b, cb);
  if (A.degree_in(v) < B.degree_in(v)) std::swap(A, B);
  while (true) {
    if (B.is_zero()) break;  // gcd candidate is A
    if (B.degree_in(v) == 0) {
      // Coprime in v (both are v-primitive), so only the content survives.
      A = Poly::constant(1);
      break;
    }
    Poly R = prem(A, B, v);
    A = B;
    if (R.is_zero()) {
      B = Poly();
    } else {
      Poly rc = coeff_gcd(univ_coeffs(R, v));
      B = primpart(R, rc);
    }
  }
  return mul_free(cg, A.primitive().first).primitive().first;
}

}  // namespace gct
