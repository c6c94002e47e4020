#include "symmetry/symmetry.hpp"

#include <algorithm>
#include <optional>

#include "exprcore/errors.hpp"
#include "flags/flags.hpp"

namespace gct {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
  return s;
}

// Particular solution of A x = b (free variables set to zero) via rref of the
// augmented matrix; nullopt when inconsistent.
std::optional<ExprVec> solve_linear(const ExprMat& a, const ExprVec& b) {
  size_t n = a.empty() ? 0 : a[0].size();
  ExprMat aug = a;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  RrefResult rr = rref(aug);
  ExprVec x(n, Expr::zero());
  for (size_t i = 0; i < rr.pivot_cols.size(); ++i) {
    if (rr.pivot_cols[i] >= (int)n) return std::nullopt;  // pivot in b column
    x[(size_t)rr.pivot_cols[i]] = rr.mat[i].back();
  }
  return x;
}

// Group coordinates for generators whose coefficients are polynomial in t
// (pure translations and Galilean boosts): a linear ansatz over {t^d x_i}
// solved so that X_a(eps^b) = delta^b_a. nullopt when the pattern does not
// apply or the system is inconsistent.
std::optional<std::vector<Expr>> derive_group_coordinates(
    const ControlSystem& C, const SymmetryAlgebra& G) {
  SymId t = C.chart->coord(C.chart->time_index());
  auto states = C.state_indices();
  auto controls = C.control_indices();
  std::set<int> state_set(states.begin(), states.end());
  std::set<int> moved;
  int tdeg = 0;
  for (const VectorField& g : G.gens.gens)
    for (int i = 0; i < C.chart->dim(); ++i) {
      const Expr& e = g.c[(size_t)i];
      if (e.zero_normal_form()) continue;
      if (!state_set.count(i)) return std::nullopt;  // acts beyond the states
      if (!e.den().is_constant()) return std::nullopt;
      for (SymId s : e.symbols()) {
        SymKind k = symtab().info(s).kind;
        if (s == t) continue;
        if (k != SymKind::Const) return std::nullopt;  // not polynomial in t
      }
      moved.insert(i);
      tdeg = std::max(tdeg, e.num().degree_in(t));
    }
  if (moved.empty()) return std::nullopt;
  std::vector<Expr> basis;
  for (int i : moved)
    for (int d = 0; d <= tdeg; ++d)
      basis.push_back(Expr::sym(C.chart->coord(i)) * Expr::sym(t).pow(d));
  // Rows: one per (generator, monomial of the t/constant polynomial ring).
  std::vector<ExprVec> derivs;  // X_a applied to each basis function
  std::vector<Monomial> monos;
  std::map<Monomial, size_t, MonoLess> mono_index;
  auto mono_row = [&](const Monomial& m) {
    auto it = mono_index.find(m);
    if (it == mono_index.end()) {
      it = mono_index.emplace(m, monos.size()).first;
      monos.push_back(m);
    }
    return it->second;
  };
  for (const VectorField& g : G.gens.gens) {
    ExprVec row;
    for (const Expr& f : basis) {
      Expr d = g.apply(f);
      row.push_back(d);
      for (auto& [m, c] : d.num().terms()) mono_row(m);
    }
    derivs.push_back(std::move(row));
  }
  size_t const_row = mono_row(Monomial{});
  ExprMat A(derivs.size() * monos.size(),
            ExprVec(basis.size(), Expr::zero()));
  for (size_t a = 0; a < derivs.size(); ++a)
    for (size_t j = 0; j < basis.size(); ++j) {
      const Expr& d = derivs[a][j];
      mpq_class den = d.den().constant_value();
      for (auto& [m, c] : d.num().terms())
        A[a * monos.size() + mono_row(m)][j] = Expr::from_rat(c / den);
    }
  std::vector<Expr> eps;
  for (size_t b = 0; b < G.gens.gens.size(); ++b) {
    ExprVec rhs(A.size(), Expr::zero());
    rhs[b * monos.size() + const_row] = Expr::one();
    auto sol = solve_linear(A, rhs);
    if (!sol) return std::nullopt;
    Expr e = Expr::zero();
    for (size_t j = 0; j < basis.size(); ++j) e = e + (*sol)[j] * basis[j];
    eps.push_back(e);
    for (size_t a = 0; a < G.gens.gens.size(); ++a)
      if (!(G.gens.gens[a].apply(e) - (a == b ? Expr::one() : Expr::zero()))
               .zero_normal_form())
        return std::nullopt;
  }
  return eps;
}

// Picks a nonclashing family of fresh coordinate names prefix1..prefixN.
std::string fresh_prefix(const ChartPtr& avoid, std::string prefix, int n,
                         const ChartPtr& avoid2 = nullptr) {
  for (;;) {
    bool clash = false;
    for (int i = 1; i <= n && !clash; ++i) {
      SymId s = symtab().lookup(prefix + std::to_string(i));
      if (s < 0) continue;
      if (avoid->index_of(s) >= 0) clash = true;
      if (avoid2 && avoid2->index_of(s) >= 0) clash = true;
    }
    if (!clash) return prefix;
    prefix += prefix;
  }
}

// Linear independence over the constants (not over functions: a solvable
// algebra like {d/dx, x d/dx} is pointwise rank 1 but 2-dimensional). The
// generators are evaluated at several random points and stacked.
bool algebra_independent(const Distribution& gens) {
  size_t r = gens.gens.size();
  std::set<SymId> syms;
  for (const VectorField& g : gens.gens)
    for (const Expr& e : g.c)
      for (SymId s : e.symbols()) syms.insert(s);
  for (int attempt = 0; attempt < 10; ++attempt) {
    ExprMat m(r);
    bool pole = false;
    for (size_t pt = 0; pt < r && !pole; ++pt) {
      auto point = random_point(syms);
      for (size_t a = 0; a < r && !pole; ++a)
        for (const Expr& e : gens.gens[a].c) {
          try {
            m[a].push_back(Expr::from_rat(e.eval(point)));
          } catch (const GctError&) {
            pole = true;
            break;
          }
        }
    }
    if (!pole) return generic_rank(m) == (int)r;
  }
  throw GctError(ErrCode::PoleAtPoint, "could not probe algebra independence");
}

}  // namespace

SymmetryAlgebra make_symmetry_algebra(const Distribution& gens) {
  SymmetryAlgebra G;
  G.gens = gens;
  size_t r = gens.gens.size();
  if (r == 0) throw GctError(ErrCode::BadInput, "empty symmetry algebra");
  if (!algebra_independent(gens))
    throw GctError(ErrCode::BadInput, "symmetry generators are dependent");
  G.structure.assign(r, std::vector<std::vector<mpq_class>>(
                            r, std::vector<mpq_class>(r, 0)));
  for (size_t a = 0; a < r; ++a)
    for (size_t b = a + 1; b < r; ++b) {
      VectorField br = bracket(gens.gens[a], gens.gens[b]);
      if (br.is_zero_field()) continue;
      G.abelian = false;
      // Express [X_a, X_b] in the generators with constant coefficients.
      ExprMat m((size_t)gens.chart->dim(), ExprVec(r + 1, Expr::zero()));
      for (int i = 0; i < gens.chart->dim(); ++i) {
        for (size_t e = 0; e < r; ++e) m[(size_t)i][e] = gens.gens[e].c[(size_t)i];
        m[(size_t)i][r] = br.c[(size_t)i];
      }
      bool found = false;
      for (const ExprVec& v : nullspace(m)) {
        if (v[r].zero_normal_form()) continue;
        found = true;
        for (size_t e = 0; e < r; ++e) {
          Expr c = -(v[e] / v[r]);
          if (!c.is_rational_constant())
            throw GctError(ErrCode::BadInput,
                           "structure coefficients are not constant");
          G.structure[a][b][e] = c.zero_normal_form() ? 0 : c.rational_value();
          G.structure[b][a][e] = -G.structure[a][b][e];
        }
        break;
      }
      if (!found)
        throw GctError(ErrCode::BadInput,
                       "symmetry algebra is not closed under bracket");
    }
  return G;
}

AdmissibilityReport check_control_admissible(const ControlSystem& C,
                                             const SymmetryAlgebra& G) {
  AdmissibilityReport rep;
  Distribution V = C.distribution();
  for (const VectorField& x : G.gens.gens)
    for (const VectorField& v : V.gens)
      if (!contains_field(V, bracket(x, v))) {
        rep.failures.push_back("symmetry: [X, V] is not contained in V");
        goto after_symmetry;
      }
after_symmetry:
  int ti = C.chart->time_index();
  for (const VectorField& x : G.gens.gens)
    if (!x.c[(size_t)ti].zero_normal_form()) {
      rep.failures.push_back("time-invariance: X(t) != 0");
      break;
    }
  {
    // full rank of the projection to the (t, x) coordinates
    ExprMat p;
    auto states = C.state_indices();
    for (const VectorField& x : G.gens.gens) {
      ExprVec row;
      row.push_back(x.c[(size_t)ti]);
      for (int i : states) row.push_back(x.c[(size_t)i]);
      p.push_back(std::move(row));
    }
    if (generic_rank(p) != (int)G.gens.gens.size())
      rep.failures.push_back("projectability: dp(Gamma) drops rank");
  }
  if ((int)G.gens.gens.size() >= (int)C.state_indices().size())
    rep.failures.push_back("dimension: dim Gamma must be below the state dimension");
  {
    DerivedFlag f = derived_flag(V);
    const Distribution& v1 = f.bundles[f.derived_length() >= 1 ? 1 : 0];
    Distribution uni = v1;
    for (const VectorField& x : G.gens.gens) uni.gens.push_back(x);
    if (dist_rank(uni) != dist_rank(v1) + (int)G.gens.gens.size())
      rep.failures.push_back("strong transversality: Gamma meets V^(1)");
  }
  rep.admissible = rep.failures.empty();
  return rep;
}

QuotientData quotient_system(const ControlSystem& C, const SymmetryAlgebra& G,
                             const std::vector<Expr>& invariants,
                             const std::vector<Expr>& section,
                             int degree_budget) {
  AdmissibilityReport rep = check_control_admissible(C, G);
  if (!rep.admissible)
    throw GctError(ErrCode::BadInput,
                   "symmetry is not control admissible: " + join(rep.failures));
  int dim = C.chart->dim();
  int r = (int)G.gens.gens.size();
  SymId t = C.chart->coord(C.chart->time_index());
  QuotientData Q;

  std::vector<Expr> inv = invariants;
  if (inv.empty()) {
    IntegralOptions io;
    io.degree_budget = degree_budget;
    FirstIntegralBasis b = first_integrals(G.gens, dim - r, io);
    for (const Expr& e : b.integrals)
      if (!(e - Expr::sym(t)).zero_normal_form()) inv.push_back(e);
  }
  if ((int)inv.size() != dim - r - 1)
    throw GctError(ErrCode::BadInput,
                   "expected " + std::to_string(dim - r - 1) + " invariants, got " +
                       std::to_string(inv.size()));
  for (const VectorField& x : G.gens.gens)
    for (const Expr& e : inv)
      if (!is_zero(x.apply(e)))
        throw GctError(ErrCode::BadInput,
                       "supplied function is not a group invariant: " + e.print());
  {
    std::vector<Expr> all = inv;
    all.push_back(Expr::sym(t));
    if (differential_rank(all, C.chart) != dim - r)
      throw GctError(ErrCode::BadInput, "invariants are not independent");
  }
  // Classification: state invariants are control-free, control invariants not.
  auto controls = C.control_indices();
  std::vector<Expr> qs, vs;
  for (const Expr& e : inv) {
    bool has_u = false;
    for (int ui : controls)
      if (e.depends_on(C.chart->coord(ui))) has_u = true;
    (has_u ? vs : qs).push_back(e);
  }
  int n = (int)C.state_indices().size();
  if ((int)qs.size() != n - r || (int)vs.size() != (int)controls.size())
    throw GctError(ErrCode::NotExpressibleInInvariants,
                   "invariant counts do not split as (states - dim G, controls)");

  std::string qp = fresh_prefix(C.chart, "q", (int)qs.size());
  std::string vp = fresh_prefix(C.chart, "v", (int)vs.size());
  auto qch = std::make_shared<Chart>();
  qch->add(t, {RoleKind::Time, "", 0});
  for (size_t i = 0; i < qs.size(); ++i)
    qch->add(symtab().coord(qp + std::to_string(i + 1)), {RoleKind::State, "", 0});
  for (size_t i = 0; i < vs.size(); ++i)
    qch->add(symtab().coord(vp + std::to_string(i + 1)), {RoleKind::Control, "", 0});
  qch->validate();

  // Section: supplied, or derived group coordinates, or greedy coordinates.
  std::vector<Expr> sec = section;
  if (sec.empty()) {
    if (auto d = derive_group_coordinates(C, G)) {
      sec = *d;
      Q.section_is_group = true;
    }
  } else {
    if ((int)sec.size() != r)
      throw GctError(ErrCode::BadInput, "section size must equal dim Gamma");
    for (const Expr& e : sec)
      for (int ui : controls)
        if (e.depends_on(C.chart->coord(ui)))
          throw GctError(ErrCode::BadInput, "section must not involve controls");
    Q.section_is_group = true;
    for (size_t a = 0; a < (size_t)r && Q.section_is_group; ++a)
      for (size_t b = 0; b < sec.size() && Q.section_is_group; ++b)
        if (!(G.gens.gens[a].apply(sec[b]) -
              (a == b ? Expr::one() : Expr::zero()))
                 .zero_normal_form())
          Q.section_is_group = false;
  }
  if (sec.empty()) {
    // Greedily adjoin chart coordinates until the map is a diffeomorphism.
    ExprMat jac;
    std::vector<Expr> all = {Expr::sym(t)};
    for (const Expr& e : qs) all.push_back(e);
    for (const Expr& e : vs) all.push_back(e);
    for (const Expr& f : all) {
      ExprVec row;
      for (SymId s : C.chart->coords()) row.push_back(f.diff(s));
      jac.push_back(std::move(row));
    }
    int rank = generic_rank(jac);
    for (int i = 0; i < dim && rank < dim; ++i) {
      if (C.chart->coord(i) == t) continue;
      ExprVec row(jac[0].size(), Expr::zero());
      row[(size_t)i] = Expr::one();
      ExprMat trial = jac;
      trial.push_back(row);
      if (generic_rank(trial) == rank + 1) {
        jac = std::move(trial);
        ++rank;
        sec.push_back(Expr::sym(C.chart->coord(i)));
      }
    }
  }
  if ((int)sec.size() != r)
    throw GctError(ErrCode::BadInput,
                   "could not complete the invariants to a coordinate system");

  // Augmented diffeomorphism (t, q, v, section) and the drift rewrite.
  std::string sp = fresh_prefix(C.chart, "s", r, qch);
  auto ach = std::make_shared<Chart>();
  for (int i = 0; i < qch->dim(); ++i) ach->add(qch->coord(i), qch->role(i));
  for (int a = 0; a < r; ++a)
    ach->add(symtab().coord(sp + std::to_string(a + 1)), {RoleKind::Aux, "", 0});
  ach->validate();
  CoordMap phat(C.chart, ach);
  phat.comp[0] = Expr::sym(t);
  for (size_t i = 0; i < qs.size(); ++i) phat.comp[1 + i] = qs[i];
  for (size_t i = 0; i < vs.size(); ++i) phat.comp[1 + qs.size() + i] = vs[i];
  for (int a = 0; a < r; ++a)
    phat.comp[(size_t)(qch->dim() + a)] = sec[(size_t)a];
  if (!is_diffeo_candidate(phat))
    throw GctError(ErrCode::BadInput,
                   "section does not complete the invariants to a diffeomorphism");
  auto sub = invert_map(phat);
  VectorField Z = C.drift_field();
  ControlSystem quot;
  quot.chart = qch;
  for (size_t i = 0; i < qs.size(); ++i) {
    Expr F = Z.apply(qs[i]).subs(sub);
    for (int a = 0; a < r; ++a)
      if (F.depends_on(ach->coord(qch->dim() + a)))
        throw GctError(ErrCode::NotExpressibleInInvariants,
                       "Z(q) is not a function of the invariants alone");
    quot.drift.push_back(F);
  }
  Q.quotient = std::move(quot);
  Q.invariants.push_back(Expr::sym(t));
  for (const Expr& e : qs) Q.invariants.push_back(e);
  for (const Expr& e : vs) Q.invariants.push_back(e);
  for (int i = 0; i < qch->dim(); ++i)
    Q.projection[qch->coord(i)] = Q.invariants[(size_t)i];
  Q.section = sec;
  return Q;
}

SubConnection verify_sub_connection(const ControlSystem& C,
                                    const SymmetryAlgebra& G,
                                    const BrunovskyForm& target,
                                    const CoordMap& lift,
                                    const std::vector<Expr>& lambda_candidates) {
  int r = (int)G.gens.gens.size();
  int jd = target.chart->dim();
  const ChartPtr& lch = lift.target;
  if (lch->dim() != jd + r)
    throw GctError(ErrCode::BadInput, "lift chart dimension mismatch");
  for (int i = 0; i < jd; ++i)
    if (lch->coord(i) != target.chart->coord(i))
      throw GctError(ErrCode::BadInput,
                     "lift chart must extend the jet chart in order");
  SymId t = C.chart->coord(C.chart->time_index());
  VectorField Z = C.drift_field();
  if (!(lift.comp[(size_t)lch->time_index()] - Expr::sym(t)).zero_normal_form())
    throw GctError(ErrCode::VerificationFailed, "lift must preserve time");
  // Chain consistency: each jet component differentiates into the next.
  for (auto& [var, idxs] : target.chart->jet_vars())
    for (size_t l = 0; l + 1 < idxs.size(); ++l)
      if (!is_zero(Z.apply(lift.comp[(size_t)idxs[l]]) -
                   lift.comp[(size_t)idxs[l + 1]]))
        throw GctError(ErrCode::VerificationFailed,
                       "jet chain of " + var + " is not generated by the drift");
  // Group components: control-free, with X_a(eps^b) = delta^b_a.
  auto controls = C.control_indices();
  for (int a = 0; a < r; ++a) {
    const Expr& eps = lift.comp[(size_t)(jd + a)];
    for (int ui : controls)
      if (eps.depends_on(C.chart->coord(ui)))
        throw GctError(ErrCode::VerificationFailed,
                       "group component depends on a control");
    for (int b = 0; b < r; ++b)
      if (!is_zero(G.gens.gens[(size_t)b].apply(eps) -
                   (a == b ? Expr::one() : Expr::zero())))
        throw GctError(ErrCode::VerificationFailed,
                       "group components are not normalized group coordinates");
  }
  // Controls reach the top jets with full rank.
  {
    ExprMat block;
    for (int i = 0; i < jd; ++i) {
      if (target.chart->role(i).kind != RoleKind::Control) continue;
      ExprVec row;
      for (int ui : controls)
        row.push_back(lift.comp[(size_t)i].diff(C.chart->coord(ui)));
      block.push_back(std::move(row));
    }
    if (generic_rank(block) != (int)controls.size())
      throw GctError(ErrCode::VerificationFailed,
                     "control-to-top-jet block is singular");
  }
  if (!is_diffeo_candidate(lift))
    throw GctError(ErrCode::VerificationFailed,
                   "lift is not a diffeomorphism candidate");
  // Connection coefficients: by inversion when possible, else verified
  // against the supplied candidates.
  std::vector<Expr> lambda;
  bool inverted = true;
  std::map<SymId, Expr> inv;
  try {
    inv = invert_map(lift);
  } catch (const GctError& e) {
    if (e.code != ErrCode::NotInvertible) throw;
    inverted = false;
  }
  for (int a = 0; a < r; ++a) {
    Expr zeps = Z.apply(lift.comp[(size_t)(jd + a)]);
    if (inverted) {
      lambda.push_back(zeps.subs(inv));
    } else {
      if ((int)lambda_candidates.size() != r)
        throw GctError(ErrCode::NotInvertible,
                       "lift is not rationally invertible; supply the "
                       "connection coefficients");
      if (!is_zero(zeps - lift.pullback(lambda_candidates[(size_t)a])))
        throw GctError(ErrCode::VerificationFailed,
                       "supplied connection coefficient does not match Z(eps)");
      lambda.push_back(lambda_candidates[(size_t)a]);
    }
  }
  for (const Expr& lam : lambda)
    for (int a = 0; a < r; ++a)
      if (lam.depends_on(lch->coord(jd + a)))
        throw GctError(ErrCode::NormalFormViolation,
                       "connection coefficient depends on a group coordinate");
  SubConnection H;
  H.chart = lch;
  for (int a = 0; a < r; ++a) H.group.push_back(jd + a);
  H.lambda = lambda;
  H.lift = lift;
  H.kappa = target.kappa;
  VectorField Dt(lch);
  Dt.c[(size_t)lch->time_index()] = Expr::one();
  for (auto& [var, idxs] : target.chart->jet_vars())
    for (size_t l = 0; l + 1 < idxs.size(); ++l)
      Dt.c[(size_t)idxs[l]] = Expr::sym(target.chart->coord(idxs[l + 1]));
  for (int a = 0; a < r; ++a) Dt.c[(size_t)(jd + a)] = lambda[(size_t)a];
  Distribution hg(lch);
  hg.gens.push_back(std::move(Dt));
  for (int i = 0; i < jd; ++i)
    if (target.chart->role(i).kind == RoleKind::Control)
      hg.gens.push_back(coordinate_field(lch, i));
  H.HG = std::move(hg);
  return H;
}

SubConnection trivialize(const ControlSystem& C, const SymmetryAlgebra& G,
                         const QuotientData& Q, const ContactTransformation& phi,
                         const std::vector<Expr>& lambda_candidates) {
  if (!Q.section_is_group)
    throw GctError(ErrCode::BadInput,
                   "trivialization requires group coordinates as the section");
  int r = (int)G.gens.gens.size();
  int jd = phi.target.chart->dim();
  std::string ep = fresh_prefix(C.chart, "eps", r, phi.target.chart);
  auto lch = std::make_shared<Chart>();
  for (int i = 0; i < jd; ++i)
    lch->add(phi.target.chart->coord(i), phi.target.chart->role(i));
  for (int a = 0; a < r; ++a)
    lch->add(symtab().coord(ep + std::to_string(a + 1)), {RoleKind::Group, "", 0});
  lch->validate();
  CoordMap lift(C.chart, lch);
  for (int i = 0; i < jd; ++i)
    lift.comp[(size_t)i] = phi.map.comp[(size_t)i].subs(Q.projection);
  for (int a = 0; a < r; ++a)
    lift.comp[(size_t)(jd + a)] = Q.section[(size_t)a];
  return verify_sub_connection(C, G, phi.target, lift, lambda_candidates);
}

}  // namespace gct
