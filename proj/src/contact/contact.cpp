#include "contact/contact.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "exprcore/errors.hpp"

namespace gct {

namespace {

// --- exact rational linear algebra for the ansatz solve ----------------------

using SparseRow = std::map<int, mpq_class>;

// Nullspace basis of the sparse rational matrix (rows x cols).
std::vector<std::vector<mpq_class>> rational_nullspace(
    std::vector<SparseRow> rows, int cols) {
  std::map<int, size_t> pivot_of_col;
  std::vector<int> row_pivot;
  for (size_t r = 0; r < rows.size(); ++r) {
    SparseRow& row = rows[r];
    // reduce by existing pivots
    for (auto it = row.begin(); it != row.end();) {
      auto p = pivot_of_col.find(it->first);
      if (p == pivot_of_col.end()) {
        ++it;
        continue;
      }
      mpq_class f = it->second / rows[p->second].at(it->first);
      for (auto& [c, val] : rows[p->second]) {
        auto jt = row.find(c);
        if (jt == row.end()) {
          row[c] = -f * val;
          if (row[c] == 0) row.erase(c);
        } else {
          jt->second -= f * val;
          if (jt->second == 0) row.erase(jt);
        }
      }
      it = row.begin();  // restart scan (entries changed)
    }
    if (!row.empty()) pivot_of_col[row.begin()->first] = r;
  }
  // back-substitution to reduced form
  for (auto& [pc, pr] : pivot_of_col) {
    mpq_class lead = rows[pr].at(pc);
    for (auto& [qc, qr] : pivot_of_col) {
      if (qr == pr) continue;
      auto it = rows[qr].find(pc);
      if (it == rows[qr].end()) continue;
      mpq_class f = it->second / lead;
      for (auto& [c, val] : rows[pr]) {
        auto jt = rows[qr].find(c);
        if (jt == rows[qr].end()) {
          rows[qr][c] = -f * val;
          if (rows[qr][c] == 0) rows[qr].erase(c);
        } else {
          jt->second -= f * val;
          if (jt->second == 0) rows[qr].erase(jt);
        }
      }
    }
  }
  std::vector<std::vector<mpq_class>> basis;
  for (int j = 0; j < cols; ++j) {
    if (pivot_of_col.count(j)) continue;
    std::vector<mpq_class> x((size_t)cols, 0);
    x[(size_t)j] = 1;
    for (auto& [pc, pr] : pivot_of_col) {
      auto it = rows[pr].find(j);
      if (it != rows[pr].end())
        x[(size_t)pc] = -it->second / rows[pr].at(pc);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

// --- ansatz machinery ---------------------------------------------------------

// Symbols eligible for the polynomial ansatz: chart coordinates (in chart
// order), then constants, trig/exp kernels, and jet symbols appearing in the
// generators (jets extended by one order, since integrals may involve one
// more derivative than the coefficients).
std::vector<SymId> nominate(const Distribution& D) {
  std::vector<SymId> out;
  std::set<SymId> seen;
  auto push = [&](SymId s) {
    if (seen.insert(s).second) out.push_back(s);
  };
  for (SymId s : D.chart->coords()) push(s);
  std::set<SymId> coeff_syms;
  for (const VectorField& g : D.gens)
    for (const Expr& e : g.c)
      for (SymId s : e.symbols()) coeff_syms.insert(s);
  std::map<std::string, int> jet_max;
  for (SymId s : coeff_syms) {
    const SymbolInfo& si = symtab().info(s);
    switch (si.kind) {
      case SymKind::Const:
        push(s);
        break;
      case SymKind::Sin:
      case SymKind::Cos:
        push(s);
        push(si.partner);
        break;
      case SymKind::Exp:
        push(s);
        break;
      case SymKind::Jet: {
        int& m = jet_max[si.func];
        m = std::max(m, si.order);
        break;
      }
      case SymKind::Coord:
        break;  // coordinates of other charts are not eligible
    }
  }
  for (auto& [func, top] : jet_max)
    for (int o = 0; o <= top + 1; ++o) push(symtab().jet(func, o));
  return out;
}

void enum_monomials_rec(const std::vector<SymId>& syms, size_t i, int budget,
                        Monomial& cur, std::vector<Monomial>& out) {
  if (i == syms.size()) {
    out.push_back(cur);
    return;
  }
  enum_monomials_rec(syms, i + 1, budget, cur, out);
  for (int e = 1; e <= budget; ++e) {
    cur.e[syms[i]] = e;
    enum_monomials_rec(syms, i + 1, budget - e, cur, out);
  }
  cur.e.erase(syms[i]);
}

// Preferred monomial order for canonicalizing integrals: low degree first,
// then by nominated-symbol rank (chart order first); the constant monomial
// sorts last so integrals lead with a coordinate.
struct MonoPref {
  std::map<SymId, int> rank;
  bool less(const Monomial& a, const Monomial& b) const {
    if (a.is_one() != b.is_one()) return b.is_one();
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    auto key = [&](const Monomial& m) {
      std::vector<int> v;
      for (auto& [s, e] : m.e)
        for (int i = 0; i < e; ++i) v.push_back(rank.at(s));
      std::sort(v.begin(), v.end());
      return v;
    };
    return key(a) < key(b);
  }
};

Expr monomial_expr(const Monomial& m) {
  Poly p = Poly::constant(1);
  for (auto& [s, e] : m.e) p = p * Poly::symbol(s).pow(e);
  return Expr(p, Poly::constant(1));
}

// All integrals found by the polynomial ansatz at the given total degree,
// canonicalized by row reduction over the preferred monomial order.
std::vector<Expr> ansatz_integrals(const Distribution& D, int budget) {
  std::vector<SymId> syms = nominate(D);
  std::vector<Monomial> monos;
  Monomial cur;
  enum_monomials_rec(syms, 0, budget, cur, monos);
  if (monos.size() > 30000)
    throw GctError(ErrCode::IntegralSearchExhausted,
                   "polynomial ansatz too large (" +
                       std::to_string(monos.size()) + " monomials)");
  MonoPref pref;
  for (size_t i = 0; i < syms.size(); ++i) pref.rank[syms[i]] = (int)i;
  std::sort(monos.begin(), monos.end(),
            [&](const Monomial& a, const Monomial& b) { return pref.less(a, b); });

  // Conditions: coefficients (over the canonical polynomial basis) of
  // X(sum c_a mono_a) vanish for every cleared generator X.
  std::map<Monomial, int, MonoLess> cond_index;
  std::vector<SparseRow> rows;
  for (const VectorField& g0 : D.gens) {
    VectorField g = cleared(g0);
    for (size_t a = 0; a < monos.size(); ++a) {
      Expr d = g.apply(monomial_expr(monos[a]));
      if (!d.den().is_constant())
        throw GctError(ErrCode::LinearSolveFailure,
                       "ansatz derivative is not polynomial");
      mpq_class dc = d.den().constant_value();
      for (auto& [m, c] : d.num().terms()) {
        auto it = cond_index.find(m);
        if (it == cond_index.end()) {
          it = cond_index.emplace(m, (int)rows.size()).first;
          rows.emplace_back();
        }
        SparseRow& row = rows[(size_t)it->second];
        row[(int)a] += c / dc;
        if (row[(int)a] == 0) row.erase((int)a);
      }
    }
    cond_index.clear();
  }
  auto basis = rational_nullspace(std::move(rows), (int)monos.size());
  // Canonicalize: RREF of the basis over the preferred column order.
  std::vector<SparseRow> brows;
  for (auto& v : basis) {
    SparseRow r;
    for (size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) r[(int)j] = v[j];
    brows.push_back(std::move(r));
  }
  // Row-reduce brows (columns already in preferred order).
  std::map<int, size_t> piv;
  for (size_t r = 0; r < brows.size(); ++r) {
    for (auto it = brows[r].begin(); it != brows[r].end();) {
      auto p = piv.find(it->first);
      if (p == piv.end()) {
        ++it;
        continue;
      }
      mpq_class f = it->second / brows[p->second].at(it->first);
      for (auto& [c, val] : brows[p->second]) {
        brows[r][c] -= f * val;
        if (brows[r][c] == 0) brows[r].erase(c);
      }
      it = brows[r].begin();
    }
    if (!brows[r].empty()) piv[brows[r].begin()->first] = r;
  }
  for (auto& [pc, pr] : piv) {
    mpq_class lead = brows[pr].at(pc);
    for (auto& [qc, qr] : piv) {
      if (qr == pr) continue;
      auto it = brows[qr].find(pc);
      if (it == brows[qr].end()) continue;
      mpq_class f = it->second / lead;
      for (auto& [c, val] : brows[pr]) {
        brows[qr][c] -= f * val;
        if (brows[qr][c] == 0) brows[qr].erase(c);
      }
    }
  }
  std::vector<Expr> out;
  for (auto& [pc, pr] : piv) {
    const SparseRow& r = brows[pr];
    if (r.size() == 1 && monos[(size_t)r.begin()->first].is_one())
      continue;  // the constant integral
    mpq_class lead = r.at(pc);
    Expr e = Expr::zero();
    for (auto& [c, val] : r)
      e = e + Expr::from_rat(val / lead) * monomial_expr(monos[(size_t)c]);
    out.push_back(e);
  }
  return out;
}

bool annihilates(const Distribution& D, const Expr& phi) {
  for (const VectorField& g : D.gens)
    if (!g.apply(phi).zero_normal_form()) return false;
  return true;
}

}  // namespace

int differential_rank(const std::vector<Expr>& funcs, const ChartPtr& chart) {
  if (funcs.empty()) return 0;
  ExprMat j;
  for (const Expr& f : funcs) {
    ExprVec row;
    for (SymId s : chart->coords()) row.push_back(f.diff(s));
    j.push_back(std::move(row));
  }
  return generic_rank(j);
}

Distribution fundamental_bundle(const Distribution& D, const VectorField& Z,
                                const Expr& tau, int k) {
  Distribution base = independent_subset(D);
  if (!contains_field(base, Z))
    throw GctError(ErrCode::BadInput, "Z is not a section of the distribution");
  if (!(Z.apply(tau) - Expr::one()).zero_normal_form())
    throw GctError(ErrCode::ZTauNotOne, "Z(tau) != 1");
  FlagAnalysis a = analyze_flag(D);
  if (a.flag.derived_length() != k)
    throw GctError(ErrCode::BadInput, "derived length mismatch");
  int delta_k = a.vel.rho.back();
  Distribution pi(D.chart);
  if (k == 1) {
    // Char V^(1)_0 degenerates; Pi^0 is the tau-vertical part of V^(0).
    ExprMat m(1);
    for (const VectorField& g : base.gens) m[0].push_back(g.apply(tau));
    for (const ExprVec& sol : nullspace(m)) {
      VectorField c(D.chart);
      for (size_t i = 0; i < base.gens.size(); ++i)
        if (!sol[i].zero_normal_form()) c = c + base.gens[i].scaled(sol[i]);
      if (!c.is_zero_field()) pi.gens.push_back(c);
    }
  } else {
    pi = a.intersections.empty() ? intersect(a.flag.bundles[0], a.cauchy[1])
                                 : a.intersections[0];
  }
  pi = independent_subset(pi);
  Distribution level = pi;
  for (int j = 1; j <= k - 1; ++j) {
    Distribution next(pi.chart);
    for (const VectorField& g : level.gens) next.gens.push_back(bracket(Z, g));
    for (const VectorField& g : next.gens) pi.gens.push_back(g);
    level = std::move(next);
    pi = independent_subset(pi);
  }
  int corank = D.chart->dim() - (int)pi.gens.size();
  bool ok = corank == 1 + delta_k && is_involutive(pi);
  if (!ok) {
    if (delta_k > 1)
      throw GctError(ErrCode::DeltaKGreaterThanOne,
                     "fundamental bundle verification failed with Delta_k > 1; "
                     "consider a partial prolongation");
    throw GctError(ErrCode::VerificationFailed,
                   "fundamental bundle is not integrable of corank 2");
  }
  return pi;
}

FirstIntegralBasis first_integrals(const Distribution& D, int count,
                                   const IntegralOptions& opt) {
  // Verbatim generators: echelonizing mixes rows and inflates the
  // coefficients that the involutivity brackets then differentiate.
  Distribution base = independent_subset(D);
  if (!base.gens.empty() && !is_involutive(base))
    throw GctError(ErrCode::NotIntegrable,
                   "first integrals requested of a non-integrable distribution");
  FirstIntegralBasis out;
  std::vector<Expr> selected = opt.known;
  int rank0 = differential_rank(selected, D.chart);
  auto take = [&](const Expr& phi, const char* method) {
    std::vector<Expr> trial = selected;
    trial.push_back(phi);
    if (differential_rank(trial, D.chart) != rank0 + (int)out.integrals.size() + 1)
      return false;
    selected = std::move(trial);
    out.integrals.push_back(phi);
    if (out.method.empty())
      out.method = method;
    else if (out.method != method)
      out.method = "mixed";
    return true;
  };
  // (a) coordinates annihilated by the span (zero columns of the row space)
  RrefResult span = rref(gen_matrix(base));
  for (int i = 0; i < D.chart->dim() && (int)out.integrals.size() < count; ++i) {
    bool zero_col = true;
    for (int rr = 0; rr < span.rank; ++rr)
      if (!span.mat[(size_t)rr][(size_t)i].zero_normal_form()) {
        zero_col = false;
        break;
      }
    if (zero_col) take(Expr::sym(D.chart->coord(i)), "coordinate");
  }
  // (c) user-supplied candidates, verified exactly
  for (const Expr& cand : opt.candidates) {
    if ((int)out.integrals.size() >= count) break;
    if (annihilates(base, cand)) take(cand, "user-supplied");
  }
  // (b) polynomial ansatz with escalating degree
  for (int budget = 1;
       budget <= opt.degree_budget && (int)out.integrals.size() < count;
       ++budget) {
    for (const Expr& phi : ansatz_integrals(base, budget)) {
      if ((int)out.integrals.size() >= count) break;
      take(phi, "polynomial-ansatz");
    }
  }
  if ((int)out.integrals.size() < count) {
    std::string partial;
    for (const Expr& e : out.integrals) partial += " " + e.print();
    throw GctError(ErrCode::IntegralSearchExhausted,
                   "found " + std::to_string(out.integrals.size()) + " of " +
                       std::to_string(count) + " first integrals;" +
                       (partial.empty() ? " none" : partial));
  }
  return out;
}

ContactTransformation contact_coordinates(const ControlSystem& C,
                                          const std::string& prefix,
                                          int degree_budget,
                                          const std::vector<Expr>& candidates) {
  GoursatVerdict v = sfl_test(C);
  if (!v.is_sfl)
    throw GctError(ErrCode::VerificationFailed,
                   "system is not static feedback linearizable: " +
                       (v.failures.empty() ? std::string("unknown")
                                           : v.failures.front()));
  const FlagAnalysis& a = v.analysis;
  int k = a.flag.derived_length();
  Signature kappa = v.signature;
  VectorField Z = C.drift_field();
  Expr tau = Expr::sym(C.chart->coord(C.chart->time_index()));
  Distribution D = C.distribution();

  // Fundamental functions per order, selected so their classes in
  // Xi^(j)_{j-1}/Xi^(j) are independent: the pairing matrix of the selected
  // integrals against the generators of Char V^(j) must have full rank.
  std::vector<std::vector<Expr>> funcs((size_t)k + 1);
  for (int j = 1; j <= k - 1; ++j) {
    int need = kappa.rho[(size_t)j - 1];
    if (need == 0) continue;
    const Distribution& bundle = a.intersections[(size_t)j - 1];
    int corank = C.chart->dim() - (int)bundle.gens.size();
    IntegralOptions io;
    io.degree_budget = degree_budget;
    io.candidates = candidates;
    FirstIntegralBasis basis = first_integrals(bundle, corank, io);
    const Distribution& charj = a.cauchy[(size_t)j];
    ExprMat pairings;
    for (const Expr& phi : basis.integrals) {
      ExprVec row;
      for (const VectorField& y : charj.gens) row.push_back(y.apply(phi));
      bool nonzero = false;
      for (const Expr& e : row)
        if (!e.zero_normal_form()) nonzero = true;
      if (!nonzero) continue;  // integral of Xi^(j): no new chain
      ExprMat trial = pairings;
      trial.push_back(row);
      if (generic_rank(trial) == (int)trial.size()) {
        pairings = std::move(trial);
        funcs[(size_t)j].push_back(phi);
        if ((int)funcs[(size_t)j].size() == need) break;
      }
    }
    if ((int)funcs[(size_t)j].size() != need)
      throw GctError(ErrCode::IntegralSearchExhausted,
                     "could not isolate the order-" + std::to_string(j) +
                         " fundamental functions");
  }
  // Top order: invariants of the fundamental bundle independent of tau.
  {
    int need = kappa.rho.back();
    Distribution pi = fundamental_bundle(D, Z, tau, k);
    IntegralOptions io;
    io.degree_budget = degree_budget;
    io.candidates = candidates;
    io.known = {tau};
    FirstIntegralBasis basis = first_integrals(pi, need, io);
    funcs[(size_t)k] = basis.integrals;
  }

  // Fresh jet chart; avoid name collisions with the source chart.
  std::string pfx = prefix;
  for (;;) {
    bool clash = false;
    int idx = 1;
    for (int i = 1; i <= kappa.k() && !clash; ++i)
      for (int c = 0; c < kappa.rho[(size_t)i - 1] && !clash; ++c, ++idx)
        for (int l = 0; l <= i && !clash; ++l)
          if (C.chart->index_of(symtab().coord(pfx + std::to_string(idx) +
                                                "_" + std::to_string(l))) >= 0)
            clash = true;
    if (!clash) break;
    pfx += prefix;
  }
  ContactTransformation tr;
  tr.target = build_brunovsky(kappa, pfx);
  tr.Z = Z;
  tr.tau = tau;
  tr.kappa = kappa;
  tr.map = CoordMap(C.chart, tr.target.chart);
  // Assign chains in increasing order, then selection order within an order.
  std::vector<std::pair<int, Expr>> chains;  // (order, phi)
  for (int j = 1; j <= k; ++j)
    for (const Expr& phi : funcs[(size_t)j]) chains.push_back({j, phi});
  tr.map.comp[0] = tau;  // time index 0 in the jet chart
  {
    auto by_var = tr.target.chart->jet_vars();
    for (size_t ci = 0; ci < chains.size(); ++ci) {
      // chains are named pfx1, pfx2, ... in increasing order by construction
      const auto& idxs = by_var.at(pfx + std::to_string(ci + 1));
      Expr cur = chains[ci].second;
      for (size_t l = 0; l < idxs.size(); ++l) {
        tr.map.comp[(size_t)idxs[(size_t)l]] = cur;
        if (l + 1 < idxs.size()) cur = Z.apply(cur);
      }
    }
  }
  // Verification (inversion-free).
  auto ctrl = C.control_indices();
  for (int i = 0; i < tr.target.chart->dim(); ++i) {
    if (tr.target.chart->role(i).kind != RoleKind::State) continue;
    for (int ui : ctrl)
      if (!tr.map.comp[(size_t)i].diff(C.chart->coord(ui)).zero_normal_form())
        throw GctError(ErrCode::VerificationFailed,
                       "state-level contact coordinate depends on a control");
  }
  ExprMat block;
  for (int i = 0; i < tr.target.chart->dim(); ++i) {
    if (tr.target.chart->role(i).kind != RoleKind::Control) continue;
    ExprVec row;
    for (int ui : ctrl)
      row.push_back(tr.map.comp[(size_t)i].diff(C.chart->coord(ui)));
    block.push_back(std::move(row));
  }
  if (generic_rank(block) != (int)ctrl.size())
    throw GctError(ErrCode::VerificationFailed,
                   "control-to-top-jet block is singular");
  if (!is_diffeo_candidate(tr.map))
    throw GctError(ErrCode::VerificationFailed,
                   "contact transformation is not a diffeomorphism candidate");
  return tr;
}

}  // namespace gct
