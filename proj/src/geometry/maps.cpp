#include "geometry/maps.hpp"

#include "exprcore/errors.hpp"

namespace gct {

Expr CoordMap::pullback(const Expr& f) const {
  std::map<SymId, Expr> sub;
  for (int i = 0; i < target->dim(); ++i) sub[target->coord(i)] = comp[(size_t)i];
  return f.subs(sub);
}

ExprMat jacobian(const CoordMap& m) {
  ExprMat j;
  j.reserve(m.comp.size());
  for (const Expr& e : m.comp) {
    ExprVec row;
    row.reserve((size_t)m.source->dim());
    for (int i = 0; i < m.source->dim(); ++i) row.push_back(e.diff(m.source->coord(i)));
    j.push_back(std::move(row));
  }
  return j;
}

bool is_diffeo_candidate(const CoordMap& m) {
  if (m.source->dim() != m.target->dim()) return false;
  return generic_rank(jacobian(m)) == m.source->dim();
}

namespace {

// True when e depends on u through a kernel argument (blocks linear solving).
bool kernel_blocked(const Expr& e, SymId u) {
  for (SymId s : e.symbols()) {
    const SymbolInfo& si = symtab().info(s);
    if (si.arg && si.arg->depends_on(u)) return true;
  }
  return false;
}

}  // namespace

std::map<SymId, Expr> invert_map(const CoordMap& m) {
  std::map<SymId, Expr> solved;
  std::vector<bool> used(m.comp.size(), false);
  std::vector<SymId> unknowns;
  for (int i = 0; i < m.source->dim(); ++i) {
    SymId s = m.source->coord(i);
    if (m.target->index_of(s) >= 0)
      solved[s] = Expr::sym(s);  // shared coordinate (typically t)
    else
      unknowns.push_back(s);
  }
  auto is_unsolved = [&](SymId s) {
    return !solved.count(s) && m.target->index_of(s) < 0 &&
           symtab().info(s).kind == SymKind::Coord &&
           m.source->index_of(s) >= 0;
  };
  auto has_unsolved = [&](const Expr& e) {
    for (SymId s : e.symbols()) {
      if (is_unsolved(s)) return true;
      const SymbolInfo& si = symtab().info(s);
      if (si.arg)
        for (SymId a : si.arg->symbols())
          if (is_unsolved(a)) return true;
    }
    return false;
  };

  bool progress = true;
  while (progress && solved.size() < (size_t)m.source->dim()) {
    progress = false;
    for (size_t eq = 0; eq < m.comp.size(); ++eq) {
      if (used[eq]) continue;
      Expr e = m.comp[eq].subs(solved) - Expr::sym(m.target->coord((int)eq));
      // Candidate unknowns this equation still mentions.
      std::vector<SymId> cands;
      for (SymId s : unknowns)
        if (!solved.count(s) && e.depends_on(s)) cands.push_back(s);
      if (cands.empty()) continue;
      for (SymId u : cands) {
        // Solving the numerator is equivalent off the (generic) pole locus.
        Expr f(e.num(), Poly::constant(1));
        if (kernel_blocked(f, u)) continue;
        if (f.num().degree_in(u) != 1) continue;
        Expr A = f.diff(u);
        if (has_unsolved(A)) continue;
        Expr B = f - A * Expr::sym(u);
        if (has_unsolved(B)) continue;
        if (A.zero_normal_form()) continue;
        solved[u] = -B / A;
        used[eq] = true;
        progress = true;
        break;
      }
      if (progress) break;
    }
  }
  // Joint linear stage: the remaining unknowns may only appear coupled
  // (e.g. two controls mixed by a feedback); solve the affine system at once.
  if (solved.size() < (size_t)m.source->dim()) {
    std::vector<SymId> rem;
    for (SymId s : unknowns)
      if (!solved.count(s)) rem.push_back(s);
    auto depends_on_rem = [&](const Expr& e) {
      for (SymId u : rem)
        if (e.depends_on(u)) return true;
      return false;
    };
    ExprMat aug;
    for (size_t eq = 0; eq < m.comp.size(); ++eq) {
      if (used[eq]) continue;
      Expr e = m.comp[eq].subs(solved) - Expr::sym(m.target->coord((int)eq));
      Expr f(e.num(), Poly::constant(1));
      ExprVec row;
      Expr b = f;
      bool ok = true;
      for (SymId u : rem) {
        if (kernel_blocked(f, u) || f.num().degree_in(u) > 1) {
          ok = false;
          break;
        }
        Expr a = f.diff(u);
        if (depends_on_rem(a)) {
          ok = false;
          break;
        }
        row.push_back(a);
        b = b - a * Expr::sym(u);
      }
      if (!ok || depends_on_rem(b)) continue;
      row.push_back(-b);
      aug.push_back(std::move(row));
    }
    RrefResult rr = rref(aug);
    bool solvable = rr.rank == (int)rem.size();
    for (int pc : rr.pivot_cols)
      if (pc >= (int)rem.size()) solvable = false;  // inconsistent system
    if (solvable)
      for (size_t i = 0; i < rr.pivot_cols.size(); ++i)
        solved[rem[(size_t)rr.pivot_cols[i]]] = rr.mat[i].back();
  }
  if (solved.size() < (size_t)m.source->dim())
    throw GctError(ErrCode::NotInvertible,
                   "triangular/linear inversion heuristics failed");
  return solved;
}

ExprVec pushforward_components(const CoordMap& m, const VectorField& X) {
  if (X.chart.get() != m.source.get())
    throw GctError(ErrCode::ChartMismatch, "pushforward: field not on source chart");
  ExprVec out;
  out.reserve(m.comp.size());
  for (const Expr& e : m.comp) out.push_back(X.apply(e));
  return out;
}

VectorField pushforward(const CoordMap& m, const VectorField& X) {
  if (!is_diffeo_candidate(m))
    throw GctError(ErrCode::NotInvertible, "pushforward: map is not a diffeomorphism candidate");
  auto inv = invert_map(m);
  ExprVec comps = pushforward_components(m, X);
  VectorField r(m.target);
  for (size_t i = 0; i < comps.size(); ++i) r.c[i] = comps[i].subs(inv);
  return r;
}

Distribution pushforward(const CoordMap& m, const Distribution& D) {
  if (!is_diffeo_candidate(m))
    throw GctError(ErrCode::NotInvertible, "pushforward: map is not a diffeomorphism candidate");
  auto inv = invert_map(m);
  Distribution out(m.target);
  for (const VectorField& g : D.gens) {
    ExprVec comps = pushforward_components(m, g);
    VectorField r(m.target);
    for (size_t i = 0; i < comps.size(); ++i) r.c[i] = comps[i].subs(inv);
    out.gens.push_back(std::move(r));
  }
  return out;
}

}  // namespace gct
