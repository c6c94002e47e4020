#include "cascade/cascade.hpp"

#include <algorithm>

#include "exprcore/errors.hpp"

namespace gct {

namespace {

// Chain names of a jet chart, ordered by first coordinate index.
std::vector<std::string> chain_order(const ChartPtr& ch) {
  std::vector<std::pair<int, std::string>> tmp;
  for (const auto& [var, idxs] : ch->jet_vars()) tmp.push_back({idxs[0], var});
  std::sort(tmp.begin(), tmp.end());
  std::vector<std::string> out;
  out.reserve(tmp.size());
  for (auto& [i, v] : tmp) out.push_back(v);
  return out;
}

Signature signature_of_orders(const std::vector<int>& orders) {
  std::vector<int> rho;
  for (int o : orders) {
    if (o < 1) continue;
    if ((int)rho.size() < o) rho.resize((size_t)o, 0);
    ++rho[(size_t)o - 1];
  }
  return Signature(rho);
}

// A coordinate name unused by any of the given charts for indices 1..count.
std::string fresh_base(const std::string& base, int count,
                       const std::vector<ChartPtr>& charts) {
  std::string b = base;
  for (;;) {
    bool clash = false;
    for (int i = 1; i <= count && !clash; ++i) {
      SymId s = symtab().lookup(b + std::to_string(i));
      if (s < 0) continue;
      for (const ChartPtr& ch : charts)
        if (ch->index_of(s) >= 0) clash = true;
    }
    if (!clash) return b;
    b += base;
  }
}

}  // namespace

Signature join_signatures(const std::vector<Signature>& sigs) {
  std::vector<int> merged;  // chain orders, sorted descending
  for (const Signature& s : sigs) {
    std::vector<int> orders;
    for (int i = s.k(); i >= 1; --i)
      for (int c = 0; c < s.rho[(size_t)i - 1]; ++c) orders.push_back(i);
    if (orders.size() > merged.size()) merged.resize(orders.size(), 0);
    for (size_t j = 0; j < orders.size(); ++j)
      merged[j] = std::max(merged[j], orders[j]);
  }
  return signature_of_orders(merged);
}

Reduction reduce(const SubConnection& H, const std::vector<std::string>& split) {
  auto jv = H.chart->jet_vars();
  std::vector<std::string> chains = chain_order(H.chart);
  for (const std::string& v : split)
    if (!jv.count(v))
      throw GctError(ErrCode::BadInput, "unknown jet variable in split: " + v);
  if (split.empty())
    throw GctError(ErrCode::BadInput, "empty reduction split");
  if (split.size() >= chains.size())
    throw GctError(ErrCode::BadInput, "split must leave at least one chain");

  Reduction R;
  R.source = H;
  for (const std::string& v : chains)
    if (std::find(split.begin(), split.end(), v) != split.end())
      R.reduced_vars.push_back(v);

  std::vector<int> nu_orders, perp_orders;
  SymId t = H.chart->coord(H.chart->time_index());
  auto ch = std::make_shared<Chart>();
  ch->add(t, {RoleKind::Time, "", 0});
  for (size_t a = 0; a < R.reduced_vars.size(); ++a) {
    const auto& idxs = jv.at(R.reduced_vars[a]);
    int top = (int)idxs.size() - 1;
    R.orders.push_back(top);
    nu_orders.push_back(top);
    std::string f = "f" + std::to_string(a + 1);
    R.func_names.push_back(f);
    for (int l = 0; l <= top; ++l)
      R.curve[H.chart->coord(idxs[(size_t)l])] = Expr::jet(f, l);
  }
  for (const std::string& v : chains) {
    if (std::find(R.reduced_vars.begin(), R.reduced_vars.end(), v) !=
        R.reduced_vars.end())
      continue;
    const auto& idxs = jv.at(v);
    int top = (int)idxs.size() - 1;
    perp_orders.push_back(top);
    for (int l = 0; l < top; ++l)
      ch->add(H.chart->coord(idxs[(size_t)l]), {RoleKind::State, v, l});
  }
  for (int gi : H.group)
    ch->add(H.chart->coord(gi), {RoleKind::State, "", 0});
  for (const std::string& v : chains) {
    if (std::find(R.reduced_vars.begin(), R.reduced_vars.end(), v) !=
        R.reduced_vars.end())
      continue;
    const auto& idxs = jv.at(v);
    ch->add(H.chart->coord(idxs.back()), {RoleKind::Control, v,
                                          (int)idxs.size() - 1});
  }
  ch->validate();

  const VectorField& Dt = H.HG.gens.front();
  R.reduced.chart = ch;
  for (int i : R.reduced.chart->indices(RoleKind::State)) {
    int iold = H.chart->index_of(ch->coord(i));
    R.reduced.drift.push_back(Dt.c[(size_t)iold].subs(R.curve));
  }
  R.nu = signature_of_orders(nu_orders);
  R.nu_perp = signature_of_orders(perp_orders);
  return R;
}

std::vector<std::vector<std::string>> split_candidates(const SubConnection& H) {
  auto jv = H.chart->jet_vars();
  std::vector<std::string> chains = chain_order(H.chart);
  int n = (int)chains.size();
  std::vector<std::vector<std::string>> out;
  // Singletons, highest jet order first, then chain position.
  std::vector<std::pair<int, int>> singles;  // (-order, position)
  for (int i = 0; i < n; ++i)
    singles.push_back({-(int)jv.at(chains[(size_t)i]).size(), i});
  std::sort(singles.begin(), singles.end());
  for (auto& [o, i] : singles) out.push_back({chains[(size_t)i]});
  // Larger subsets in lexicographic position order (a proper subset always
  // leaves at least one chain for the reduced system).
  for (int size = 2; size < n; ++size) {
    std::vector<int> pick((size_t)size);
    for (int i = 0; i < size; ++i) pick[(size_t)i] = i;
    for (;;) {
      std::vector<std::string> s;
      for (int i : pick) s.push_back(chains[(size_t)i]);
      out.push_back(std::move(s));
      int j = size - 1;
      while (j >= 0 && pick[(size_t)j] == n - size + j) --j;
      if (j < 0) break;
      ++pick[(size_t)j];
      for (int l = j + 1; l < size; ++l) pick[(size_t)l] = pick[(size_t)l - 1] + 1;
    }
  }
  return out;
}

ReducedAnalysis reduced_sfl_analysis(const Reduction& R, bool with_contact,
                                     int degree_budget,
                                     const std::vector<Expr>& candidates) {
  ReducedAnalysis A;
  A.verdict = sfl_test(R.reduced);
  A.kbar = A.verdict.analysis.flag.derived_length();
  if (with_contact && A.verdict.is_sfl)
    A.linearization =
        contact_coordinates(R.reduced, "z", degree_budget, candidates);
  return A;
}

ProlongationPlan prolongation_plan(const Reduction& R, const ReducedAnalysis& A,
                                   const std::string& mode) {
  if (!A.verdict.is_sfl)
    throw GctError(ErrCode::ReductionNotSFL,
                   "prolongation plan requires a linearizable reduction");
  ProlongationPlan plan;
  plan.mode = mode;
  if (mode == "bound") {
    for (int o : R.orders) plan.orders.push_back(o + 2 * A.kbar - 1);
  } else if (mode == "exact") {
    if (!A.linearization)
      throw GctError(ErrCode::BadInput,
                     "exact mode requires the reduced linearization");
    const ContactTransformation& tr = *A.linearization;
    for (size_t a = 0; a < R.reduced_vars.size(); ++a) {
      // The explicit solution inverts the full reduced contact
      // transformation, so every f-jet appearing in any of its components
      // (the iterated Lie derivatives of the fundamental functions) must be
      // prolonged for.
      int best = R.orders[a];
      for (const Expr& comp : tr.map.comp)
        best = std::max(best, comp.max_jet_order(R.func_names[a]));
      plan.orders.push_back(best);
    }
  } else {
    throw GctError(ErrCode::BadInput, "unknown plan mode: " + mode);
  }
  plan.nu_prime = signature_of_orders(plan.orders);
  return plan;
}

ControlSystem build_prolonged(const Reduction& R, const ProlongationPlan& plan) {
  const SubConnection& H = R.source;
  auto jv = H.chart->jet_vars();
  std::vector<std::string> chains = chain_order(H.chart);
  auto planned_top = [&](const std::string& v) {
    for (size_t a = 0; a < R.reduced_vars.size(); ++a)
      if (R.reduced_vars[a] == v) return plan.orders[a];
    return (int)jv.at(v).size() - 1;
  };
  SymId t = H.chart->coord(H.chart->time_index());
  auto ch = std::make_shared<Chart>();
  ch->add(t, {RoleKind::Time, "", 0});
  for (const std::string& v : chains) {
    int top = planned_top(v);
    for (int l = 0; l < top; ++l)
      ch->add(symtab().coord(v + "_" + std::to_string(l)), {RoleKind::State, v, l});
  }
  for (int gi : H.group)
    ch->add(H.chart->coord(gi), {RoleKind::State, "", 0});
  for (const std::string& v : chains) {
    int top = planned_top(v);
    ch->add(symtab().coord(v + "_" + std::to_string(top)),
            {RoleKind::Control, v, top});
  }
  ch->validate();
  ControlSystem sys;
  sys.chart = ch;
  for (int i : ch->indices(RoleKind::State)) {
    const Role& r = ch->role(i);
    if (!r.var.empty()) {
      sys.drift.push_back(Expr::sym(
          symtab().coord(r.var + "_" + std::to_string(r.order + 1))));
    } else {
      int pos = H.chart->index_of(ch->coord(i));
      // group coordinate: its drift is the connection coefficient
      for (size_t a = 0; a < H.group.size(); ++a)
        if (H.group[a] == pos) sys.drift.push_back(H.lambda[a]);
    }
  }
  return sys;
}

ProlongationPlan refine_plan(const Reduction& R, ProlongationPlan plan) {
  for (size_t a = 0; a < plan.orders.size(); ++a) {
    while (plan.orders[(size_t)a] > R.orders[a]) {
      ProlongationPlan trial = plan;
      --trial.orders[(size_t)a];
      trial.nu_prime = signature_of_orders(trial.orders);
      if (!sfl_test(build_prolonged(R, trial)).is_sfl) break;
      plan = trial;
    }
  }
  plan.nu_prime = signature_of_orders(plan.orders);
  return plan;
}

ProlongedLinearization prolong_and_linearize(const Reduction& R,
                                             const ProlongationPlan& plan,
                                             bool with_contact,
                                             int degree_budget,
                                             const std::vector<Expr>& candidates) {
  ProlongedLinearization out;
  out.system = build_prolonged(R, plan);
  out.verdict = sfl_test(out.system);
  if (!out.verdict.is_sfl) {
    std::string why;
    for (const auto& f : out.verdict.failures) why += " " + f;
    throw GctError(ErrCode::ProlongationInsufficient,
                   "prolonged system is not static feedback linearizable:" + why);
  }
  if (with_contact)
    out.transformation =
        contact_coordinates(out.system, "z", degree_budget, candidates);
  return out;
}

DynamicCompensator dynamic_compensator(const ControlSystem& C,
                                       const Reduction& R,
                                       const ProlongationPlan& plan) {
  const SubConnection& H = R.source;
  auto ctrl = C.control_indices();
  int m = (int)ctrl.size();
  int s = (int)R.reduced_vars.size();
  if (s > m)
    throw GctError(ErrCode::BadInput, "more reduced chains than controls");
  std::vector<int> na;
  int total = 0;
  for (size_t a = 0; a < R.reduced_vars.size(); ++a) {
    int n = plan.orders[a] - R.orders[a];
    if (n < 1)
      throw GctError(ErrCode::BadInput,
                     "reduced variable " + R.reduced_vars[a] +
                         " is not prolonged; no compensator needed for it");
    na.push_back(n);
    total += n;
  }
  DynamicCompensator D;
  // Top-jet maps of the reduced chains on (t, x, u).
  for (size_t a = 0; a < R.reduced_vars.size(); ++a) {
    SymId tops = symtab().coord(R.reduced_vars[a] + "_" +
                                std::to_string(R.orders[a]));
    D.y_tops.push_back(H.lift.comp[(size_t)H.chart->index_of(tops)]);
  }
  // Bare-control completion: lexicographically first subset of the controls
  // whose coordinates, together with the top-jet maps, have full rank in u.
  std::vector<int> free_pos;
  {
    int want = m - s;
    std::vector<int> pick((size_t)want);
    for (int i = 0; i < want; ++i) pick[(size_t)i] = i;
    bool found = want == 0;
    while (!found) {
      ExprMat rows;
      for (const Expr& tau : D.y_tops) {
        ExprVec r;
        for (int ui : ctrl) r.push_back(tau.diff(C.chart->coord(ui)));
        rows.push_back(std::move(r));
      }
      for (int p : pick) {
        ExprVec r((size_t)m, Expr::zero());
        r[(size_t)p] = Expr::one();
        rows.push_back(std::move(r));
      }
      if (generic_rank(rows) == m) {
        found = true;
        free_pos = pick;
        break;
      }
      int j = want - 1;
      while (j >= 0 && pick[(size_t)j] == m - want + j) --j;
      if (j < 0) break;
      ++pick[(size_t)j];
      for (int l = j + 1; l < want; ++l) pick[(size_t)l] = pick[(size_t)l - 1] + 1;
    }
    if (!found)
      throw GctError(ErrCode::CompensatorSolveFailed,
                     "no bare-control completion of the top-jet maps");
    if (want == 0) free_pos.clear();
  }
  for (int p : free_pos) D.free_controls.push_back(C.chart->coord(ctrl[(size_t)p]));

  std::string yb = fresh_base("y", total, {C.chart, H.chart});
  std::string wb = fresh_base("W", m, {C.chart, H.chart});
  std::string pb = fresh_base("p", total, {C.chart, H.chart});
  int yc = 1, pc = 1;
  std::vector<std::vector<SymId>> p_chains;
  for (int a = 0; a < s; ++a) {
    std::vector<SymId> ys, ps;
    for (int i = 0; i < na[(size_t)a]; ++i) {
      ys.push_back(symtab().coord(yb + std::to_string(yc++)));
      ps.push_back(symtab().coord(pb + std::to_string(pc++)));
    }
    D.y_chains.push_back(std::move(ys));
    p_chains.push_back(std::move(ps));
  }
  for (int j = 0; j < m - s; ++j)
    D.free_w.push_back(symtab().coord(wb + std::to_string(j + 1)));
  for (int a = 0; a < s; ++a)
    D.chain_w.push_back(symtab().coord(wb + std::to_string(m - s + a + 1)));

  VectorField Z = C.drift_field();
  // The pulled-back prolonged system T on (t, x, u, p): the drift gains
  // d/dt(u) = alpha closing each chain Z_T(top map) = p_1, the p's shift,
  // and the free directions are ker(d top-maps / du) plus the last p's.
  {
    auto tch = std::make_shared<Chart>();
    tch->add(C.chart->coord(C.chart->time_index()), {RoleKind::Time, "", 0});
    for (int i : C.state_indices()) tch->add(C.chart->coord(i), C.chart->role(i));
    for (int ui : ctrl) tch->add(C.chart->coord(ui), {RoleKind::State, "", 0});
    for (int a = 0; a < s; ++a)
      for (SymId p : p_chains[(size_t)a]) tch->add(p, {RoleKind::State, "", 0});
    tch->validate();
    ChartPtr tcp = tch;
    ExprMat A;
    ExprMat aug;
    for (int a = 0; a < s; ++a) {
      ExprVec row;
      for (int ui : ctrl) row.push_back(D.y_tops[(size_t)a].diff(C.chart->coord(ui)));
      A.push_back(row);
      row.push_back(Expr::sym(p_chains[(size_t)a].front()) -
                    Z.apply(D.y_tops[(size_t)a]));
      aug.push_back(std::move(row));
    }
    RrefResult rr = rref(aug);
    if (rr.rank != s)
      throw GctError(ErrCode::CompensatorSolveFailed,
                     "top-jet maps are control-degenerate");
    ExprVec alpha((size_t)m, Expr::zero());
    for (size_t r = 0; r < rr.pivot_cols.size(); ++r) {
      if (rr.pivot_cols[r] >= m)
        throw GctError(ErrCode::CompensatorSolveFailed,
                       "inconsistent chain-closure equations");
      alpha[(size_t)rr.pivot_cols[r]] = rr.mat[r].back();
    }
    VectorField Zt(tcp);
    Zt.c[(size_t)tcp->time_index()] = Expr::one();
    {
      auto st = C.state_indices();
      for (size_t i = 0; i < st.size(); ++i)
        Zt.c[(size_t)tcp->index_of(C.chart->coord(st[i]))] = C.drift[i];
    }
    for (int j = 0; j < m; ++j)
      Zt.c[(size_t)tcp->index_of(C.chart->coord(ctrl[(size_t)j]))] =
          alpha[(size_t)j];
    for (int a = 0; a < s; ++a)
      for (size_t i = 0; i + 1 < p_chains[(size_t)a].size(); ++i)
        Zt.c[(size_t)tcp->index_of(p_chains[(size_t)a][i])] =
            Expr::sym(p_chains[(size_t)a][i + 1]);
    Distribution T(tcp);
    T.gens.push_back(std::move(Zt));
    Distribution expected(tcp);
    for (const ExprVec& v : nullspace(A)) {
      VectorField k(tcp);
      for (int j = 0; j < m; ++j)
        k.c[(size_t)tcp->index_of(C.chart->coord(ctrl[(size_t)j]))] = v[(size_t)j];
      expected.gens.push_back(k);
      T.gens.push_back(expected.gens.back());
    }
    for (int a = 0; a < s; ++a) {
      VectorField k = coordinate_field(tcp, tcp->index_of(p_chains[(size_t)a].back()));
      expected.gens.push_back(k);
      T.gens.push_back(k);
    }
    DerivedFlag fl = derived_flag(T);
    if (fl.bundles.size() < 2)
      throw GctError(ErrCode::CompensatorSolveFailed,
                     "pulled-back system has no derived growth");
    Distribution ch10 = echelon_basis(intersect(T, cauchy_bundle(fl.bundles[1])));
    if (!same_span(ch10, expected))
      throw GctError(ErrCode::VerificationFailed,
                     "characteristic bundle is not straightened by (y, W)");
    D.T = T;
    D.charT = ch10;
  }
  // Solve y_1 = top map, W = bare control for the original controls.
  {
    auto bt = std::make_shared<Chart>();
    bt->add(C.chart->coord(C.chart->time_index()), {RoleKind::Time, "", 0});
    for (int i : C.state_indices()) bt->add(C.chart->coord(i), C.chart->role(i));
    for (int a = 0; a < s; ++a)
      bt->add(D.y_chains[(size_t)a].front(), {RoleKind::State, "", 0});
    for (SymId w : D.free_w) bt->add(w, {RoleKind::Control, "", 0});
    bt->validate();
    CoordMap solve(C.chart, bt);
    int ix = 0;
    solve.comp[(size_t)ix++] = Expr::sym(C.chart->coord(C.chart->time_index()));
    for (int i : C.state_indices())
      solve.comp[(size_t)ix++] = Expr::sym(C.chart->coord(i));
    for (int a = 0; a < s; ++a) solve.comp[(size_t)ix++] = D.y_tops[(size_t)a];
    for (int p : free_pos)
      solve.comp[(size_t)ix++] = Expr::sym(C.chart->coord(ctrl[(size_t)p]));
    std::map<SymId, Expr> inv;
    try {
      inv = invert_map(solve);
    } catch (const GctError& e) {
      if (e.code != ErrCode::NotInvertible) throw;
      throw GctError(ErrCode::CompensatorSolveFailed,
                     "cannot solve the compensator relations for the controls");
    }
    std::map<SymId, Expr> back;  // (y_1, W) in terms of (t, x, u)
    for (int a = 0; a < s; ++a)
      back[D.y_chains[(size_t)a].front()] = D.y_tops[(size_t)a];
    for (size_t j = 0; j < D.free_w.size(); ++j)
      back[D.free_w[j]] = Expr::sym(D.free_controls[j]);
    for (int ui : ctrl) {
      SymId u = C.chart->coord(ui);
      D.beta[u] = inv.at(u);
      if (!is_zero(D.beta[u].subs(back) - Expr::sym(u)))
        throw GctError(ErrCode::VerificationFailed,
                       "compensator correspondence failed for " +
                           symtab().info(u).name);
    }
  }
  // Augmented system: the original drift through beta plus integrator chains.
  {
    auto ach = std::make_shared<Chart>();
    ach->add(C.chart->coord(C.chart->time_index()), {RoleKind::Time, "", 0});
    for (int i : C.state_indices()) ach->add(C.chart->coord(i), C.chart->role(i));
    for (int a = 0; a < s; ++a)
      for (SymId y : D.y_chains[(size_t)a]) ach->add(y, {RoleKind::State, "", 0});
    for (SymId w : D.free_w) ach->add(w, {RoleKind::Control, "", 0});
    for (SymId w : D.chain_w) ach->add(w, {RoleKind::Control, "", 0});
    ach->validate();
    D.augmented.chart = ach;
    for (const Expr& f : C.drift) D.augmented.drift.push_back(f.subs(D.beta));
    for (int a = 0; a < s; ++a) {
      const auto& ys = D.y_chains[(size_t)a];
      for (size_t i = 0; i + 1 < ys.size(); ++i)
        D.augmented.drift.push_back(Expr::sym(ys[i + 1]));
      D.augmented.drift.push_back(Expr::sym(D.chain_w[(size_t)a]));
    }
  }
  D.verdict = sfl_test(D.augmented);
  if (!D.verdict.is_sfl) {
    std::string why;
    for (const auto& f : D.verdict.failures) why += " " + f;
    throw GctError(ErrCode::VerificationFailed,
                   "augmented system is not static feedback linearizable:" + why);
  }
  return D;
}

FlatData flat_outputs_and_solution(const ControlSystem& C,
                                   const DynamicCompensator& comp,
                                   int degree_budget,
                                   const std::vector<Expr>& candidates) {
  FlatData out;
  out.transformation =
      contact_coordinates(comp.augmented, "z", degree_budget, candidates);
  const ChartPtr& jch = out.transformation.target.chart;
  std::vector<std::string> chains = chain_order(jch);
  auto jv = jch->jet_vars();
  for (const std::string& v : chains) {
    const auto& idxs = jv.at(v);
    out.outputs.push_back(out.transformation.map.comp[(size_t)idxs.front()]);
    out.orders.push_back((int)idxs.size() - 1);
  }
  std::map<SymId, Expr> inv;
  try {
    inv = invert_map(out.transformation.map);
  } catch (const GctError& e) {
    if (e.code != ErrCode::NotInvertible) throw;
    out.solvable = false;
    return out;
  }
  std::map<SymId, Expr> jets;
  for (size_t c = 0; c < chains.size(); ++c) {
    std::string g = "g" + std::to_string(c + 1);
    out.func_names.push_back(g);
    const auto& idxs = jv.at(chains[c]);
    for (size_t l = 0; l < idxs.size(); ++l)
      jets[jch->coord(idxs[l])] = Expr::jet(g, (int)l);
  }
  for (int i : C.state_indices()) {
    SymId x = C.chart->coord(i);
    out.solution[x] = inv.at(x).subs(jets);
  }
  for (int ui : C.control_indices()) {
    SymId u = C.chart->coord(ui);
    out.solution[u] = comp.beta.at(u).subs(inv).subs(jets);
  }
  // Residuals in the original equations, identically in the function jets.
  SymId t = C.chart->coord(C.chart->time_index());
  auto st = C.state_indices();
  for (size_t i = 0; i < st.size(); ++i) {
    Expr res = out.solution.at(C.chart->coord(st[i])).diff(t) -
               C.drift[i].subs(out.solution);
    if (!is_zero(res))
      throw GctError(ErrCode::VerificationFailed,
                     "explicit solution leaves a nonzero residual in equation " +
                         std::to_string(i + 1));
  }
  out.solvable = true;
  return out;
}

}  // namespace gct
