#include "goursat/goursat.hpp"

#include <sstream>

#include "exprcore/errors.hpp"

namespace gct {

namespace {

struct ChainInfo {
  std::string var;
  int top = 0;
  std::vector<SymId> jets;  // order 0..top
};

std::vector<ChainInfo> make_chains(const Signature& kappa,
                                   const std::string& prefix) {
  std::vector<ChainInfo> chains;
  int idx = 1;
  for (int i = 1; i <= kappa.k(); ++i)
    for (int c = 0; c < kappa.rho[(size_t)i - 1]; ++c) {
      ChainInfo ci;
      ci.var = prefix + std::to_string(idx++);
      ci.top = i;
      for (int l = 0; l <= i; ++l)
        ci.jets.push_back(symtab().coord(ci.var + "_" + std::to_string(l)));
      chains.push_back(std::move(ci));
    }
  return chains;
}

// Compares a computed refined derived type against an expected one; entry
// (0,1) (chi^0) is skipped when chi0_free is set (relative Goursat test).
void compare_type(const RefinedDerivedType& got, const RefinedDerivedType& want,
                  bool chi0_free, std::vector<std::string>& failures) {
  bool ok = got.rows.size() == want.rows.size();
  for (size_t i = 0; ok && i < got.rows.size(); ++i) {
    if (got.rows[i].size() != want.rows[i].size()) ok = false;
    for (size_t j = 0; ok && j < got.rows[i].size(); ++j) {
      if (chi0_free && i == 0 && j == 1) continue;
      if (got.rows[i][j] != want.rows[i][j]) ok = false;
    }
  }
  if (!ok)
    failures.push_back("refined derived type " + got.str() +
                       " does not match the normal-form relations " +
                       want.str());
}

void check_fundamental(GoursatVerdict& v);

void check_core(GoursatVerdict& v, int chart_dim, bool chi0_free) {
  const FlagAnalysis& a = v.analysis;
  int k = a.flag.derived_length();
  if (k == 0) {
    v.failures.push_back("distribution is already integrable (derived length 0)");
    return;
  }
  if (a.flag.ranks().back() != chart_dim)
    v.failures.push_back("derived flag stabilizes below the full tangent bundle");
  v.signature = a.decel;
  v.delta_k = a.vel.rho.back();
  for (int d : a.decel.rho)
    if (d < 0) {
      v.failures.push_back("deceleration is not a signature (negative entry)");
      return;
    }
  int pad = chi0_free ? a.type.rows[0][0] - (1 + a.decel.num_chains()) : 0;
  if (pad < 0) {
    v.failures.push_back("rank of the bundle is below 1 + number of chains");
    return;
  }
  compare_type(a.type, brunovsky_type(a.decel, pad), chi0_free, v.failures);
  for (int i = 1; i <= k - 1; ++i)
    if (!is_involutive(a.intersections[(size_t)i - 1]))
      v.failures.push_back("intersection bundle Char V^(" + std::to_string(i) +
                           ")_" + std::to_string(i - 1) + " is not integrable");
  // For Delta_k > 1 the type relations do not suffice; the fundamental
  // bundle must also be integrable of corank 1 + Delta_k. Char V^(1)_0 is
  // only an invariant bundle when k >= 2.
  if (v.failures.empty() && v.delta_k > 1 && k >= 2) check_fundamental(v);
}

// Fundamental bundle Pi^k = span{ad(Z)^j Pi^0 : 0 <= j <= k-1} with
// Pi^0 = Char V^(1)_0 and Z the time-normalized drift section. For a Goursat
// bundle it is integrable with corank 1 + Delta_k; when Delta_k > 1 this is
// an independent condition and is checked here.
Distribution fundamental_bundle_of(const FlagAnalysis& a, const VectorField& Z) {
  int k = a.flag.derived_length();
  Distribution pi = a.intersections.empty()
                        ? intersect(a.flag.bundles[0], a.cauchy[1])
                        : a.intersections[0];
  pi = echelon_basis(pi);
  Distribution level = pi;
  for (int j = 1; j <= k - 1; ++j) {
    Distribution next(pi.chart);
    for (const VectorField& g : level.gens) next.gens.push_back(bracket(Z, g));
    for (const VectorField& g : next.gens) pi.gens.push_back(g);
    level = std::move(next);
    pi = echelon_basis(pi);
  }
  return pi;
}

// Picks the unique flag generator with nonzero time component, normalized so
// that Z(t) = 1.
VectorField time_section(const FlagAnalysis& a) {
  int ti = a.flag.bundles[0].chart->time_index();
  for (const VectorField& g : a.flag.bundles[0].gens)
    if (!g.c[(size_t)ti].zero_normal_form())
      return g.scaled(Expr::one() / g.c[(size_t)ti]);
  throw GctError(ErrCode::BadInput, "no generator with Z(t) != 0");
}

void check_fundamental(GoursatVerdict& v) {
  const FlagAnalysis& a = v.analysis;
  int k = a.flag.derived_length();
  int ti = a.flag.bundles[0].chart->time_index();
  // t must be a first integral of Char V^(k-1) to serve as tau.
  for (const VectorField& g : a.cauchy[(size_t)k - 1].gens)
    if (!g.c[(size_t)ti].zero_normal_form()) {
      v.failures.push_back(
          "t is not a first integral of Char V^(k-1); no canonical tau");
      return;
    }
  Distribution pi = fundamental_bundle_of(a, time_section(a));
  int corank = a.flag.bundles[0].chart->dim() - (int)pi.gens.size();
  if (corank != 1 + v.delta_k)
    v.failures.push_back("fundamental bundle has corank " +
                         std::to_string(corank) + ", expected " +
                         std::to_string(1 + v.delta_k));
  else if (!is_involutive(pi))
    v.failures.push_back("fundamental bundle is not integrable");
}

Distribution control_span(const ControlSystem& C) {
  Distribution d(C.chart);
  for (int ui : C.control_indices()) d.gens.push_back(coordinate_field(C.chart, ui));
  return d;
}

// Char V^(1)_0 from an analysis (falls back to a direct intersection when the
// derived length is 1).
Distribution char_v1_0(const FlagAnalysis& a) {
  if (!a.intersections.empty()) return a.intersections[0];
  return intersect(a.flag.bundles[0], a.cauchy[1]);
}

void check_feedback_conditions(GoursatVerdict& v, const ControlSystem& C) {
  const FlagAnalysis& a = v.analysis;
  int k = a.flag.derived_length();
  if (k == 0) return;
  if (k >= 2) {  // Char V^(1)_0 is only an invariant bundle for k >= 2
    Distribution ctrl = control_span(C);
    Distribution c10 = char_v1_0(a);
    if (!same_span(c10, ctrl))
      v.failures.push_back("Char V^(1)_0 is not the span of the control directions");
  }
  if (v.delta_k == 1 && k >= 1) {
    int ti = C.chart->time_index();
    for (const VectorField& g : a.cauchy[(size_t)k - 1].gens)
      if (!g.c[(size_t)ti].zero_normal_form()) {
        v.failures.push_back("dt does not annihilate Char V^(k-1)");
        break;
      }
  }
}

void relative_feedback_conditions(GoursatVerdict& v, const ControlSystem& C) {
  const FlagAnalysis& a = v.analysis;
  int k = a.flag.derived_length();
  if (k == 0) return;
  if (k >= 2) {
    Distribution ctrl = control_span(C);
    Distribution c10 = char_v1_0(a);
    if (!contains_dist(c10, ctrl))
      v.failures.push_back("control directions are not contained in Char V-hat^(1)_0");
  }
  if (v.delta_k == 1) {
    int ti = C.chart->time_index();
    for (const VectorField& g : a.cauchy[(size_t)k - 1].gens)
      if (!g.c[(size_t)ti].zero_normal_form()) {
        v.failures.push_back("dt does not annihilate Char V-hat^(k-1)");
        break;
      }
  }
}

}  // namespace

BrunovskyForm build_brunovsky(const Signature& kappa, const std::string& prefix) {
  if (kappa.rho.empty() || kappa.rho.back() < 1)
    throw GctError(ErrCode::BadInput, "signature must be nonempty with rho_k >= 1");
  BrunovskyForm b;
  b.kappa = kappa;
  auto ch = std::make_shared<Chart>();
  SymId t = symtab().coord("t");
  symtab().set_time(t);
  ch->add(t, {RoleKind::Time, "", 0});
  auto chains = make_chains(kappa, prefix);
  for (const auto& ci : chains)
    for (int l = 0; l < ci.top; ++l)
      ch->add(ci.jets[(size_t)l], {RoleKind::State, ci.var, l});
  for (const auto& ci : chains)
    ch->add(ci.jets[(size_t)ci.top], {RoleKind::Control, ci.var, ci.top});
  ch->validate();
  b.chart = ch;
  b.system.chart = ch;
  for (const auto& ci : chains)
    for (int l = 0; l < ci.top; ++l)
      b.system.drift.push_back(Expr::sym(ci.jets[(size_t)l + 1]));
  b.bundle = b.system.distribution();
  int ti = ch->time_index();
  for (const auto& ci : chains)
    for (int l = 0; l < ci.top; ++l) {
      OneForm w(b.chart);
      w.c[(size_t)ch->index_of(ci.jets[(size_t)l])] = Expr::one();
      w.c[(size_t)ti] = -Expr::sym(ci.jets[(size_t)l + 1]);
      b.pfaff.push_back(std::move(w));
    }
  return b;
}

RefinedDerivedType brunovsky_type(const Signature& kappa, int pad) {
  int k = kappa.k();
  int m = kappa.num_chains();
  std::vector<int> mj((size_t)k + 1);
  mj[0] = 1 + m;
  for (int j = 1; j <= k; ++j) {
    int delta = 0;
    for (int i = j; i <= k; ++i) delta += kappa.rho[(size_t)i - 1];
    mj[(size_t)j] = mj[(size_t)j - 1] + delta;
  }
  RefinedDerivedType t;
  t.rows.push_back({mj[0] + pad, 2 * mj[0] - mj[1] - 1 + pad});
  for (int j = 1; j <= k - 1; ++j)
    t.rows.push_back({mj[(size_t)j] + pad, mj[(size_t)j - 1] - 1 + pad,
                      2 * mj[(size_t)j] - mj[(size_t)j + 1] - 1 + pad});
  t.rows.push_back({mj[(size_t)k] + pad, mj[(size_t)k] + pad});
  return t;
}

GoursatVerdict goursat_test(const Distribution& D) {
  GoursatVerdict v;
  v.analysis = analyze_flag(D);
  check_core(v, D.chart->dim(), /*chi0_free=*/false);
  v.is_goursat = v.failures.empty();
  return v;
}

GoursatVerdict sfl_test(const ControlSystem& C) {
  GoursatVerdict v = goursat_test(C.distribution());
  check_feedback_conditions(v, C);
  v.is_goursat = v.is_goursat && v.failures.empty();
  v.is_sfl = v.failures.empty();
  return v;
}

GoursatVerdict relative_goursat_test(const ControlSystem& C,
                                     const Distribution& Gamma) {
  Distribution V = C.distribution();
  if (!cauchy_bundle(V).gens.empty())
    throw GctError(ErrCode::BadInput,
                   "relative Goursat test requires trivial Char V");
  DerivedFlag vf = derived_flag(V);
  const Distribution& v1 =
      vf.bundles[vf.derived_length() >= 1 ? 1 : 0];
  if (!Gamma.gens.empty() && !intersect(Gamma, v1).gens.empty())
    throw GctError(ErrCode::NotStronglyTransverse,
                   "symmetry algebra meets V^(1): strong transversality fails");
  Distribution vhat = V;
  for (const VectorField& g : Gamma.gens) vhat.gens.push_back(g);
  GoursatVerdict v;
  v.analysis = analyze_flag(vhat);
  check_core(v, C.chart->dim(), /*chi0_free=*/true);
  relative_feedback_conditions(v, C);
  v.is_goursat = v.failures.empty();
  v.is_sfl = v.is_goursat;
  return v;
}

}  // namespace gct
