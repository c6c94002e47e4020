#pragma once
// Shared test fixtures: classical benchmark systems used across suites.
#include <memory>
#include <string>
#include <vector>

#include "exprcore/random.hpp"
#include "flags/flags.hpp"
#include "geometry/maps.hpp"
#include "geometry/system.hpp"
#include "goursat/goursat.hpp"
#include "symmetry/symmetry.hpp"

namespace gct::testfx {

// Builds a chart with one time coordinate, the named states, then controls.
inline ChartPtr make_chart(const std::vector<std::string>& states,
                           const std::vector<std::string>& controls) {
  auto ch = std::make_shared<Chart>();
  ch->add(symtab().coord("t"), {RoleKind::Time, "", 0});
  symtab().set_time(symtab().coord("t"));
  for (auto& s : states) ch->add(symtab().coord(s), {RoleKind::State, "", 0});
  for (auto& s : controls) ch->add(symtab().coord(s), {RoleKind::Control, "", 0});
  ch->validate();
  return ch;
}

inline Expr S(const std::string& n) { return Expr::sym(symtab().coord(n)); }

// Hunt-Su-Meyer style five-state two-input benchmark:
//   x1' = sin x2, x2' = sin x3, x3' = x4^3 + u1,
//   x4' = x5 + x4^3 - x1^10, x5' = u2.
inline ControlSystem make_hsm() {
  ControlSystem sys;
  sys.chart = make_chart({"x1", "x2", "x3", "x4", "x5"}, {"u1", "u2"});
  sys.drift = {Expr::sin(S("x2")), Expr::sin(S("x3")),
               S("x4").pow(3) + S("u1"),
               S("x5") + S("x4").pow(3) - S("x1").pow(10), S("u2")};
  return sys;
}

// Charlet-Levine-Marino style four-state two-input benchmark:
//   x1' = x2, x2' = u1, x3' = u2, x4' = x3 (1 - u1).
inline ControlSystem make_charlet() {
  ControlSystem sys;
  sys.chart = make_chart({"x1", "x2", "x3", "x4"}, {"u1", "u2"});
  sys.drift = {S("x2"), S("u1"), S("u2"), S("x3") * (Expr::one() - S("u1"))};
  return sys;
}

// Quotient of the Marino-benchmark system by its scaling symmetry, on
// invariant coordinates (t, q1..q4) and controls (v1, v2).
inline ControlSystem make_marino_quotient() {
  ControlSystem sys;
  sys.chart = make_chart({"q1", "q2", "q3", "q4"}, {"v1", "v2"});
  Expr q1 = S("q1"), q2 = S("q2"), q4 = S("q4");
  sys.drift = {-(q1 * q2 * q4 + q1.pow(2) - q2 - q4),
               -(q2.pow(2) * q4 + q1 * q2 - S("v1")), q4, S("v2")};
  return sys;
}

// Marino-benchmark five-state system (not static feedback linearizable;
// carries the scaling symmetry x1,x2,x3,u1 -> s*(x1,x2,x3,u1)).
inline ControlSystem make_marino() {
  ControlSystem sys;
  sys.chart = make_chart({"x1", "x2", "x3", "x4", "x5"}, {"u1", "u2"});
  sys.drift = {S("x5") * S("x3") + S("x2"), S("x5") * S("x1") + S("x3"),
               S("u1"), S("x5"), S("u2")};
  return sys;
}

// Quotient of the Charlet benchmark by translation in x4 (drops x4).
inline ControlSystem make_charlet_quotient() {
  ControlSystem sys;
  sys.chart = make_chart({"x1", "x2", "x3"}, {"u1", "u2"});
  sys.drift = {S("x2"), S("u1"), S("u2")};
  return sys;
}

// Planar VTOL aircraft: states (x, x1, z, z1, th, th1), controls (u1, u2),
// thrust offset h.
inline ControlSystem make_pvtol() {
  symtab().constant("h");
  ControlSystem sys;
  sys.chart = make_chart({"x", "x1", "z", "z1", "th", "th1"}, {"u1", "u2"});
  Expr h = Expr::sym(symtab().constant("h"));
  Expr s = Expr::sin(S("th")), c = Expr::cos(S("th"));
  sys.drift = {S("x1"),
               -S("u1") * s + h * S("u2") * c,
               S("z1"),
               S("u1") * c + h * S("u2") * s - Expr::one(),
               S("th1"),
               S("u2")};
  return sys;
}

// Galilean boosts and translations acting on the VTOL system.
inline Distribution pvtol_galilean_gamma(const ChartPtr& ch, bool four_dim = false) {
  auto cf = [&](const std::string& n) {
    return coordinate_field(ch, ch->index_of(symtab().coord(n)));
  };
  Expr t = Expr::sym(symtab().coord("t"));
  Distribution g(ch);
  g.gens.push_back(cf("x").scaled(t) + cf("x1"));
  g.gens.push_back(cf("x"));
  g.gens.push_back(cf("z"));
  if (four_dim) g.gens.push_back(cf("z").scaled(t) + cf("z1"));
  return g;
}

// The two-dimensional abelian symmetry of the VTOL system mixing attitude
// oscillation with vertical translation.
inline Distribution pvtol_oscillation_gamma(const ChartPtr& ch) {
  auto cf = [&](const std::string& n) {
    return coordinate_field(ch, ch->index_of(symtab().coord(n)));
  };
  Expr h = Expr::sym(symtab().constant("h"));
  Expr s = Expr::sin(S("th")), c = Expr::cos(S("th"));
  Expr th1 = S("th1"), x = S("x"), x1 = S("x1");
  Expr u1 = S("u1"), u2 = S("u2");
  Expr two = Expr::from_int(2), three = Expr::from_int(3);
  VectorField X1 =
      cf("x").scaled(h * s.pow(2) * c) +
      cf("x1").scaled(h * th1 * (three * c.pow(2) - Expr::one()) * s) +
      cf("z").scaled(x - h * s * c.pow(2)) +
      cf("z1").scaled(x1 + two * h * th1 * c - three * h * th1 * c.pow(3)) +
      cf("th").scaled(s.pow(2)) +
      cf("th1").scaled(two * th1 * s * c) +
      cf("u1").scaled(c * s * (Expr::from_int(5) * h * th1.pow(2) - u1)) +
      cf("u2").scaled(two * th1.pow(2) * (two * c.pow(2) - Expr::one()) +
                      two * u2 * s * c);
  Distribution g(ch);
  g.gens.push_back(X1);
  g.gens.push_back(cf("z"));
  return g;
}

// Quotient of the VTOL system by the Galilean symmetry, on invariants
// (t, q1=th, q2=th1, q3=z1) with controls (v1, v2).
inline ControlSystem make_pvtol_galilean_quotient() {
  symtab().constant("h");
  ControlSystem sys;
  sys.chart = make_chart({"q1", "q2", "q3"}, {"v1", "v2"});
  Expr h = Expr::sym(symtab().constant("h"));
  sys.drift = {S("q2"), S("v2"),
               S("v1") * Expr::cos(S("q1")) + h * S("v2") * Expr::sin(S("q1")) -
                   Expr::one()};
  return sys;
}

// Time-varying benchmark in 6 states and 2 controls that admits no
// linearization by differentiating the given inputs, yet is cascade
// feedback linearizable through its three-dimensional abelian symmetry.
inline ControlSystem make_tvtol() {
  ControlSystem sys;
  sys.chart = make_chart({"x1", "x2", "x3", "x4", "x5", "x6"}, {"u1", "u2"});
  Expr x1 = S("x1"), x2 = S("x2"), x3 = S("x3"), x4 = S("x4"), x5 = S("x5");
  Expr x6 = S("x6"), u1 = S("u1"), u2 = S("u2");
  sys.drift = {x2,
               -x2 * u1 * (x1 + x5) + u2,
               x3.pow(2) * x4,
               -x5 * (x1 * x2 * u1 - u2) + x2 * u1 - Expr::one(),
               x6,
               u2 - x1 * x2 * u1};
  return sys;
}

// The abelian symmetry algebra of the time-varying benchmark.
inline Distribution tvtol_gamma(const ChartPtr& ch) {
  auto cf = [&](const std::string& n) {
    return coordinate_field(ch, ch->index_of(symtab().coord(n)));
  };
  Expr t = S("t"), x2 = S("x2"), x3 = S("x3"), u1 = S("u1");
  Distribution g(ch);
  g.gens.push_back(cf("x1").scaled(t) + cf("x2") - cf("u1").scaled(u1 / x2) +
                   cf("u2").scaled(t * x2 * u1));
  g.gens.push_back(cf("x1") + cf("u2").scaled(x2 * u1));
  g.gens.push_back(cf("x3").scaled(x3.pow(2)));
  return g;
}

// A four-input contact sub-connection given directly in normal form: chains
// z1 (order 1), z2, z3 (order 2), z4 (order 3) over a three-dimensional
// abelian group, with coefficients z2_2*z4_3, z2_2*z1_1, z3_2*z1_1.
inline SubConnection make_fourinput_subconnection() {
  BrunovskyForm b = build_brunovsky(Signature({1, 2, 1}), "z");
  int jd = b.chart->dim();
  auto lch = std::make_shared<Chart>();
  for (int i = 0; i < jd; ++i) lch->add(b.chart->coord(i), b.chart->role(i));
  for (int a = 1; a <= 3; ++a)
    lch->add(symtab().coord("eps" + std::to_string(a)), {RoleKind::Group, "", 0});
  lch->validate();
  ChartPtr lcp = lch;
  SubConnection H;
  H.chart = lcp;
  H.kappa = b.kappa;
  for (int a = 0; a < 3; ++a) H.group.push_back(jd + a);
  H.lambda = {S("z2_2") * S("z4_3"), S("z2_2") * S("z1_1"),
              S("z3_2") * S("z1_1")};
  VectorField Dt(lcp);
  Dt.c[(size_t)lcp->time_index()] = Expr::one();
  for (auto& [var, idxs] : b.chart->jet_vars())
    for (size_t l = 0; l + 1 < idxs.size(); ++l)
      Dt.c[(size_t)idxs[l]] = Expr::sym(b.chart->coord(idxs[l + 1]));
  for (int a = 0; a < 3; ++a) Dt.c[(size_t)(jd + a)] = H.lambda[(size_t)a];
  Distribution hg(lcp);
  hg.gens.push_back(std::move(Dt));
  for (int i = 0; i < jd; ++i)
    if (b.chart->role(i).kind == RoleKind::Control)
      hg.gens.push_back(coordinate_field(lcp, i));
  H.HG = std::move(hg);
  // Identity placeholder: this sub-connection is not tied to an upstream
  // system, so the lift is the identity on its own chart.
  H.lift = CoordMap(lcp, lcp);
  for (int i = 0; i < lcp->dim(); ++i)
    H.lift.comp[(size_t)i] = Expr::sym(lcp->coord(i));
  return H;
}

// A benchmark system bundled with its symmetry algebra and verified contact
// sub-connection, ready for partial contact curve reduction.
struct CascadeSetup {
  ControlSystem sys;
  SymmetryAlgebra G;
  SubConnection H;
};

inline CascadeSetup charlet_setup() {
  CascadeSetup cs;
  cs.sys = make_charlet();
  Distribution g(cs.sys.chart);
  g.gens.push_back(coordinate_field(
      cs.sys.chart, cs.sys.chart->index_of(symtab().coord("x4"))));
  cs.G = make_symmetry_algebra(g);
  QuotientData Q = quotient_system(cs.sys, cs.G);
  ContactTransformation phi = contact_coordinates(Q.quotient);
  cs.H = trivialize(cs.sys, cs.G, Q, phi);
  return cs;
}

inline CascadeSetup pvtol_galilean_setup() {
  CascadeSetup cs;
  cs.sys = make_pvtol();
  cs.G = make_symmetry_algebra(pvtol_galilean_gamma(cs.sys.chart));
  std::vector<Expr> inv = {S("th"), S("th1"), S("z1"), S("u1"), S("u2")};
  QuotientData Q = quotient_system(cs.sys, cs.G, inv);
  ContactTransformation phi = contact_coordinates(Q.quotient);
  cs.H = trivialize(cs.sys, cs.G, Q, phi);
  return cs;
}

inline CascadeSetup tvtol_setup() {
  CascadeSetup cs;
  cs.sys = make_tvtol();
  cs.G = make_symmetry_algebra(tvtol_gamma(cs.sys.chart));
  std::vector<Expr> inv = {S("x4"), S("x5"), S("x6"), S("x2") * S("u1"),
                           S("u2") - S("x1") * S("x2") * S("u1")};
  std::vector<Expr> eps = {S("x2") - Expr::one(),
                           S("x1") - S("t") * (S("x2") - Expr::one()),
                           Expr::one() - Expr::one() / S("x3")};
  QuotientData Q = quotient_system(cs.sys, cs.G, inv, eps);
  ContactTransformation phi = contact_coordinates(Q.quotient);
  cs.H = trivialize(cs.sys, cs.G, Q, phi);
  return cs;
}

// The VTOL system under its oscillation symmetry: the trivialization is not
// rationally invertible, so the sub-connection is assembled from an explicit
// lift and verified with candidate connection coefficients.
inline CascadeSetup pvtol_oscillation_setup() {
  CascadeSetup cs;
  cs.sys = make_pvtol();
  cs.G = make_symmetry_algebra(pvtol_oscillation_gamma(cs.sys.chart));
  Expr h = Expr::sym(symtab().constant("h"));
  Expr c0 = Expr::sym(symtab().constant("invsqrt2"));
  Expr s = Expr::sin(S("th")), c = Expr::cos(S("th"));
  Expr x = S("x"), x1 = S("x1"), z = S("z"), th1 = S("th1"), u1 = S("u1");
  VectorField Z = cs.sys.drift_field();

  BrunovskyForm target = build_brunovsky(Signature({0, 2}));
  auto lch = std::make_shared<Chart>();
  for (int i = 0; i < target.chart->dim(); ++i)
    lch->add(target.chart->coord(i), target.chart->role(i));
  lch->add(symtab().coord("eps1"), {RoleKind::Group, "", 0});
  lch->add(symtab().coord("eps2"), {RoleKind::Group, "", 0});
  lch->validate();

  CoordMap lift(cs.sys.chart, std::const_pointer_cast<const Chart>(lch));
  auto set = [&](const std::string& n, const Expr& e) {
    lift.comp[(size_t)lch->index_of(symtab().coord(n))] = e;
  };
  Expr z0 = (x1 * c - h * th1) / s + S("z1");
  Expr z1c = (h * th1.pow(2) * c - th1 * x1) / s.pow(2) - Expr::one();
  set("t", S("t"));
  set("z1_0", z0);
  set("z1_1", z1c);
  set("z1_2", Z.apply(z1c));
  set("z2_0", x - h * s);
  set("z2_1", x1 - h * th1 * c);
  set("z2_2", (h * th1.pow(2) - u1) * s);
  set("eps1", Expr::one() - c / s);
  set("eps2", z - x - h * c0 + h * s + x * c / s);

  Expr l1 = -(Expr::one() + S("z1_1")) / S("z2_1");
  Expr l2 = (S("z2_1") * (S("z1_0") - S("z2_1")) +
             S("z2_0") * (Expr::one() + S("z1_1"))) /
            S("z2_1");
  cs.H = verify_sub_connection(cs.sys, cs.G, target, lift, {l1, l2});
  return cs;
}

// Random signature with 1 <= k <= kmax levels, entries <= rhomax, rho_k >= 1.
inline Signature random_signature(Rng& r, int kmax = 4, int rhomax = 3) {
  int k = (int)r.range(1, kmax);
  std::vector<int> rho((size_t)k);
  for (int i = 0; i < k - 1; ++i) rho[(size_t)i] = (int)r.range(0, rhomax);
  rho[(size_t)k - 1] = (int)r.range(1, rhomax);
  return Signature(rho);
}

// Triangular polynomial diffeomorphism: y_i = x_i + p_i(x_0..x_{i-1}),
// time fixed. Fresh target coordinate names use the given prefix.
inline CoordMap random_triangular_diffeo(const ChartPtr& src, Rng& r,
                                         const std::string& prefix) {
  auto tgt = std::make_shared<Chart>();
  for (int i = 0; i < src->dim(); ++i) {
    if (src->role(i).kind == RoleKind::Time)
      tgt->add(src->coord(i), src->role(i));
    else
      tgt->add(symtab().coord(prefix + std::to_string(i)), src->role(i));
  }
  CoordMap phi(src, tgt);
  for (int i = 0; i < src->dim(); ++i) {
    Expr e = Expr::sym(src->coord(i));
    if (src->role(i).kind != RoleKind::Time && i > 0) {
      // quadratic perturbation in strictly earlier coordinates
      int a = (int)r.range(0, i - 1), b = (int)r.range(0, i - 1);
      e = e + Expr::from_rat(r.rat()) * Expr::sym(src->coord(a)) *
                  Expr::sym(src->coord(b)) +
          Expr::from_rat(r.rat()) * Expr::sym(src->coord(a));
    }
    phi.comp[(size_t)i] = e;
  }
  return phi;
}

}  // namespace gct::testfx
