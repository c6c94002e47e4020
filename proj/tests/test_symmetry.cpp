#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exprcore/errors.hpp"
#include "fixtures.hpp"
#include "symmetry/symmetry.hpp"

using namespace gct;
using namespace gct::testfx;

namespace {

struct World {
  World() {
    reset_symtab();
    set_global_seed(42);
  }
};

VectorField cf(const ChartPtr& ch, const std::string& n) {
  return coordinate_field(ch, ch->index_of(symtab().coord(n)));
}

bool expr_eq(const Expr& a, const Expr& b) { return is_zero(a - b); }

Distribution marino_gamma(const ChartPtr& ch) {
  Distribution g(ch);
  g.gens.push_back(cf(ch, "x1").scaled(S("x1")) + cf(ch, "x2").scaled(S("x2")) +
                   cf(ch, "x3").scaled(S("x3")) + cf(ch, "u1").scaled(S("u1")));
  return g;
}

}  // namespace

TEST_CASE_FIXTURE(World, "structure constants of a solvable pair") {
  auto ch = make_chart({"x1", "x2"}, {});
  Distribution g(ch);
  g.gens.push_back(cf(ch, "x1"));
  g.gens.push_back(cf(ch, "x1").scaled(S("x1")));
  SymmetryAlgebra a = make_symmetry_algebra(g);
  CHECK_FALSE(a.abelian);
  CHECK(a.structure[0][1][0] == 1);  // [d/dx, x d/dx] = d/dx
  CHECK(a.structure[0][1][1] == 0);
}

TEST_CASE_FIXTURE(World, "non-closed generators are rejected") {
  auto ch = make_chart({"x1", "x2"}, {});
  Distribution g(ch);
  g.gens.push_back(cf(ch, "x1").scaled(S("x2")));
  g.gens.push_back(cf(ch, "x2").scaled(S("x1")));
  CHECK_THROWS_AS((void)make_symmetry_algebra(g), GctError);
}

TEST_CASE_FIXTURE(World, "scaling symmetry of the Marino benchmark is admissible") {
  auto marino = make_marino();
  SymmetryAlgebra G = make_symmetry_algebra(marino_gamma(marino.chart));
  CHECK(G.abelian);
  AdmissibilityReport rep = check_control_admissible(marino, G);
  CHECK(rep.admissible);
}

TEST_CASE_FIXTURE(World, "four-dimensional Galilean algebra fails transversality") {
  auto pvtol = make_pvtol();
  SymmetryAlgebra G =
      make_symmetry_algebra(pvtol_galilean_gamma(pvtol.chart, /*four_dim=*/true));
  AdmissibilityReport rep = check_control_admissible(pvtol, G);
  CHECK_FALSE(rep.admissible);
  bool transversality = false;
  for (const auto& f : rep.failures)
    if (f.find("transversality") != std::string::npos) transversality = true;
  CHECK(transversality);
}

TEST_CASE_FIXTURE(World, "an algebra containing the drift is inadmissible") {
  auto hsm = make_hsm();
  Distribution g(hsm.chart);
  g.gens.push_back(hsm.drift_field());
  SymmetryAlgebra G = make_symmetry_algebra(g);
  AdmissibilityReport rep = check_control_admissible(hsm, G);
  CHECK_FALSE(rep.admissible);
}

TEST_CASE_FIXTURE(World, "Marino quotient on supplied invariants") {
  auto marino = make_marino();
  SymmetryAlgebra G = make_symmetry_algebra(marino_gamma(marino.chart));
  std::vector<Expr> inv = {S("x2") / S("x1"), S("x3") / S("x1"), S("x4"),
                           S("x5"), S("u1") / S("x1"), S("u2")};
  QuotientData Q = quotient_system(marino, G, inv);
  Expr q1 = S("q1"), q2 = S("q2"), q4 = S("q4");
  REQUIRE(Q.quotient.drift.size() == 4);
  CHECK(expr_eq(Q.quotient.drift[0], -(q1 * q2 * q4 + q1.pow(2) - q2 - q4)));
  CHECK(expr_eq(Q.quotient.drift[1], -(q2.pow(2) * q4 + q1 * q2 - S("v1"))));
  CHECK(expr_eq(Q.quotient.drift[2], q4));
  CHECK(expr_eq(Q.quotient.drift[3], S("v2")));
  // The scaling action has no translation-type group coordinates; the greedy
  // section picks the first transversal coordinate, x1.
  CHECK_FALSE(Q.section_is_group);
  REQUIRE(Q.section.size() == 1);
  CHECK(expr_eq(Q.section[0], S("x1")));
  // Chain-rule consistency: quotient drift composed with the projection
  // reproduces Z(q_i) upstairs.
  VectorField Z = marino.drift_field();
  for (size_t i = 0; i < 4; ++i)
    CHECK(is_zero(Q.quotient.drift[i].subs(Q.projection) -
                  Z.apply(Q.invariants[1 + i])));
}

TEST_CASE_FIXTURE(World, "Charlet quotient is found fully automatically") {
  auto charlet = make_charlet();
  Distribution g(charlet.chart);
  g.gens.push_back(cf(charlet.chart, "x4"));
  SymmetryAlgebra G = make_symmetry_algebra(g);
  QuotientData Q = quotient_system(charlet, G);
  REQUIRE(Q.quotient.drift.size() == 3);
  CHECK(expr_eq(Q.quotient.drift[0], S("q2")));
  CHECK(expr_eq(Q.quotient.drift[1], S("v1")));
  CHECK(expr_eq(Q.quotient.drift[2], S("v2")));
  CHECK(Q.section_is_group);  // translation: eps = x4
  CHECK(expr_eq(Q.section[0], S("x4")));
}

TEST_CASE_FIXTURE(World, "tVTOL quotient on supplied invariants") {
  auto sys = make_tvtol();
  SymmetryAlgebra G = make_symmetry_algebra(tvtol_gamma(sys.chart));
  CHECK(G.abelian);
  std::vector<Expr> inv = {S("x4"), S("x5"), S("x6"), S("x2") * S("u1"),
                           S("u2") - S("x1") * S("x2") * S("u1")};
  std::vector<Expr> eps = {S("x2") - Expr::one(),
                           S("x1") - S("t") * (S("x2") - Expr::one()),
                           Expr::one() - Expr::one() / S("x3")};
  QuotientData Q = quotient_system(sys, G, inv, eps);
  CHECK(Q.section_is_group);
  REQUIRE(Q.quotient.drift.size() == 3);
  CHECK(expr_eq(Q.quotient.drift[0],
                S("v2") * S("q2") + S("v1") - Expr::one()));
  CHECK(expr_eq(Q.quotient.drift[1], S("q3")));
  CHECK(expr_eq(Q.quotient.drift[2], S("v2")));
}

TEST_CASE_FIXTURE(World, "Charlet trivialization yields the connection form") {
  auto charlet = make_charlet();
  Distribution g(charlet.chart);
  g.gens.push_back(cf(charlet.chart, "x4"));
  SymmetryAlgebra G = make_symmetry_algebra(g);
  QuotientData Q = quotient_system(charlet, G);
  ContactTransformation phi = contact_coordinates(Q.quotient);
  SubConnection H = trivialize(charlet, G, Q, phi);
  REQUIRE(H.lambda.size() == 1);
  CHECK(expr_eq(H.lambda[0], S("z1_0") * (Expr::one() - S("z2_2"))));
  CHECK(H.kappa == Signature({1, 1}));
  // H_G = span{D_t + z1_1 dz1_0 + ... + lambda d eps, d top jets}
  REQUIRE(H.HG.gens.size() == 3);
  const VectorField& Dt = H.HG.gens[0];
  CHECK(expr_eq(Dt.c[(size_t)H.chart->time_index()], Expr::one()));
  CHECK(expr_eq(Dt.c[(size_t)H.group[0]], H.lambda[0]));
}

TEST_CASE_FIXTURE(World, "Galilean trivialization of the VTOL system") {
  auto pvtol = make_pvtol();
  SymmetryAlgebra G = make_symmetry_algebra(pvtol_galilean_gamma(pvtol.chart));
  std::vector<Expr> inv = {S("th"), S("th1"), S("z1"), S("u1"), S("u2")};
  QuotientData Q = quotient_system(pvtol, G, inv);
  CHECK(Q.section_is_group);  // Galilean pattern: x1, x - t x1, z
  CHECK(expr_eq(Q.section[0], S("x1")));
  CHECK(expr_eq(Q.section[1], S("x") - S("t") * S("x1")));
  CHECK(expr_eq(Q.section[2], S("z")));
  ContactTransformation phi = contact_coordinates(Q.quotient);
  SubConnection H = trivialize(pvtol, G, Q, phi);
  REQUIRE(H.lambda.size() == 3);
  Expr h = Expr::sym(symtab().constant("h"));
  Expr gblock = ((S("z1_1") + Expr::one()) * Expr::sin(S("z2_0")) -
                 h * S("z2_2")) /
                Expr::cos(S("z2_0"));
  CHECK(expr_eq(H.lambda[0], -gblock));
  CHECK(expr_eq(H.lambda[1], S("t") * gblock));
  CHECK(expr_eq(H.lambda[2], S("z1_0")));
}

TEST_CASE_FIXTURE(World, "tVTOL trivialization of its three-dim symmetry") {
  auto sys = make_tvtol();
  SymmetryAlgebra G = make_symmetry_algebra(tvtol_gamma(sys.chart));
  std::vector<Expr> inv = {S("x4"), S("x5"), S("x6"), S("x2") * S("u1"),
                           S("u2") - S("x1") * S("x2") * S("u1")};
  std::vector<Expr> eps = {S("x2") - Expr::one(),
                           S("x1") - S("t") * (S("x2") - Expr::one()),
                           Expr::one() - Expr::one() / S("x3")};
  QuotientData Q = quotient_system(sys, G, inv, eps);
  ContactTransformation phi = contact_coordinates(Q.quotient);
  SubConnection H = trivialize(sys, G, Q, phi);
  REQUIRE(H.lambda.size() == 3);
  Expr w = S("z2_0"), w2 = S("z2_2"), ztop = S("z1_1");
  Expr lam = w2 * (w.pow(2) + Expr::one()) - w * (ztop + Expr::one());
  CHECK(expr_eq(H.lambda[0], lam));
  CHECK(expr_eq(H.lambda[1], Expr::one() - S("t") * lam));
  CHECK(expr_eq(H.lambda[2], S("z1_0")));
}

TEST_CASE_FIXTURE(World, "oscillation symmetry: verified non-invertible lift") {
  auto pvtol = make_pvtol();
  SymmetryAlgebra G = make_symmetry_algebra(pvtol_oscillation_gamma(pvtol.chart));
  CHECK(G.abelian);
  Expr h = Expr::sym(symtab().constant("h"));
  Expr c0 = Expr::sym(symtab().constant("invsqrt2"));
  Expr s = Expr::sin(S("th")), c = Expr::cos(S("th"));
  Expr x = S("x"), x1 = S("x1"), z = S("z"), th1 = S("th1"), u1 = S("u1");
  VectorField Z = pvtol.drift_field();

  BrunovskyForm target = build_brunovsky(Signature({0, 2}));
  auto lch = std::make_shared<Chart>();
  for (int i = 0; i < target.chart->dim(); ++i)
    lch->add(target.chart->coord(i), target.chart->role(i));
  lch->add(symtab().coord("eps1"), {RoleKind::Group, "", 0});
  lch->add(symtab().coord("eps2"), {RoleKind::Group, "", 0});
  lch->validate();

  CoordMap lift(pvtol.chart, std::const_pointer_cast<const Chart>(lch));
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
  SubConnection H = verify_sub_connection(pvtol, G, target, lift, {l1, l2});
  CHECK(expr_eq(H.lambda[0], l1));
  CHECK(expr_eq(H.lambda[1], l2));
  // A perturbed coefficient must be rejected.
  CHECK_THROWS_AS((void)verify_sub_connection(pvtol, G, target, lift,
                                              {l1 + Expr::one(), l2}),
                  GctError);
}

TEST_CASE_FIXTURE(World, "trivialization requires group coordinates") {
  auto marino = make_marino();
  SymmetryAlgebra G = make_symmetry_algebra(marino_gamma(marino.chart));
  std::vector<Expr> inv = {S("x2") / S("x1"), S("x3") / S("x1"), S("x4"),
                           S("x5"), S("u1") / S("x1"), S("u2")};
  QuotientData Q = quotient_system(marino, G, inv);
  ContactTransformation phi = contact_coordinates(Q.quotient);
  CHECK_THROWS_AS((void)trivialize(marino, G, Q, phi), GctError);
}
