#pragma once
// Contact coordinates for static feedback linearizable systems: the
// fundamental bundle, first integrals of integrable distributions (via a
// coordinate / polynomial-ansatz / user-candidate cascade), and the full
// construction of the linearizing transformation by iterated Lie
// differentiation of the fundamental functions.
#include <optional>
#include <string>
#include <vector>

#include "geometry/maps.hpp"
#include "goursat/goursat.hpp"

namespace gct {

struct FirstIntegralBasis {
  std::vector<Expr> integrals;
  std::string method;  // "coordinate", "polynomial-ansatz", "user-supplied", "mixed"
};

// Pi^k = span{Pi^0, ad(Z)Pi^0, ..., ad(Z)^{k-1} Pi^0}, Pi^0 = Char V^(1)_0.
// Requires Z in D with Z(tau) = 1; the result is verified integrable of
// corank 1 + Delta_k.
Distribution fundamental_bundle(const Distribution& D, const VectorField& Z,
                                const Expr& tau, int k);

struct IntegralOptions {
  int degree_budget = 4;
  std::vector<Expr> candidates;  // user-supplied, verified before the ansatz
  std::vector<Expr> known;       // integrals to be independent of
};

// Rank of the differentials of funcs with respect to the chart coordinates.
int differential_rank(const std::vector<Expr>& funcs, const ChartPtr& chart);

// Exactly `count` independent first integrals of the integrable
// distribution D, or IntegralSearchExhausted. Strategy cascade: unused
// coordinates, then user candidates, then a polynomial ansatz of increasing
// total degree over the symbols appearing in the generators.
FirstIntegralBasis first_integrals(const Distribution& D, int count,
                                   const IntegralOptions& opt = {});

struct ContactTransformation {
  CoordMap map;          // system chart -> jet chart of the normal form
  BrunovskyForm target;  // the normal form the system is equivalent to
  VectorField Z;         // drift field used for Lie differentiation
  Expr tau;              // the time integral (t)
  Signature kappa;
};

// Full contact-coordinate construction for a system that passed sfl_test.
// The returned transformation is verified: states of the normal form are
// control-independent, the control-to-top-jet block has full rank, and the
// Jacobian has full generic rank. Candidates are offered to every
// first-integral search (each search verifies them before use).
ContactTransformation contact_coordinates(const ControlSystem& C,
                                          const std::string& prefix = "z",
                                          int degree_budget = 4,
                                          const std::vector<Expr>& candidates = {});

}  // namespace gct
