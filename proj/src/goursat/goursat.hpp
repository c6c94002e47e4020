#pragma once
// Brunovsky normal form constructors and the decision procedures: Goursat
// bundle test, static feedback linearizability (SFL) test, and the relative
// Goursat test for symmetry quotients.
#include <string>
#include <vector>

#include "flags/flags.hpp"
#include "geometry/system.hpp"

namespace gct {

struct BrunovskyForm {
  Signature kappa;
  ChartPtr chart;       // t, then jets per chain; top-order jets are controls
  ControlSystem system; // drift z^a_l -> z^a_{l+1}
  Distribution bundle;  // span{D_t, d/dz^a_top}
  std::vector<OneForm> pfaff;  // eta^a_l = dz^a_l - z^a_{l+1} dt
};

// Mixed-order Brunovsky form of the given signature; chains are named
// prefix1, prefix2, ... in increasing order.
BrunovskyForm build_brunovsky(const Signature& kappa,
                              const std::string& prefix = "z");

// The refined derived type of the Brunovsky form of signature kappa,
// computed from the closed-form relations (m0 = 1+m, chi^j = 2m_j -
// m_{j+1} - 1, chi^i_{i-1} = m_{i-1} - 1); every entry shifted by pad
// (used for relative types, where a symmetry algebra of dimension pad is
// adjoined fiberwise).
RefinedDerivedType brunovsky_type(const Signature& kappa, int pad = 0);

struct GoursatVerdict {
  bool is_goursat = false;
  bool is_sfl = false;  // only meaningful from sfl_test / relative test
  Signature signature;  // decel; the candidate kappa
  int delta_k = 0;
  std::vector<std::string> failures;
  FlagAnalysis analysis;
};

// Checks that D is a Goursat bundle: refined derived type matches the
// Brunovsky relations for kappa = decel(D), and every intersection bundle
// Char V^(i)_{i-1} is integrable.
GoursatVerdict goursat_test(const Distribution& D);

// Goursat test plus the feedback conditions: Char V^(1)_0 = span{d/du},
// and dt annihilates Char V^(k-1) when Delta_k = 1.
GoursatVerdict sfl_test(const ControlSystem& C);

// Tests whether V-hat = V + Gamma is a static feedback relative Goursat
// bundle; the verdict's signature is the predicted quotient signature
// decel(V-hat). Gamma must be strongly transverse: Gamma /\ V^(1) = 0.
GoursatVerdict relative_goursat_test(const ControlSystem& C,
                                     const Distribution& Gamma);

}  // namespace gct
