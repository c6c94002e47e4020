#pragma once
// Lie symmetries of control systems: verified symmetry algebras, the
// control-admissibility conditions, quotient control systems on invariant
// coordinates, and the trivialization of the system bundle over the group
// producing the contact sub-connection normal form
//   H_G = span{D_t + sum_a lambda^a d/d eps^a, d/d z^top}.
#include <string>
#include <vector>

#include "contact/contact.hpp"
#include "geometry/maps.hpp"
#include "geometry/system.hpp"

namespace gct {

struct SymmetryAlgebra {
  Distribution gens;
  // structure[a][b][e]: coefficient of generator e in [X_a, X_b].
  std::vector<std::vector<std::vector<mpq_class>>> structure;
  bool abelian = true;
};

// Verifies independence and bracket closure with exact constant structure
// coefficients; throws BadInput otherwise.
SymmetryAlgebra make_symmetry_algebra(const Distribution& gens);

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> failures;  // failed conditions, by name
};

// Conditions for the quotient by the group action to be a control system:
// (a) each generator is a symmetry of the system bundle, (b) time is
// invariant, (c) the projection to (t, x) has full rank, (d) the group
// dimension is below the state dimension, (e) strong transversality
// (the algebra meets V^(1) trivially).
AdmissibilityReport check_control_admissible(const ControlSystem& C,
                                             const SymmetryAlgebra& G);

struct QuotientData {
  std::vector<Expr> invariants;  // on the system chart; quotient-chart order
  ControlSystem quotient;
  // Substitution from the system chart: quotient coordinate -> invariant.
  std::map<SymId, Expr> projection;
  std::vector<Expr> section;  // functions completing the projection to a diffeo
  bool section_is_group = false;  // X_a(section^b) = delta^b_a holds
};

// Quotient control system on the invariants of G. Invariants (excluding t)
// may be supplied in the desired coordinate order, otherwise they are found
// by the first-integral search. The section is auto-derived for translation
// patterns (coefficients polynomial in t), else supplied, else completed
// greedily from chart coordinates.
QuotientData quotient_system(const ControlSystem& C, const SymmetryAlgebra& G,
                             const std::vector<Expr>& invariants = {},
                             const std::vector<Expr>& section = {},
                             int degree_budget = 4);

struct SubConnection {
  ChartPtr chart;          // jet chart of the quotient normal form + group coords
  std::vector<int> group;  // indices of the group coordinates in chart
  Distribution HG;         // span{D_t + sum lambda^a d/d eps^a, d/d z^top}
  std::vector<Expr> lambda;  // one per group coordinate, on the jet variables
  CoordMap lift;             // system chart -> chart
  Signature kappa;
};

// Verifies a candidate trivialization map inversion-free: chain consistency
// Z(z_l) = z_{l+1}, group components free of controls with X_a(eps^b) =
// delta^b_a, full control rank into the top jets, and lambda^a either derived
// by inversion or verified against the supplied candidates; lambda^a must not
// depend on the group coordinates (NormalFormViolation).
SubConnection verify_sub_connection(const ControlSystem& C,
                                    const SymmetryAlgebra& G,
                                    const BrunovskyForm& target,
                                    const CoordMap& lift,
                                    const std::vector<Expr>& lambda_candidates = {});

// Assembles the trivialization from a quotient with group-coordinate section
// and the contact transformation of the quotient system, then verifies it.
SubConnection trivialize(const ControlSystem& C, const SymmetryAlgebra& G,
                         const QuotientData& Q, const ContactTransformation& phi,
                         const std::vector<Expr>& lambda_candidates = {});

}  // namespace gct
