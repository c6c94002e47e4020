#pragma once
// Cascade feedback linearization: partial contact curve reduction of a
// contact sub-connection, prolongation prediction (exact, from the
// fundamental functions of the reduced system, or the derived-length bound),
// static feedback linearization of the prolonged sub-connection, dynamic
// compensator assembly, flat outputs, and explicit-solution synthesis.
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contact/contact.hpp"
#include "symmetry/symmetry.hpp"

namespace gct {

// Smallest signature (in the jet-inclusion partial order) dominating every
// signature in sigs: sort each chain-order multiset descending, pad with
// zeros, take the pointwise maximum.
Signature join_signatures(const std::vector<Signature>& sigs);

struct Reduction {
  SubConnection source;
  std::vector<std::string> reduced_vars;  // chain names assigned to the curve
  std::vector<int> orders;                // original top order, per reduced var
  std::vector<std::string> func_names;    // arbitrary function per reduced var
  std::map<SymId, Expr> curve;            // reduced jet coord -> function jet
  // The reduced sub-connection as a control system on the remaining jet
  // chart plus the group coordinates; arbitrary-function jets enter the
  // drift as time-dependent coefficients.
  ControlSystem reduced;
  Signature nu, nu_perp;
};

// Substitutes the jets of the named chains by arbitrary-function jets
// f_a^(l)(t) and restricts the sub-connection to the remaining chart.
Reduction reduce(const SubConnection& H, const std::vector<std::string>& split);

// Deterministic split trial order: single chains first (highest order first,
// then chain order), then pairs, and so on; never all chains at once.
std::vector<std::vector<std::string>> split_candidates(const SubConnection& H);

struct ReducedAnalysis {
  GoursatVerdict verdict;  // sfl_test of the reduced system
  int kbar = 0;            // derived length of the reduced system
  // Linearization of the reduced system (exact mode); the chain bottoms are
  // the fundamental functions, whose f-jet orders drive the prediction.
  std::optional<ContactTransformation> linearization;
};

ReducedAnalysis reduced_sfl_analysis(const Reduction& R, bool with_contact = true,
                                     int degree_budget = 4,
                                     const std::vector<Expr>& candidates = {});

struct ProlongationPlan {
  std::vector<int> orders;  // new top order per reduced variable (>= original)
  Signature nu_prime;
  std::string mode;  // "exact" or "bound"
};

// Exact mode: per reduced variable, the maximal f-jet order appearing in the
// reduced contact transformation (the signature of the explicit solution),
// floored at the original order. Bound mode: every reduced variable
// prolonged by 2*kbar - 1.
ProlongationPlan prolongation_plan(const Reduction& R, const ReducedAnalysis& A,
                                   const std::string& mode = "exact");

// The prolonged sub-connection as a control system: reduced chains extended
// to the planned orders, new top jets becoming the controls.
ControlSystem build_prolonged(const Reduction& R, const ProlongationPlan& plan);

// Greedily decrements each planned order while the prolonged system remains
// static feedback linearizable (refines the bound to the paper-exact order).
ProlongationPlan refine_plan(const Reduction& R, ProlongationPlan plan);

struct ProlongedLinearization {
  ControlSystem system;
  GoursatVerdict verdict;
  std::optional<ContactTransformation> transformation;
};

// Builds the prolonged system, requires it to pass sfl_test
// (ProlongationInsufficient otherwise), and optionally linearizes it.
ProlongedLinearization prolong_and_linearize(const Reduction& R,
                                             const ProlongationPlan& plan,
                                             bool with_contact = true,
                                             int degree_budget = 4,
                                             const std::vector<Expr>& candidates = {});

struct DynamicCompensator {
  ControlSystem augmented;  // states (x, y), controls W
  // Per reduced variable: the y-chain coordinates (y_1' = y_2, ...,
  // y_last' = chain W) and the defining map y_1 = top-jet lift on (t,x,u).
  std::vector<std::vector<SymId>> y_chains;
  std::vector<Expr> y_tops;
  std::vector<SymId> free_w;         // W's identified with original controls
  std::vector<SymId> free_controls;  // the controls they equal, same order
  std::vector<SymId> chain_w;        // W's terminating the y-chains
  std::map<SymId, Expr> beta;        // original control -> Expr(t, x, y, W)
  // The pulled-back prolonged system on (t, x, u, p) and its first
  // characteristic bundle, straightened by the (y, W) coordinates.
  Distribution T, charT;
  GoursatVerdict verdict;  // sfl_test of the augmented system
};

// Dynamic compensator realizing the prolongation on the original system:
// integrator chains y feed the reduced chains' top-jet maps, the remaining
// controls pass through unchanged, and u = beta(t, x, y, W) is solved
// exactly (CompensatorSolveFailed when the heuristics exhaust).
DynamicCompensator dynamic_compensator(const ControlSystem& C,
                                       const Reduction& R,
                                       const ProlongationPlan& plan);

struct FlatData {
  std::vector<Expr> outputs;  // on the augmented chart, one per chain
  std::vector<int> orders;
  ContactTransformation transformation;  // augmented system -> normal form
  bool solvable = false;
  // Original states and controls as Exprs in t and the jets of the
  // arbitrary functions func_names (empty when not solvable).
  std::map<SymId, Expr> solution;
  std::vector<std::string> func_names;
};

// Flat outputs = fundamental functions of the augmented system; the explicit
// solution is synthesized by inverting the contact transformation and is
// verified by residual substitution into the original equations.
FlatData flat_outputs_and_solution(const ControlSystem& C,
                                   const DynamicCompensator& comp,
                                   int degree_budget = 4,
                                   const std::vector<Expr>& candidates = {});

}  // namespace gct
