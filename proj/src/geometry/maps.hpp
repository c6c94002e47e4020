#pragma once
// Coordinate maps between charts, triangular/linear symbolic inversion, and
// pushforward of vector fields. General symbolic inversion is infeasible; the
// static feedback transformations handled here are triangular by construction,
// and inversion fails loudly (NotInvertible) otherwise.
#include <map>
#include <vector>

#include "geometry/linalg.hpp"

namespace gct {

struct CoordMap {
  ChartPtr source, target;
  // comp[i] expresses target coordinate i as an Expr in source coordinates.
  std::vector<Expr> comp;

  CoordMap() = default;
  CoordMap(ChartPtr s, ChartPtr t)
      : source(std::move(s)),
        target(std::move(t)),
        comp((size_t)target->dim(), Expr::zero()) {}

  // Pull a target-side scalar back to the source chart (composition with the map).
  Expr pullback(const Expr& f) const;
};

ExprMat jacobian(const CoordMap& m);

// Verifies generic Jacobian rank equals the (common) dimension.
bool is_diffeo_candidate(const CoordMap& m);

// Solves target = comp(source) for the source coordinates as Exprs in target
// coordinates, by iterated linear extraction (triangular heuristic). Source
// coordinates that also appear in the target chart are taken as themselves.
// Returns the substitution source coordinate -> Expr over the target chart.
std::map<SymId, Expr> invert_map(const CoordMap& m);

// dphi(X) expressed in target coordinates (requires inversion).
VectorField pushforward(const CoordMap& m, const VectorField& X);
Distribution pushforward(const CoordMap& m, const Distribution& D);

// dphi(X) with components left in source coordinates: result[i] = X(comp_i).
ExprVec pushforward_components(const CoordMap& m, const VectorField& X);

}  // namespace gct
