#pragma once
// Exact linear algebra over the Expr fraction field, plus the rank-based
// distribution operations built on it. Symbolic ranks are cross-checked
// against exact evaluation at seeded random points; pivot numerators are
// recorded as the computation's genericity locus.
#include <optional>
#include <string>
#include <vector>

#include "geometry/field.hpp"

namespace gct {

using ExprMat = std::vector<std::vector<Expr>>;
using ExprVec = std::vector<Expr>;

struct RrefResult {
  ExprMat mat;                  // reduced row echelon form
  std::vector<int> pivot_cols;  // one per nonzero row, ascending row order
  int rank = 0;
  ExprVec pivots;               // pivot entries before normalization (loci)
};

RrefResult rref(ExprMat m);

// Basis of {x : M x = 0}; unknowns are the columns of M.
std::vector<ExprVec> nullspace(const ExprMat& m);

// Exact rank of the matrix evaluated at a random point (pole-retried).
int rank_at_random_point(const ExprMat& m);

// max of 3 random-point ranks, cross-checked against the symbolic rref rank;
// throws RankDisagreement when they differ. Pivot loci appended when asked.
int generic_rank(const ExprMat& m, ExprVec* loci = nullptr);

// Residual of v modulo the row space described by an rref (in-place variant
// returns the reduced vector).
ExprVec reduce_mod(const RrefResult& r, ExprVec v);

// --- distribution-level helpers ---------------------------------------------

ExprMat gen_matrix(const Distribution& d);  // rows = generator coefficients
int dist_rank(const Distribution& d);
// Row-reduced generator basis (drops dependent generators, clears fractions).
Distribution echelon_basis(const Distribution& d);
// Maximal independent subset of the generators, kept verbatim (no row
// mixing); preferable when coefficient growth matters more than echelon form.
Distribution independent_subset(const Distribution& d);
bool contains_field(const Distribution& d, const VectorField& x);
bool contains_dist(const Distribution& outer, const Distribution& inner);
bool same_span(const Distribution& a, const Distribution& b);
Distribution intersect(const Distribution& a, const Distribution& b);
std::vector<OneForm> annihilator(const Distribution& d);
// Clears coefficient denominators of each generator (span-preserving).
VectorField cleared(const VectorField& x);
// True when brackets of all generator pairs stay inside the span.
bool is_involutive(const Distribution& d);

}  // namespace gct
