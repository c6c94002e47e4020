#pragma once
// Vector fields, one-forms and distributions on a chart. Coefficients are
// exact Exprs; a vector field acts on scalars as a derivation.
#include <vector>

#include "geometry/chart.hpp"

namespace gct {

struct VectorField {
  ChartPtr chart;
  std::vector<Expr> c;  // one coefficient per chart coordinate

  VectorField() = default;
  explicit VectorField(ChartPtr ch)
      : chart(std::move(ch)), c((size_t)chart->dim(), Expr::zero()) {}

  // Derivation: X(f) = sum_i c_i df/dx_i.
  Expr apply(const Expr& f) const;
  bool is_zero_field() const;
  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField scaled(const Expr& a) const;
};

// Coordinate field d/dx_i.
VectorField coordinate_field(const ChartPtr& chart, int i);

// Lie bracket [X,Y]^i = X(Y^i) - Y(X^i).
VectorField bracket(const VectorField& X, const VectorField& Y);

struct OneForm {
  ChartPtr chart;
  std::vector<Expr> c;  // coefficient of dx_i

  OneForm() = default;
  explicit OneForm(ChartPtr ch)
      : chart(std::move(ch)), c((size_t)chart->dim(), Expr::zero()) {}
};

Expr pairing(const OneForm& w, const VectorField& X);

struct Distribution {
  ChartPtr chart;
  std::vector<VectorField> gens;

  Distribution() = default;
  explicit Distribution(ChartPtr ch) : chart(std::move(ch)) {}
  Distribution(ChartPtr ch, std::vector<VectorField> g)
      : chart(std::move(ch)), gens(std::move(g)) {}
};

}  // namespace gct
