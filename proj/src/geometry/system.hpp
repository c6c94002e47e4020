#pragma once
// Control systems: a chart with (time, state, control) roles and drift
// dynamics xdot = f(t,x,u), together with the associated distribution
// V = span{ d/dt + sum f^i d/dx^i, d/du^1, ..., d/du^m }.
#include "geometry/linalg.hpp"

namespace gct {

struct ControlSystem {
  ChartPtr chart;
  // One drift expression per state coordinate, in chart state order.
  std::vector<Expr> drift;

  std::vector<int> state_indices() const { return chart->indices(RoleKind::State); }
  std::vector<int> control_indices() const { return chart->indices(RoleKind::Control); }

  VectorField drift_field() const {
    VectorField Z(chart);
    int ti = chart->time_index();
    Z.c[(size_t)ti] = Expr::one();
    auto st = state_indices();
    for (size_t i = 0; i < st.size(); ++i) Z.c[(size_t)st[i]] = drift[i];
    return Z;
  }

  Distribution distribution() const {
    Distribution d(chart);
    d.gens.push_back(drift_field());
    for (int ui : control_indices()) d.gens.push_back(coordinate_field(chart, ui));
    return d;
  }

  // Regularity: the control-to-drift Jacobian has full generic rank m.
  bool regular() const {
    auto ctr = control_indices();
    ExprMat j;
    for (const Expr& f : drift) {
      ExprVec row;
      for (int ui : ctr) row.push_back(f.diff(chart->coord(ui)));
      j.push_back(std::move(row));
    }
    return generic_rank(j) == (int)ctr.size();
  }
};

}  // namespace gct
