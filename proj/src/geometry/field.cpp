#include "geometry/field.hpp"

#include "exprcore/errors.hpp"

namespace gct {

namespace {
void check_same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (a.get() != b.get())
    throw GctError(ErrCode::ChartMismatch, "operands live on different charts");
}
}  // namespace

Expr VectorField::apply(const Expr& f) const {
  Expr acc = Expr::zero();
  for (int i = 0; i < chart->dim(); ++i) {
    if (c[(size_t)i].zero_normal_form()) continue;
    Expr df = f.diff(chart->coord(i));
    if (df.zero_normal_form()) continue;
    acc = acc + c[(size_t)i] * df;
  }
  return acc;
}

bool VectorField::is_zero_field() const {
  for (const Expr& e : c)
    if (!e.zero_normal_form()) return false;
  return true;
}

VectorField VectorField::operator+(const VectorField& o) const {
  check_same_chart(chart, o.chart);
  VectorField r(chart);
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] + o.c[i];
  return r;
}

VectorField VectorField::operator-(const VectorField& o) const {
  check_same_chart(chart, o.chart);
  VectorField r(chart);
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] - o.c[i];
  return r;
}

VectorField VectorField::scaled(const Expr& a) const {
  VectorField r(chart);
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = c[i] * a;
  return r;
}

VectorField coordinate_field(const ChartPtr& chart, int i) {
  VectorField r(chart);
  r.c[(size_t)i] = Expr::one();
  return r;
}

VectorField bracket(const VectorField& X, const VectorField& Y) {
  check_same_chart(X.chart, Y.chart);
  VectorField r(X.chart);
  for (int i = 0; i < X.chart->dim(); ++i)
    r.c[(size_t)i] = X.apply(Y.c[(size_t)i]) - Y.apply(X.c[(size_t)i]);
  return r;
}

Expr pairing(const OneForm& w, const VectorField& X) {
  check_same_chart(w.chart, X.chart);
  Expr acc = Expr::zero();
  for (size_t i = 0; i < w.c.size(); ++i) acc = acc + w.c[i] * X.c[i];
  return acc;
}

}  // namespace gct
