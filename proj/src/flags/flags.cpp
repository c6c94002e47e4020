#include "flags/flags.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "exprcore/errors.hpp"

namespace gct {

std::vector<int> DerivedFlag::ranks() const {
  std::vector<int> r;
  r.reserve(bundles.size());
  for (const auto& b : bundles) r.push_back((int)b.gens.size());
  return r;
}

int Signature::num_chains() const {
  return std::accumulate(rho.begin(), rho.end(), 0);
}

int Signature::jet_dim() const {
  int d = 1;
  for (size_t i = 0; i < rho.size(); ++i) d += (int)(i + 2) * rho[i];
  return d;
}

std::string Signature::str() const {
  std::ostringstream os;
  os << "<";
  for (size_t i = 0; i < rho.size(); ++i) os << (i ? "," : "") << rho[i];
  os << ">";
  return os.str();
}

std::string RefinedDerivedType::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < rows.size(); ++i) {
    os << (i ? ",[" : "[");
    for (size_t j = 0; j < rows[i].size(); ++j) os << (j ? "," : "") << rows[i][j];
    os << "]";
  }
  os << "]";
  return os.str();
}

DerivedFlag derived_flag(const Distribution& D) {
  DerivedFlag flag;
  int n = D.chart->dim();
  // Generators are kept verbatim (not echelonized): mixing rows inflates the
  // coefficients that every later bracket differentiates.
  Distribution cur = independent_subset(D);
  flag.bundles.push_back(cur);
  if ((int)cur.gens.size() == n) return flag;  // already all of TM
  size_t old_count = 0;  // prefix of cur carried over from the previous level
  for (int step = 0; step <= n; ++step) {
    Distribution next = cur;
    // Brackets of two previous-level generators already lie in span(cur),
    // so only pairs touching a generator new to this level contribute.
    for (size_t i = 0; i < cur.gens.size(); ++i)
      for (size_t j = std::max(i + 1, old_count); j < cur.gens.size(); ++j)
        next.gens.push_back(bracket(cur.gens[i], cur.gens[j]));
    next = independent_subset(next);
    if (next.gens.size() == cur.gens.size()) return flag;  // stabilized
    if ((int)next.gens.size() > n)
      throw GctError(ErrCode::NotBracketStabilizing,
                     "derived flag rank exceeds chart dimension");
    old_count = cur.gens.size();
    flag.bundles.push_back(next);
    if ((int)next.gens.size() == n) return flag;  // reached TM: stable
    cur = std::move(next);
  }
  throw GctError(ErrCode::NotBracketStabilizing,
                 "derived flag failed to stabilize within dimension budget");
}

Distribution cauchy_bundle(const Distribution& D) {
  // Verbatim generators keep the bracket coefficients small; echelonizing
  // first mixes rows and inflates everything the brackets then differentiate.
  Distribution base = independent_subset(D);
  size_t r = base.gens.size();
  int n = base.chart->dim();
  if (r == 0) return base;
  RrefResult rr = rref(gen_matrix(base));
  // Unknowns c_i; condition: sum_i c_i ([X_i, X_j] mod D) = 0 for every j.
  // The X_j(c_i) X_i terms of [sum c_i X_i, X_j] already lie in D, so the
  // condition is pointwise linear in the c_i.
  ExprMat M;
  for (size_t j = 0; j < r; ++j) {
    std::vector<ExprVec> residuals;
    residuals.reserve(r);
    bool any = false;
    for (size_t i = 0; i < r; ++i) {
      ExprVec res = reduce_mod(rr, bracket(base.gens[i], base.gens[j]).c);
      for (const Expr& e : res)
        if (!e.zero_normal_form()) {
          any = true;
          break;
        }
      residuals.push_back(std::move(res));
    }
    if (!any) continue;
    for (int coord = 0; coord < n; ++coord) {
      ExprVec row(r, Expr::zero());
      bool nz = false;
      for (size_t i = 0; i < r; ++i) {
        row[i] = residuals[i][(size_t)coord];
        if (!row[i].zero_normal_form()) nz = true;
      }
      if (nz) M.push_back(std::move(row));
    }
  }
  Distribution out(base.chart);
  if (M.empty()) {
    out = base;  // every generator is characteristic
  } else {
    for (const ExprVec& sol : nullspace(M)) {
      VectorField C(base.chart);
      for (size_t i = 0; i < r; ++i)
        if (!sol[i].zero_normal_form()) C = C + base.gens[i].scaled(sol[i]);
      if (!C.is_zero_field()) out.gens.push_back(C);
    }
    out = echelon_basis(out);
  }
  if (!out.gens.empty() && !is_involutive(out))
    throw GctError(ErrCode::LinearSolveFailure,
                   "characteristic bundle candidate is not involutive");
  return out;
}

Distribution intersection_bundle(const DerivedFlag& flag, int i) {
  int k = flag.derived_length();
  if (i < 1 || i > k - 1)
    throw GctError(ErrCode::BadInput, "intersection bundle index out of range");
  return intersect(flag.bundles[(size_t)i - 1],
                   cauchy_bundle(flag.bundles[(size_t)i]));
}

FlagAnalysis analyze_flag(const Distribution& D) {
  FlagAnalysis a;
  a.flag = derived_flag(D);
  int k = a.flag.derived_length();
  int n = D.chart->dim();
  for (int j = 0; j <= k; ++j) {
    const Distribution& Vj = a.flag.bundles[(size_t)j];
    if ((int)Vj.gens.size() == n) {
      a.cauchy.push_back(Vj);  // Char TM = TM
    } else {
      a.cauchy.push_back(cauchy_bundle(Vj));
    }
  }
  for (int i = 1; i <= k - 1; ++i)
    a.intersections.push_back(
        intersect(a.flag.bundles[(size_t)i - 1], a.cauchy[(size_t)i]));

  auto m = a.flag.ranks();
  auto chi = [&](int j) { return (int)a.cauchy[(size_t)j].gens.size(); };
  a.type.rows.push_back({m[0], chi(0)});
  for (int j = 1; j <= k - 1; ++j)
    a.type.rows.push_back(
        {m[(size_t)j], (int)a.intersections[(size_t)j - 1].gens.size(), chi(j)});
  if (k >= 1) a.type.rows.push_back({m[(size_t)k], chi(k)});

  auto vd = vel_decel(a.flag);
  a.vel = vd.first;
  a.decel = vd.second;
  return a;
}

RefinedDerivedType refined_derived_type(const Distribution& D) {
  return analyze_flag(D).type;
}

std::pair<Signature, Signature> vel_decel(const DerivedFlag& flag) {
  auto m = flag.ranks();
  int k = flag.derived_length();
  std::vector<int> vel, decel;
  for (int j = 1; j <= k; ++j) vel.push_back(m[(size_t)j] - m[(size_t)j - 1]);
  for (int i = 1; i <= k - 1; ++i)
    decel.push_back(vel[(size_t)i - 1] - vel[(size_t)i]);
  if (k >= 1) decel.push_back(vel[(size_t)k - 1]);
  return {Signature(vel), Signature(decel)};
}

}  // namespace gct
