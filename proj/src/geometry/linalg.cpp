#include "geometry/linalg.hpp"

#include <algorithm>

#include "exprcore/errors.hpp"
#include "exprcore/random.hpp"

namespace gct {

namespace {

size_t complexity(const Expr& e) { return e.num().size() + e.den().size(); }

int rank_of_rational(std::vector<std::vector<mpq_class>> m) {
  size_t rows = m.size();
  if (rows == 0) return 0;
  size_t cols = m[0].size();
  int rank = 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = rows;
    for (size_t i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

std::set<SymId> matrix_symbols(const ExprMat& m) {
  std::set<SymId> s;
  for (auto& row : m)
    for (auto& e : row)
      for (SymId id : e.symbols()) s.insert(id);
  return s;
}

}  // namespace

RrefResult rref(ExprMat m) {
  RrefResult res;
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    // Simplest nonzero entry in this column at or below row r.
    size_t best = rows;
    size_t best_cx = 0;
    for (size_t i = r; i < rows; ++i) {
      if (m[i][c].zero_normal_form()) continue;
      size_t cx = complexity(m[i][c]);
      if (best == rows || cx < best_cx) {
        best = i;
        best_cx = cx;
      }
    }
    if (best == rows) continue;
    std::swap(m[r], m[best]);
    res.pivots.push_back(m[r][c]);
    Expr inv = Expr::one() / m[r][c];
    for (size_t j = 0; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].zero_normal_form()) continue;
      Expr f = m[i][c];
      for (size_t j = 0; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    res.pivot_cols.push_back((int)c);
    ++r;
  }
  res.rank = (int)r;
  res.mat = std::move(m);
  return res;
}

std::vector<ExprVec> nullspace(const ExprMat& m) {
  size_t cols = m.empty() ? 0 : m[0].size();
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int pc : r.pivot_cols) is_pivot[(size_t)pc] = true;
  std::vector<ExprVec> basis;
  for (size_t j = 0; j < cols; ++j) {
    if (is_pivot[j]) continue;
    ExprVec x(cols, Expr::zero());
    x[j] = Expr::one();
    for (size_t i = 0; i < r.pivot_cols.size(); ++i)
      x[(size_t)r.pivot_cols[i]] = -r.mat[i][j];
    basis.push_back(std::move(x));
  }
  return basis;
}

int rank_at_random_point(const ExprMat& m) {
  auto syms = matrix_symbols(m);
  for (int attempt = 0; attempt < 30; ++attempt) {
    auto pt = random_point(syms);
    try {
      std::vector<std::vector<mpq_class>> num;
      num.reserve(m.size());
      for (auto& row : m) {
        std::vector<mpq_class> nrow;
        nrow.reserve(row.size());
        for (auto& e : row) nrow.push_back(e.eval(pt));
        num.push_back(std::move(nrow));
      }
      return rank_of_rational(std::move(num));
    } catch (const GctError& err) {
      if (err.code != ErrCode::PoleAtPoint) throw;
    }
  }
  throw GctError(ErrCode::PoleAtPoint, "rank probe budget exhausted");
}

int generic_rank(const ExprMat& m, ExprVec* loci) {
  if (m.empty() || m[0].empty()) return 0;
  int numeric = 0;
  for (int i = 0; i < 3; ++i) numeric = std::max(numeric, rank_at_random_point(m));
  // Evaluation rank is a lower bound for the generic rank, which is bounded by
  // min(rows, cols); when they coincide the symbolic elimination is redundant.
  if (!loci && numeric == (int)std::min(m.size(), m[0].size())) return numeric;
  RrefResult r = rref(m);
  if (r.rank != numeric)
    throw GctError(ErrCode::RankDisagreement,
                   "symbolic rank " + std::to_string(r.rank) +
                       " vs numeric rank " + std::to_string(numeric));
  if (loci)
    for (const Expr& p : r.pivots)
      if (!p.is_rational_constant()) loci->push_back(p);
  return r.rank;
}

ExprVec reduce_mod(const RrefResult& r, ExprVec v) {
  for (size_t i = 0; i < r.pivot_cols.size(); ++i) {
    size_t pc = (size_t)r.pivot_cols[i];
    if (v[pc].zero_normal_form()) continue;
    Expr f = v[pc];
    for (size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f * r.mat[i][j];
  }
  return v;
}

// --- distribution helpers -----------------------------------------------------

ExprMat gen_matrix(const Distribution& d) {
  ExprMat m;
  m.reserve(d.gens.size());
  for (const VectorField& g : d.gens) m.push_back(g.c);
  return m;
}

int dist_rank(const Distribution& d) {
  if (d.gens.empty()) return 0;
  return generic_rank(gen_matrix(d));
}

VectorField cleared(const VectorField& x) {
  Expr L = Expr::one();
  for (const Expr& e : x.c) {
    if (e.den().is_constant()) continue;
    Poly g = poly_gcd(L.num(), e.den());
    Expr extra = Expr(e.den(), Poly::constant(1));
    if (!g.is_constant()) extra = extra / Expr(g, Poly::constant(1));
    L = L * extra;
  }
  if (L.is_rational_constant()) return x;
  return x.scaled(L);
}

Distribution echelon_basis(const Distribution& d) {
  if (d.gens.empty()) return d;
  RrefResult r = rref(gen_matrix(d));
  Distribution out(d.chart);
  for (int i = 0; i < r.rank; ++i) {
    VectorField g(d.chart);
    g.c = r.mat[(size_t)i];
    out.gens.push_back(cleared(g));
  }
  return out;
}

Distribution independent_subset(const Distribution& d) {
  Distribution out(d.chart);
  ExprMat m;
  int rank = 0;
  for (const VectorField& g : d.gens) {
    if (g.is_zero_field()) continue;
    m.push_back(g.c);
    int r = generic_rank(m);
    if (r > rank) {
      rank = r;
      out.gens.push_back(g);
    } else {
      m.pop_back();
    }
  }
  return out;
}

bool contains_field(const Distribution& d, const VectorField& x) {
  RrefResult r = rref(gen_matrix(d));
  ExprVec res = reduce_mod(r, x.c);
  for (const Expr& e : res)
    if (!e.zero_normal_form()) return false;
  return true;
}

bool contains_dist(const Distribution& outer, const Distribution& inner) {
  RrefResult r = rref(gen_matrix(outer));
  for (const VectorField& g : inner.gens) {
    ExprVec res = reduce_mod(r, g.c);
    for (const Expr& e : res)
      if (!e.zero_normal_form()) return false;
  }
  return true;
}

bool same_span(const Distribution& a, const Distribution& b) {
  return contains_dist(a, b) && contains_dist(b, a);
}

Distribution intersect(const Distribution& a, const Distribution& b) {
  if (a.chart.get() != b.chart.get())
    throw GctError(ErrCode::ChartMismatch, "intersect: different charts");
  int n = a.chart->dim();
  size_t ra = a.gens.size(), rb = b.gens.size();
  // Columns are the unknown coefficients (alpha, beta); rows are coordinates.
  ExprMat m((size_t)n, ExprVec(ra + rb, Expr::zero()));
  for (size_t j = 0; j < ra; ++j)
    for (int i = 0; i < n; ++i) m[(size_t)i][j] = a.gens[j].c[(size_t)i];
  for (size_t j = 0; j < rb; ++j)
    for (int i = 0; i < n; ++i) m[(size_t)i][ra + j] = -b.gens[j].c[(size_t)i];
  Distribution out(a.chart);
  for (const ExprVec& sol : nullspace(m)) {
    VectorField g(a.chart);
    for (size_t j = 0; j < ra; ++j)
      if (!sol[j].zero_normal_form()) g = g + a.gens[j].scaled(sol[j]);
    if (!g.is_zero_field()) out.gens.push_back(g);
  }
  return echelon_basis(out);
}

std::vector<OneForm> annihilator(const Distribution& d) {
  int n = d.chart->dim();
  if (d.gens.empty()) {
    std::vector<OneForm> forms;
    for (int i = 0; i < n; ++i) {
      OneForm w(d.chart);
      w.c[(size_t)i] = Expr::one();
      forms.push_back(std::move(w));
    }
    return forms;
  }
  std::vector<OneForm> forms;
  for (const ExprVec& sol : nullspace(gen_matrix(d))) {
    OneForm w(d.chart);
    w.c = sol;
    forms.push_back(std::move(w));
  }
  return forms;
}

bool is_involutive(const Distribution& d) {
  RrefResult r = rref(gen_matrix(d));
  for (size_t i = 0; i < d.gens.size(); ++i)
    for (size_t j = i + 1; j < d.gens.size(); ++j) {
      VectorField br = bracket(d.gens[i], d.gens[j]);
      ExprVec res = reduce_mod(r, br.c);
      for (const Expr& e : res)
        if (!e.zero_normal_form()) return false;
    }
  return true;
}

}  // namespace gct
