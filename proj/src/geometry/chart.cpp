#include "geometry/chart.hpp"

#include <algorithm>
#include <sstream>

#include "exprcore/errors.hpp"

namespace gct {

int Chart::add(SymId s, Role r) {
  if (index_of(s) >= 0)
    throw GctError(ErrCode::BadInput,
                   "duplicate chart coordinate " + symtab().info(s).name);
  coords_.push_back(s);
  roles_.push_back(std::move(r));
  return dim() - 1;
}

int Chart::index_of(SymId s) const {
  for (int i = 0; i < dim(); ++i)
    if (coords_[(size_t)i] == s) return i;
  return -1;
}

int Chart::time_index() const {
  for (int i = 0; i < dim(); ++i)
    if (roles_[(size_t)i].kind == RoleKind::Time) return i;
  return -1;
}

std::vector<int> Chart::indices(RoleKind k) const {
  std::vector<int> r;
  for (int i = 0; i < dim(); ++i)
    if (roles_[(size_t)i].kind == k) r.push_back(i);
  return r;
}

std::map<std::string, std::vector<int>> Chart::jet_vars() const {
  std::map<std::string, std::vector<int>> by_var;
  for (int i = 0; i < dim(); ++i)
    if (!roles_[(size_t)i].var.empty())
      by_var[roles_[(size_t)i].var].push_back(i);
  for (auto& [v, idx] : by_var)
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return roles_[(size_t)a].order < roles_[(size_t)b].order;
    });
  return by_var;
}

void Chart::validate() const {
  int times = 0;
  for (int i = 0; i < dim(); ++i)
    if (roles_[(size_t)i].kind == RoleKind::Time) ++times;
  if (times != 1)
    throw GctError(ErrCode::BadInput, "chart must have exactly one time coordinate");
  for (auto& [v, idx] : jet_vars()) {
    for (size_t k = 0; k < idx.size(); ++k)
      if (roles_[(size_t)idx[k]].order != (int)k)
        throw GctError(ErrCode::BadInput,
                       "jet orders of variable '" + v + "' are not contiguous from 0");
  }
}

std::string Chart::describe() const {
  std::ostringstream out;
  for (int i = 0; i < dim(); ++i) {
    if (i) out << ", ";
    out << symtab().info(coords_[(size_t)i]).name;
  }
  return out.str();
}

}  // namespace gct
