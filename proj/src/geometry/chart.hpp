#pragma once
// Charts: ordered coordinates with role tags. A chart owns no symbols (they
// live in the global table); it fixes their order and geometric meaning.
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "exprcore/expr.hpp"

namespace gct {

enum class RoleKind { Time, State, Control, Group, Jet, Aux };

struct Role {
  RoleKind kind = RoleKind::State;
  std::string var;  // Jet: variable name
  int order = 0;    // Jet: order within the variable's chain
};

class Chart {
 public:
  int add(SymId s, Role r);  // returns index
  int dim() const { return (int)coords_.size(); }
  SymId coord(int i) const { return coords_[(size_t)i]; }
  const Role& role(int i) const { return roles_[(size_t)i]; }
  const std::vector<SymId>& coords() const { return coords_; }
  int index_of(SymId s) const;  // -1 when absent
  int time_index() const;       // -1 when absent
  std::vector<int> indices(RoleKind k) const;
  // Jet variable name -> coordinate indices ordered by jet order 0..r.
  // Any role with a nonempty var participates, whatever its kind.
  std::map<std::string, std::vector<int>> jet_vars() const;
  // Checks uniqueness, single time coordinate, contiguous jet orders.
  void validate() const;

  std::string describe() const;

 private:
  std::vector<SymId> coords_;
  std::vector<Role> roles_;
};

using ChartPtr = std::shared_ptr<const Chart>;

}  // namespace gct
