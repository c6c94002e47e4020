#pragma once
// Symbol table for the exact expression core.
//
// Symbol kinds:
//   Coord - chart coordinates (one of which may be the distinguished time t)
//   Const - named opaque constants (physical parameters, e.g. h)
//   Sin/Cos - trig kernel pair bound to an argument expression; the pair
//       satisfies s^2 + c^2 = 1 and the chain rule d(sin a) = cos(a) da
//   Exp - exponential kernel exp(a), d(exp a) = exp(a) da
//   Jet - arbitrary-function jet symbol f^(k)(t); d/dt bumps k by one
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gct {

class Expr;
using SymId = int32_t;

enum class SymKind { Coord, Const, Sin, Cos, Exp, Jet };

struct SymbolInfo {
  std::string name;                 // canonical printed form
  SymKind kind = SymKind::Coord;
  std::shared_ptr<const Expr> arg;  // Sin/Cos/Exp argument
  SymId partner = -1;               // Sin <-> Cos
  std::string func;                 // Jet: base function name
  int order = 0;                    // Jet: derivative order
};

class SymbolTable {
 public:
  SymId coord(const std::string& name);
  SymId constant(const std::string& name);
  SymId jet(const std::string& func, int order);
  // Kernel registration; the argument is normalized and used as the key, so
  // sin(x) requested twice yields the same symbol.
  std::pair<SymId, SymId> trig(const Expr& arg);  // (sin_id, cos_id)
  SymId exp_kernel(const Expr& arg);

  const SymbolInfo& info(SymId id) const { return syms_.at((size_t)id); }
  SymId lookup(const std::string& name) const;  // -1 if absent
  int size() const { return (int)syms_.size(); }

  void set_time(SymId t) { time_ = t; }
  SymId time() const { return time_; }

 private:
  SymId intern(SymbolInfo s);
  std::vector<SymbolInfo> syms_;
  std::map<std::string, SymId> by_name_;
  SymId time_ = -1;
};

SymbolTable& symtab();  // process-wide table
void reset_symtab();    // drops all symbols (test isolation)

}  // namespace gct
