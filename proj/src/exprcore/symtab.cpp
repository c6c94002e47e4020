#include "exprcore/symtab.hpp"

#include "exprcore/errors.hpp"
#include "exprcore/expr.hpp"
#include "exprcore/random.hpp"

namespace gct {

Rng& rng() {
  static Rng r;
  return r;
}
void set_global_seed(uint64_t seed) { rng().reset(seed); }

SymbolTable& symtab() {
  static SymbolTable t;
  return t;
}
void reset_symtab() { symtab() = SymbolTable(); }

SymId SymbolTable::intern(SymbolInfo s) {
  auto it = by_name_.find(s.name);
  if (it != by_name_.end()) return it->second;
  SymId id = (SymId)syms_.size();
  by_name_[s.name] = id;
  syms_.push_back(std::move(s));
  return id;
}

SymId SymbolTable::lookup(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

SymId SymbolTable::coord(const std::string& name) {
  SymId id = lookup(name);
  if (id >= 0) {
    if (syms_[(size_t)id].kind != SymKind::Coord)
      throw GctError(ErrCode::BadInput, "symbol '" + name + "' redeclared as coordinate");
    return id;
  }
  SymbolInfo s;
  s.name = name;
  s.kind = SymKind::Coord;
  return intern(std::move(s));
}

SymId SymbolTable::constant(const std::string& name) {
  SymId id = lookup(name);
  if (id >= 0) {
    if (syms_[(size_t)id].kind != SymKind::Const)
      throw GctError(ErrCode::BadInput, "symbol '" + name + "' redeclared as constant");
    return id;
  }
  SymbolInfo s;
  s.name = name;
  s.kind = SymKind::Const;
  return intern(std::move(s));
}

SymId SymbolTable::jet(const std::string& func, int order) {
  std::string name = order == 0 ? func + "(t)"
                                : "D(" + func + "," + std::to_string(order) + ")(t)";
  SymId id = lookup(name);
  if (id >= 0) return id;
  SymbolInfo s;
  s.name = name;
  s.kind = SymKind::Jet;
  s.func = func;
  s.order = order;
  return intern(std::move(s));
}

std::pair<SymId, SymId> SymbolTable::trig(const Expr& arg) {
  std::string key = arg.print();
  std::string sname = "sin(" + key + ")";
  SymId sid = lookup(sname);
  if (sid >= 0) return {sid, syms_[(size_t)sid].partner};
  auto argp = std::make_shared<const Expr>(arg);
  SymbolInfo s;
  s.name = sname;
  s.kind = SymKind::Sin;
  s.arg = argp;
  SymId sin_id = intern(std::move(s));
  SymbolInfo c;
  c.name = "cos(" + key + ")";
  c.kind = SymKind::Cos;
  c.arg = argp;
  c.partner = sin_id;
  SymId cos_id = intern(std::move(c));
  syms_[(size_t)sin_id].partner = cos_id;
  return {sin_id, cos_id};
}

SymId SymbolTable::exp_kernel(const Expr& arg) {
  std::string name = "exp(" + arg.print() + ")";
  SymId id = lookup(name);
  if (id >= 0) return id;
  SymbolInfo s;
  s.name = name;
  s.kind = SymKind::Exp;
  s.arg = std::make_shared<const Expr>(arg);
  return intern(std::move(s));
}

}  // namespace gct
