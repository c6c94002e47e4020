#pragma once
// Surface syntax for expressions: infix arithmetic with +,-,*,/,^, integer
// literals, sin/cos/exp kernels, and arbitrary-function jets written f(t) /
// D(f,k)(t). parse(print(e)) == e on normalized expressions.
#include <map>
#include <set>
#include <string>

#include "exprcore/expr.hpp"

namespace gct {

struct ParseScope {
  std::map<std::string, SymId> names;  // declared coordinates and constants
  std::set<std::string> funcs;         // declared arbitrary-function names
};

Expr parse_expr(const std::string& text, const ParseScope& scope);

}  // namespace gct
