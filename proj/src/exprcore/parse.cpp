#include "exprcore/parse.hpp"

#include <cctype>

#include "exprcore/errors.hpp"

namespace gct {

namespace {

struct Parser {
  const std::string& s;
  const ParseScope& scope;
  size_t i = 0;

  Parser(const std::string& text, const ParseScope& sc) : s(text), scope(sc) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw GctError(ErrCode::ParseError,
                   msg + " at position " + std::to_string(i) + " in '" + s + "'");
  }

  void skip_ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  long integer() {
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    if (i >= s.size() || !std::isdigit((unsigned char)s[i])) fail("expected integer");
    long v = 0;
    while (i < s.size() && std::isdigit((unsigned char)s[i]))
      v = v * 10 + (s[i++] - '0');
    return neg ? -v : v;
  }

  std::string ident() {
    skip_ws();
    if (i >= s.size() ||
        !(std::isalpha((unsigned char)s[i]) || s[i] == '_'))
      fail("expected identifier");
    size_t b = i;
    while (i < s.size() &&
           (std::isalnum((unsigned char)s[i]) || s[i] == '_'))
      ++i;
    return s.substr(b, i - b);
  }

  Expr expr() {
    Expr r = term();
    while (true) {
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }

  Expr term() {
    Expr r = unary();
    while (true) {
      if (eat('*'))
        r = r * unary();
      else if (eat('/'))
        r = r / unary();
      else
        return r;
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr b = atom();
    if (eat('^')) return b.pow((int)integer());
    return b;
  }

  Expr atom() {
    skip_ws();
    if (i >= s.size()) fail("unexpected end of input");
    char c = s[i];
    if (std::isdigit((unsigned char)c)) return Expr::from_int(integer());
    if (c == '(') {
      ++i;
      Expr r = expr();
      expect(')');
      return r;
    }
    std::string name = ident();
    if (name == "sin" || name == "cos" || name == "exp") {
      expect('(');
      Expr a = expr();
      expect(')');
      if (name == "sin") return Expr::sin(a);
      if (name == "cos") return Expr::cos(a);
      return Expr::exp(a);
    }
    if (name == "D" && peek() == '(') {
      expect('(');
      std::string f = ident();
      if (!scope.funcs.count(f)) fail("undeclared function '" + f + "'");
      expect(',');
      long k = integer();
      if (k < 0) fail("negative jet order");
      expect(')');
      expect('(');
      ident();  // the source variable, conventionally t
      expect(')');
      return Expr::jet(f, (int)k);
    }
    if (scope.funcs.count(name)) {
      expect('(');
      ident();
      expect(')');
      return Expr::jet(name, 0);
    }
    auto it = scope.names.find(name);
    if (it == scope.names.end()) fail("undeclared symbol '" + name + "'");
    return Expr::sym(it->second);
  }
};

}  // namespace

Expr parse_expr(const std::string& text, const ParseScope& scope) {
  Parser p(text, scope);
  Expr r = p.expr();
  p.skip_ws();
  if (p.i != text.size()) p.fail("trailing input");
  return r;
}

}  // namespace gct
