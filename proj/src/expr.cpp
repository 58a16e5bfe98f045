#include "equidyn/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace equidyn {
namespace {

constexpr int kMaxStack = 64;
constexpr int kMaxExponent = 32;

enum FuncId : int { f_sin, f_cos, f_sinh, f_cosh, f_abs, f_sqrt, f_exp };

const std::array<std::pair<const char*, int>, 7> kFunctions = {{
    {"sin", f_sin},
    {"cos", f_cos},
    {"sinh", f_sinh},
    {"cosh", f_cosh},
    {"abs", f_abs},
    {"sqrt", f_sqrt},
    {"exp", f_exp},
}};

struct Parser {
  const std::string& src;
  const std::vector<std::string>& vars;
  std::size_t pos = 0;
  std::vector<CompiledExpr::Op>& ops;
  int depth = 0;
  int max_depth = 0;

  void push(CompiledExpr::Op::Kind k, std::int32_t arg = 0, double value = 0.0) {
    ops.push_back({k, arg, value});
    switch (k) {
      case CompiledExpr::Op::push_const:
      case CompiledExpr::Op::push_var:
        if (++depth > max_depth) max_depth = depth;
        break;
      case CompiledExpr::Op::add:
      case CompiledExpr::Op::sub:
      case CompiledExpr::Op::mul:
      case CompiledExpr::Op::div:
        --depth;
        break;
      default:
        break;
    }
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) { throw ExprError(msg, at); }

  void expression() {
    term();
    while (true) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos;
        term();
        push(c == '+' ? CompiledExpr::Op::add : CompiledExpr::Op::sub);
      } else {
        break;
      }
    }
  }

  void term() {
    factor();
    while (true) {
      char c = peek();
      if (c == '*' || c == '/') {
        ++pos;
        factor();
        push(c == '*' ? CompiledExpr::Op::mul : CompiledExpr::Op::div);
      } else {
        break;
      }
    }
  }

  // unary chain, then an optional integer power
  void factor() {
    unary();
    if (peek() == '^') {
      std::size_t caret = pos;
      ++pos;
      skip_ws();
      std::size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      if (pos == start) fail("exponent must be a nonnegative integer literal", caret);
      if (pos < src.size() && (src[pos] == '.' || src[pos] == 'e' || src[pos] == 'E'))
        fail("exponent must be a nonnegative integer literal", start);
      long n = std::strtol(src.c_str() + start, nullptr, 10);
      if (n > kMaxExponent) fail("exponent is too large", start);
      push(CompiledExpr::Op::pow_int, static_cast<std::int32_t>(n));
      if (peek() == '^') fail("'^' does not chain; parenthesize the base", pos);
    }
  }

  void unary() {
    int negations = 0;
    while (peek() == '-') {
      ++pos;
      ++negations;
    }
    primary();
    if (negations % 2 == 1) push(CompiledExpr::Op::neg);
  }

  void primary() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of expression", pos);
    char c = src[pos];
    if (c == '(') {
      std::size_t open = pos;
      ++pos;
      expression();
      if (peek() != ')') fail("unbalanced '('", open);
      ++pos;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src.c_str() + pos;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number", pos);
      pos += static_cast<std::size_t>(end - begin);
      push(CompiledExpr::Op::push_const, 0, v);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                  src[pos] == '_'))
        ++pos;
      std::string name = src.substr(start, pos - start);
      if (name == "pi") {
        push(CompiledExpr::Op::push_const, 0, kPi);
        return;
      }
      for (const auto& [fname, fid] : kFunctions) {
        if (name == fname) {
          if (peek() != '(') fail("function '" + name + "' needs an argument", start);
          ++pos;
          expression();
          if (peek() != ')') fail("unbalanced '(' in call to '" + name + "'", start);
          ++pos;
          push(CompiledExpr::Op::call, fid);
          return;
        }
      }
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == name) {
          push(CompiledExpr::Op::push_var, static_cast<std::int32_t>(i));
          return;
        }
      }
      std::string scope;
      for (const auto& v : vars) {
        if (!scope.empty()) scope += ", ";
        scope += v;
      }
      fail("unknown variable '" + name + "'; in scope: " + (scope.empty() ? "(none)" : scope),
           start);
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }
};

}  // namespace

CompiledExpr::CompiledExpr() { ops_.push_back({Op::push_const, 0, 0.0}); }

bool CompiledExpr::depends_on(int var_index) const {
  for (const Op& op : ops_)
    if (op.kind == Op::push_var && op.arg == var_index) return true;
  return false;
}

double CompiledExpr::eval(std::span<const double> vars) const {
  double stack[kMaxStack];
  int sp = 0;
  for (const Op& op : ops_) {
    switch (op.kind) {
      case Op::push_const:
        stack[sp++] = op.value;
        break;
      case Op::push_var:
        stack[sp++] = vars[op.arg];
        break;
      case Op::neg:
        stack[sp - 1] = -stack[sp - 1];
        break;
      case Op::add:
        --sp;
        stack[sp - 1] += stack[sp];
        break;
      case Op::sub:
        --sp;
        stack[sp - 1] -= stack[sp];
        break;
      case Op::mul:
        --sp;
        stack[sp - 1] *= stack[sp];
        break;
      case Op::div:
        --sp;
        stack[sp - 1] /= stack[sp];
        break;
      case Op::pow_int: {
        double base = stack[sp - 1];
        double r = 1.0;
        for (int i = 0; i < op.arg; ++i) r *= base;
        stack[sp - 1] = r;
        break;
      }
      case Op::call: {
        double& v = stack[sp - 1];
        switch (op.arg) {
          case f_sin: v = std::sin(v); break;
          case f_cos: v = std::cos(v); break;
          case f_sinh: v = std::sinh(v); break;
          case f_cosh: v = std::cosh(v); break;
          case f_abs: v = std::fabs(v); break;
          case f_sqrt: v = std::sqrt(v); break;
          case f_exp: v = std::exp(v); break;
        }
        break;
      }
    }
  }
  return stack[0];
}

CompiledExpr parse_expression(const std::string& source,
                              const std::vector<std::string>& variables) {
  CompiledExpr e;
  e.ops_.clear();
  e.source_ = source;
  Parser p{source, variables, 0, e.ops_, 0, 0};
  p.expression();
  if (!p.at_end()) p.fail("trailing input after expression", p.pos);
  if (p.max_depth > kMaxStack) p.fail("expression is too deep", 0);
  return e;
}

}  // namespace equidyn
