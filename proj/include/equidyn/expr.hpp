#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "equidyn/util.hpp"

namespace equidyn {

// Parse failure with the byte offset into the source string where it happened.
struct ExprError : ConfigError {
  std::size_t offset = 0;
  ExprError(const std::string& msg, std::size_t off)
      : ConfigError(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

// A scalar expression compiled against a fixed, ordered variable list.
// Evaluation is allocation-free and thread-safe, so it can sit inside the
// per-agent field loop.
class CompiledExpr {
 public:
  CompiledExpr();  // constant zero

  double eval(std::span<const double> vars) const;
  const std::string& source() const { return source_; }
  bool depends_on(int var_index) const;

  struct Op {
    enum Kind : std::uint8_t { push_const, push_var, neg, add, sub, mul, div, pow_int, call };
    Kind kind;
    std::int32_t arg;
    double value;
  };

 private:
  friend CompiledExpr parse_expression(const std::string&, const std::vector<std::string>&);

  std::string source_;
  std::vector<Op> ops_;
};

// Grammar, loosest to tightest binding: '+'/'-', '*'/'/', '^' (integer
// literal exponent only, no chaining), unary '-'. Unary minus binds tighter
// than '^', so "-x^2" squares the negated value. Functions: sin cos sinh
// cosh abs sqrt exp. "pi" is a constant. Unknown identifiers are rejected
// with the list of variables that are in scope.
CompiledExpr parse_expression(const std::string& source,
                              const std::vector<std::string>& variables);

}  // namespace equidyn
