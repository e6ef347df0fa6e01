#pragma once

#include <memory>
#include <string>

namespace gfbm {

/// Compiled arithmetic expression in one variable `u`.
///
/// Grammar: numbers, u, pi, e, + - * / ^ (right associative), unary minus,
/// parentheses and the functions exp, log, sqrt, abs, sin, cos, tanh, pow(a,b).
class Expression {
 public:
  /// Throws ConfigError with the offending position on a syntax error.
  explicit Expression(const std::string& text);

  double operator()(double u) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace gfbm
