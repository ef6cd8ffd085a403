#pragma once

#include <memory>
#include <string>

namespace wkam {

// Closed-form scalar expression in the torus coordinates x, y, the 1-based
// component index i, and the constant pi. Supports + - * / ^, unary minus,
// parentheses, and the functions sin, cos, tan, sqrt, exp, log, abs, pow.
// Exponents must be constant subexpressions so that derivatives stay exact.
class Expression {
 public:
  Expression() = default;

  // Throws std::invalid_argument with a position diagnostic on bad input.
  static Expression parse(const std::string& text);

  double eval(double x, double y, int comp) const;

  // Exact partial derivative in axis 0 (x) or 1 (y).
  Expression derivative(int axis) const;

  bool valid() const { return root_ != nullptr; }
  const std::string& text() const { return text_; }

  struct Node;  // parse-tree node; public so the out-of-line machinery can build trees

 private:
  explicit Expression(std::shared_ptr<const Node> root, std::string text)
      : root_(std::move(root)), text_(std::move(text)) {}

  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace wkam
