#ifndef ICEFEM_EXPR_HPP
#define ICEFEM_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

namespace icefem {

/// Error in parsing or evaluating an expression; offset is the byte
/// position in the source text.
struct ExprError : std::runtime_error {
  size_t offset;
  ExprError(const std::string& msg, size_t offset_)
      : std::runtime_error(msg + " at offset " + std::to_string(offset_)),
        offset(offset_) {}
};

/// Arithmetic expression over the variables x, y, t.
///
/// Grammar (precedence low to high): + -, * /, unary -, ^ (right
/// associative).  Functions: sin, cos, sqrt, exp, abs (unary) and min, max
/// (binary).  Division by zero and domain violations raise ExprError on
/// evaluation.
class Expr {
 public:
  static Expr parse(const std::string& text);
  static Expr constant(double v);

  double evaluate(double x, double y, double t = 0.0) const;

  /// Canonical fully parenthesized form; parsing it again yields an
  /// identical tree.
  std::string print() const;

  bool uses_t() const;

  struct Node;
  const Node* root() const { return root_.get(); }

 private:
  std::shared_ptr<const Node> root_;
};

/// Structural tree equality.
bool tree_equal(const Expr& a, const Expr& b);

}  // namespace icefem

#endif
