#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sffd/dual.hpp"

namespace sffd {

enum class Op {
  Constant,
  Coordinate,
  Negate,
  Add,
  Subtract,
  Multiply,
  Divide,
  Power,
  Sqrt,
  Sin,
  Cos,
  Exp,
  Ln,
};

struct ExprNode;

// Immutable closed-form function of chart coordinates.
//
// Copies share the underlying tree. The arithmetic operators build new
// trees (with light constant folding), so products and sums of
// expressions keep exact derivatives.
class Expression {
 public:
  Expression();  // the constant 0

  static Expression constant(double value);
  static Expression coordinate(std::size_t index);

  Op op() const;
  bool is_constant() const;
  std::optional<double> constant_value() const;
  bool is_zero() const;

  // One past the largest coordinate index referenced (0 for constants).
  std::size_t arity() const;

  // Throws DomainError naming the offending node.
  double eval(std::span<const double> x) const;

  // Value plus all partials with respect to x[0..x.size()).
  Dual eval_dual(std::span<const double> x) const;

  // Expression-level partial derivative with respect to coordinate `index`.
  Expression derivative(std::size_t index) const;

  // Fully parenthesised text that `parse` reads back to the same function.
  // Coordinates without a supplied name print as x1, x2, ...
  std::string to_string(std::span<const std::string> names = {}) const;

  friend Expression operator-(const Expression& a);
  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression pow(const Expression& base, const Expression& exponent);
  friend Expression sqrt(const Expression& a);
  friend Expression sin(const Expression& a);
  friend Expression cos(const Expression& a);
  friend Expression exp(const Expression& a);
  friend Expression ln(const Expression& a);

  // Builds a node with no folding; used by the parser so the tree mirrors the text.
  static Expression raw(Op op, Expression a, Expression b = {});

  explicit Expression(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  const ExprNode& node() const { return *node_; }
  const std::shared_ptr<const ExprNode>& node_ptr() const { return node_; }

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  Op op = Op::Constant;
  double value = 0.0;     // Constant
  std::size_t index = 0;  // Coordinate
  std::shared_ptr<const ExprNode> lhs;  // unary operand or left child
  std::shared_ptr<const ExprNode> rhs;
  std::size_t arity = 0;
};

Expression operator*(double a, const Expression& b);
Expression operator+(double a, const Expression& b);

// Parses `text` over the named coordinates.
//
// Grammar: additive ('+'|'-'), multiplicative ('*'|'/'), unary '-', power
// '^' (right associative), primaries: decimal literals with optional
// exponent, coordinate names, parentheses, and the functions sqrt, sin,
// cos, exp, ln. Unary minus binds tighter than '^', so "-x^2" is (-x)^2.
// Throws ParseError.
Expression parse(std::string_view text, std::span<const std::string> coords);

// Value and exact gradient at `x`.
Dual eval_with_gradient(const Expression& e, std::span<const double> x);

}  // namespace sffd
