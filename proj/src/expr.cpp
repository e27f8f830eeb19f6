#include "sffd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "sffd/errors.hpp"

namespace sffd {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

const NodePtr& zero_node() {
  static const NodePtr zero = std::make_shared<const ExprNode>();
  return zero;
}

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->arity = std::max(lhs ? lhs->arity : 0, rhs ? rhs->arity : 0);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  return v < 0 ? "(" + s + ")" : s;
}

std::string node_text(const ExprNode& n, std::span<const std::string> names) {
  auto child = [&](const NodePtr& c) { return node_text(*c, names); };
  switch (n.op) {
    case Op::Constant:
      return format_number(n.value);
    case Op::Coordinate:
      return n.index < names.size() ? names[n.index] : "x" + std::to_string(n.index + 1);
    case Op::Negate:
      return "(-" + child(n.lhs) + ")";
    case Op::Add:
      return "(" + child(n.lhs) + " + " + child(n.rhs) + ")";
    case Op::Subtract:
      return "(" + child(n.lhs) + " - " + child(n.rhs) + ")";
    case Op::Multiply:
      return "(" + child(n.lhs) + " * " + child(n.rhs) + ")";
    case Op::Divide:
      return "(" + child(n.lhs) + " / " + child(n.rhs) + ")";
    case Op::Power:
      return "(" + child(n.lhs) + "^" + child(n.rhs) + ")";
    case Op::Sqrt:
      return "sqrt(" + child(n.lhs) + ")";
    case Op::Sin:
      return "sin(" + child(n.lhs) + ")";
    case Op::Cos:
      return "cos(" + child(n.lhs) + ")";
    case Op::Exp:
      return "exp(" + child(n.lhs) + ")";
    case Op::Ln:
      return "ln(" + child(n.lhs) + ")";
  }
  return "?";
}

[[noreturn]] void domain_fail(const ExprNode& n, const std::string& what) {
  throw DomainError(what + " in '" + node_text(n, {}) + "'");
}

// Largest exponent magnitude evaluated by repeated multiplication.
constexpr double kMaxIntegerPower = 1024.0;

double scalar_value(const double& v) { return v; }
double scalar_value(const Dual& v) { return v.value; }

template <typename T>
T lift(double v);
template <>
double lift<double>(double v) { return v; }
template <>
Dual lift<Dual>(double v) { return Dual::constant(v); }

template <typename T>
T int_power(const T& base, long k) {
  T r = lift<T>(1.0);
  for (long i = 0; i < k; ++i) r = r * base;
  return r;
}

template <typename T>
T real_power(const T& base, double c);
template <>
double real_power<double>(const double& base, double c) { return std::pow(base, c); }
template <>
Dual real_power<Dual>(const Dual& base, double c) {
  return chain(base, std::pow(base.value, c), c * std::pow(base.value, c - 1.0));
}

template <typename T>
T eval_node(const ExprNode& n, std::span<const double> x) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (n.op) {
    case Op::Constant:
      return lift<T>(n.value);
    case Op::Coordinate:
      if (n.index >= x.size()) domain_fail(n, "coordinate index out of range");
      if constexpr (std::is_same_v<T, Dual>) {
        return Dual::variable(x[n.index], n.index);
      } else {
        return x[n.index];
      }
    case Op::Negate:
      return -eval_node<T>(*n.lhs, x);
    case Op::Add:
      return eval_node<T>(*n.lhs, x) + eval_node<T>(*n.rhs, x);
    case Op::Subtract:
      return eval_node<T>(*n.lhs, x) - eval_node<T>(*n.rhs, x);
    case Op::Multiply:
      return eval_node<T>(*n.lhs, x) * eval_node<T>(*n.rhs, x);
    case Op::Divide: {
      const T den = eval_node<T>(*n.rhs, x);
      if (scalar_value(den) == 0.0) domain_fail(n, "division by zero");
      return eval_node<T>(*n.lhs, x) / den;
    }
    case Op::Power: {
      const T base = eval_node<T>(*n.lhs, x);
      const double b = scalar_value(base);
      if (n.rhs->arity == 0) {
        const double c = eval_node<double>(*n.rhs, x);
        if (c == std::round(c) && std::abs(c) <= kMaxIntegerPower) {
          const long k = static_cast<long>(c);
          if (k >= 0) return int_power(base, k);
          if (b == 0.0) domain_fail(n, "zero raised to a negative power");
          return lift<T>(1.0) / int_power(base, -k);
        }
        if (!(b > 0.0)) domain_fail(n, "non-positive base with non-integer exponent");
        return real_power(base, c);
      }
      if (!(b > 0.0)) domain_fail(n, "non-positive base with variable exponent");
      return exp(eval_node<T>(*n.rhs, x) * log(base));
    }
    case Op::Sqrt: {
      const T a = eval_node<T>(*n.lhs, x);
      const double v = scalar_value(a);
      if (v < 0.0) domain_fail(n, "sqrt of negative value");
      if constexpr (std::is_same_v<T, Dual>) {
        if (v == 0.0) domain_fail(n, "sqrt derivative undefined at zero");
      }
      return sqrt(a);
    }
    case Op::Sin:
      return sin(eval_node<T>(*n.lhs, x));
    case Op::Cos:
      return cos(eval_node<T>(*n.lhs, x));
    case Op::Exp:
      return exp(eval_node<T>(*n.lhs, x));
    case Op::Ln: {
      const T a = eval_node<T>(*n.lhs, x);
      if (!(scalar_value(a) > 0.0)) domain_fail(n, "ln of non-positive value");
      return log(a);
    }
  }
  domain_fail(n, "unknown node");
}

std::optional<double> try_fold(Op op, const NodePtr& a, const NodePtr& b) {
  if (a && a->arity != 0) return std::nullopt;
  if (b && b->arity != 0) return std::nullopt;
  if ((a && a->op != Op::Constant) || (b && b->op != Op::Constant)) return std::nullopt;
  try {
    const double v = eval_node<double>(*make_node(op, a, b), {});
    if (std::isfinite(v)) return v;
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  Expression run() {
    Expression e = additive();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression additive() {
    Expression lhs = multiplicative();
    for (;;) {
      if (accept('+')) {
        lhs = Expression::raw(Op::Add, lhs, multiplicative());
      } else if (accept('-')) {
        lhs = Expression::raw(Op::Subtract, lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Expression multiplicative() {
    Expression lhs = power();
    for (;;) {
      if (accept('*')) {
        lhs = Expression::raw(Op::Multiply, lhs, power());
      } else if (accept('/')) {
        lhs = Expression::raw(Op::Divide, lhs, power());
      } else {
        return lhs;
      }
    }
  }

  Expression power() {
    Expression base = unary();
    if (accept('^')) return Expression::raw(Op::Power, base, power());
    return base;
  }

  Expression unary() {
    if (accept('-')) return Expression::raw(Op::Negate, unary());
    return primary();
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = additive();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail("malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    const std::string literal(text_.substr(start, pos_ - start));
    return Expression::constant(std::strtod(literal.c_str(), nullptr));
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    skip_ws();
    const bool call = pos_ < text_.size() && text_[pos_] == '(';
    if (!call) {
      for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] == name) return Expression::coordinate(i);
      if (function_op(name)) {
        pos_ = start;
        fail("function '" + name + "' requires an argument list");
      }
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }

    const auto op = function_op(name);
    if (!op) {
      pos_ = start;
      fail("unknown function '" + name + "'");
    }
    ++pos_;  // '('
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') fail("function '" + name + "' takes 1 argument, got 0");
    Expression arg = additive();
    if (accept(',')) fail("function '" + name + "' takes 1 argument");
    if (!accept(')')) fail("expected ')'");
    return Expression::raw(*op, arg);
  }

  static std::optional<Op> function_op(const std::string& name) {
    if (name == "sqrt") return Op::Sqrt;
    if (name == "sin") return Op::Sin;
    if (name == "cos") return Op::Cos;
    if (name == "exp") return Op::Exp;
    if (name == "ln") return Op::Ln;
    return std::nullopt;
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : node_(zero_node()) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Constant;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::coordinate(std::size_t index) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Coordinate;
  n->index = index;
  n->arity = index + 1;
  return Expression(std::move(n));
}

Expression Expression::raw(Op op, Expression a, Expression b) {
  const bool binary = op == Op::Add || op == Op::Subtract || op == Op::Multiply ||
                      op == Op::Divide || op == Op::Power;
  return Expression(make_node(op, a.node_, binary ? b.node_ : nullptr));
}

Op Expression::op() const { return node_->op; }

bool Expression::is_constant() const { return node_->op == Op::Constant; }

std::optional<double> Expression::constant_value() const {
  if (is_constant()) return node_->value;
  return std::nullopt;
}

bool Expression::is_zero() const { return is_constant() && node_->value == 0.0; }

std::size_t Expression::arity() const { return node_->arity; }

double Expression::eval(std::span<const double> x) const { return eval_node<double>(*node_, x); }

Dual Expression::eval_dual(std::span<const double> x) const {
  if (x.size() > kMaxDim) throw DomainError("point dimension exceeds " + std::to_string(kMaxDim));
  return eval_node<Dual>(*node_, x);
}

std::string Expression::to_string(std::span<const std::string> names) const {
  return node_text(*node_, names);
}

Expression Expression::derivative(std::size_t index) const {
  const ExprNode& n = *node_;
  if (n.arity <= index && n.op != Op::Coordinate) return Expression::constant(0.0);
  const Expression a = n.lhs ? Expression(n.lhs) : Expression();
  const Expression b = n.rhs ? Expression(n.rhs) : Expression();
  switch (n.op) {
    case Op::Constant:
      return Expression::constant(0.0);
    case Op::Coordinate:
      return Expression::constant(n.index == index ? 1.0 : 0.0);
    case Op::Negate:
      return -a.derivative(index);
    case Op::Add:
      return a.derivative(index) + b.derivative(index);
    case Op::Subtract:
      return a.derivative(index) - b.derivative(index);
    case Op::Multiply:
      return a.derivative(index) * b + a * b.derivative(index);
    case Op::Divide:
      return a.derivative(index) / b - a * b.derivative(index) / (b * b);
    case Op::Power: {
      if (b.arity() == 0) {
        const double c = b.eval({});
        return Expression::constant(c) * pow(a, Expression::constant(c - 1.0)) * a.derivative(index);
      }
      return *this * (b.derivative(index) * ln(a) + b * a.derivative(index) / a);
    }
    case Op::Sqrt:
      return a.derivative(index) / (Expression::constant(2.0) * *this);
    case Op::Sin:
      return cos(a) * a.derivative(index);
    case Op::Cos:
      return -(sin(a) * a.derivative(index));
    case Op::Exp:
      return *this * a.derivative(index);
    case Op::Ln:
      return a.derivative(index) / a;
  }
  return Expression::constant(0.0);
}

namespace {

Expression folded_or(Op op, const Expression& a, const Expression* b) {
  const auto v = try_fold(op, a.node_ptr(), b ? b->node_ptr() : nullptr);
  if (v) return Expression::constant(*v);
  return Expression::raw(op, a, b ? *b : Expression());
}

bool is_value(const Expression& e, double v) { return e.is_constant() && *e.constant_value() == v; }

}  // namespace

Expression operator-(const Expression& a) {
  if (a.op() == Op::Negate) return Expression(a.node().lhs);
  return folded_or(Op::Negate, a, nullptr);
}

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return folded_or(Op::Add, a, &b);
}

Expression operator-(const Expression& a, const Expression& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return folded_or(Op::Subtract, a, &b);
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_zero() || b.is_zero()) return Expression::constant(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  return folded_or(Op::Multiply, a, &b);
}

Expression operator/(const Expression& a, const Expression& b) {
  if (is_value(b, 1.0)) return a;
  return folded_or(Op::Divide, a, &b);
}

Expression pow(const Expression& base, const Expression& exponent) {
  if (is_value(exponent, 1.0)) return base;
  if (is_value(exponent, 0.0)) return Expression::constant(1.0);
  return folded_or(Op::Power, base, &exponent);
}

Expression sqrt(const Expression& a) { return folded_or(Op::Sqrt, a, nullptr); }
Expression sin(const Expression& a) { return folded_or(Op::Sin, a, nullptr); }
Expression cos(const Expression& a) { return folded_or(Op::Cos, a, nullptr); }
Expression exp(const Expression& a) { return folded_or(Op::Exp, a, nullptr); }
Expression ln(const Expression& a) { return folded_or(Op::Ln, a, nullptr); }

Expression operator*(double a, const Expression& b) { return Expression::constant(a) * b; }
Expression operator+(double a, const Expression& b) { return Expression::constant(a) + b; }

Expression parse(std::string_view text, std::span<const std::string> coords) {
  return Parser(text, coords).run();
}

Dual eval_with_gradient(const Expression& e, std::span<const double> x) { return e.eval_dual(x); }

}  // namespace sffd
