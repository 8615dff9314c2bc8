#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "webgeom/point.hpp"

namespace webgeom {

/// Exact literal value. Always reduced, with a positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class Variable { x1, x2, y1, y2 };
enum class BinaryOp { Add, Sub, Mul, Div };
enum class Function { Sin, Cos, Exp, Log };

std::string_view variable_name(Variable v) noexcept;
std::string_view function_name(Function f) noexcept;
/// Slot of the variable in (x1, x2, y1, y2).
inline int variable_slot(Variable v) noexcept { return static_cast<int>(v); }

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct NumberNode {
  // Decimal literals that do not fit an exact rational fall back to double.
  std::variant<Rational, double> value;
  double to_double() const;
};
struct VariableNode {
  Variable var;
};
struct NegateNode {
  ExprPtr operand;
};
struct BinaryNode {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct PowerNode {
  ExprPtr base;
  int exponent;
};
struct CallNode {
  Function fn;
  ExprPtr arg;
};

/// Immutable expression tree node; subtrees are shared, never mutated.
class Expr {
 public:
  using Node = std::variant<NumberNode, VariableNode, NegateNode, BinaryNode, PowerNode, CallNode>;

  explicit Expr(Node node) : node_(std::move(node)) {}

  const Node& node() const noexcept { return node_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&node_);
  }

 private:
  Node node_;
};

ExprPtr make_number(Rational value);
ExprPtr make_number(double value);
ExprPtr make_variable(Variable v);
ExprPtr make_negate(ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_power(ExprPtr base, int exponent);
ExprPtr make_call(Function fn, ExprPtr arg);

/// Parses a single expression. Errors carry 1-based column positions.
ExprPtr parse_expr(std::string_view text);

/// Prints with the minimum parentheses needed so that re-parsing yields a
/// structurally identical tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Plain floating-point evaluation, used for sampling and by the
/// finite-difference checks.
double evaluate(const Expr& e, const BasePoint& p);

struct WebDefinition {
  ExprPtr f1;
  ExprPtr f2;
  std::optional<std::string> name;

  const Expr& component(int i) const { return i == 0 ? *f1 : *f2; }
};

/// Parses a definition file: lines `f1 = <expr>` and `f2 = <expr>`, an
/// optional `name = <text>`, `#` comments, LF or CRLF line endings.
WebDefinition parse_web(std::string_view text);

/// Parses "x1,x2,y1,y2".
BasePoint parse_point(std::string_view text);

}  // namespace webgeom
