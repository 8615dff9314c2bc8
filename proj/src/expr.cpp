#include "webgeom/expr.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "webgeom/error.hpp"

namespace webgeom {

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::SingularEvaluation, "rational literal with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

double NumberNode::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value)) return r->to_double();
  return std::get<double>(value);
}

std::string_view variable_name(Variable v) noexcept {
  switch (v) {
    case Variable::x1: return "x1";
    case Variable::x2: return "x2";
    case Variable::y1: return "y1";
    case Variable::y2: return "y2";
  }
  return "?";
}

std::string_view function_name(Function f) noexcept {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
  }
  return "?";
}

ExprPtr make_number(Rational value) { return std::make_shared<const Expr>(NumberNode{value}); }
ExprPtr make_number(double value) { return std::make_shared<const Expr>(NumberNode{value}); }
ExprPtr make_variable(Variable v) { return std::make_shared<const Expr>(VariableNode{v}); }
ExprPtr make_negate(ExprPtr operand) {
  return std::make_shared<const Expr>(NegateNode{std::move(operand)});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(BinaryNode{op, std::move(lhs), std::move(rhs)});
}
ExprPtr make_power(ExprPtr base, int exponent) {
  return std::make_shared<const Expr>(PowerNode{std::move(base), exponent});
}
ExprPtr make_call(Function fn, ExprPtr arg) {
  return std::make_shared<const Expr>(CallNode{fn, std::move(arg)});
}

namespace {

// 1: additive, 2: multiplicative, 3: factor/atom level.
int precedence(const Expr& e) {
  if (const auto* b = e.as<BinaryNode>())
    return (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) ? 1 : 2;
  return 3;
}

char op_char(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
  }
  return '?';
}

std::string number_text(const NumberNode& n) {
  if (const auto* r = std::get_if<Rational>(&n.value)) {
    if (r->is_integer()) return std::to_string(r->num);
    // Parenthesized so the division folds back into one literal.
    return "(" + std::to_string(r->num) + "/" + std::to_string(r->den) + ")";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(n.value));
  return buf;
}

bool is_atom(const Expr& e) {
  return e.as<NumberNode>() || e.as<VariableNode>() || e.as<CallNode>() || e.as<NegateNode>();
}

std::string print(const Expr& e);

std::string print_atom(const Expr& e) {
  if (is_atom(e)) return print(e);
  return "(" + print(e) + ")";
}

std::string print(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          return number_text(n);
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return std::string(variable_name(n.var));
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          return "-" + print_atom(*n.operand);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          const int p = precedence(e);
          std::string lhs = print(*n.lhs);
          if (precedence(*n.lhs) < p) lhs = "(" + lhs + ")";
          std::string rhs = print(*n.rhs);
          if (precedence(*n.rhs) <= p) rhs = "(" + rhs + ")";
          return lhs + " " + op_char(n.op) + " " + rhs;
        } else if constexpr (std::is_same_v<T, PowerNode>) {
          return print_atom(*n.base) + "^" + std::to_string(n.exponent);
        } else {
          return std::string(function_name(n.fn)) + "(" + print(*n.arg) + ")";
        }
      },
      e.node());
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        const T& m = std::get<T>(b.node());
        if constexpr (std::is_same_v<T, NumberNode>) {
          return n.value == m.value;
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return n.var == m.var;
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          return structurally_equal(*n.operand, *m.operand);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          return n.op == m.op && structurally_equal(*n.lhs, *m.lhs) &&
                 structurally_equal(*n.rhs, *m.rhs);
        } else if constexpr (std::is_same_v<T, PowerNode>) {
          return n.exponent == m.exponent && structurally_equal(*n.base, *m.base);
        } else {
          return n.fn == m.fn && structurally_equal(*n.arg, *m.arg);
        }
      },
      a.node());
}

double evaluate(const Expr& e, const BasePoint& p) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          return n.to_double();
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return p.coords[variable_slot(n.var)];
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          return -evaluate(*n.operand, p);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          const double l = evaluate(*n.lhs, p);
          const double r = evaluate(*n.rhs, p);
          switch (n.op) {
            case BinaryOp::Add: return l + r;
            case BinaryOp::Sub: return l - r;
            case BinaryOp::Mul: return l * r;
            case BinaryOp::Div: return l / r;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, PowerNode>) {
          return std::pow(evaluate(*n.base, p), n.exponent);
        } else {
          const double x = evaluate(*n.arg, p);
          switch (n.fn) {
            case Function::Sin: return std::sin(x);
            case Function::Cos: return std::cos(x);
            case Function::Exp: return std::exp(x);
            case Function::Log: return std::log(x);
          }
          return 0.0;
        }
      },
      e.node());
}

}  // namespace webgeom
