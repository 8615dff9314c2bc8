#include "webgeom/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "webgeom/error.hpp"

namespace webgeom {

namespace {

constexpr int kMaxOrder = 12;

int degree(const MultiIndex& a) { return a[0] + a[1] + a[2] + a[3]; }

}  // namespace

JetLayout::JetLayout(int order) : order_(order) {
  for (int d = 0; d <= order; ++d) {
    degree_begin_.push_back(monomials_.size());
    for (int i = d; i >= 0; --i)
      for (int j = d - i; j >= 0; --j)
        for (int k = d - i - j; k >= 0; --k) monomials_.push_back({i, j, k, d - i - j - k});
  }
  degree_begin_.push_back(monomials_.size());

  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    for (std::size_t j = 0; j < monomials_.size(); ++j) {
      const MultiIndex& a = monomials_[i];
      const MultiIndex& b = monomials_[j];
      if (degree(a) + degree(b) > order) continue;
      const MultiIndex s{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
      product_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                          static_cast<std::uint32_t>(index(s))});
    }
  }
}

const JetLayout& JetLayout::get(int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("jet order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  static std::array<std::unique_ptr<JetLayout>, kMaxOrder + 1> cache;
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  std::call_once(flags[order], [order] { cache[order].reset(new JetLayout(order)); });
  return *cache[order];
}

std::size_t JetLayout::index(const MultiIndex& alpha) const {
  const int d = degree(alpha);
  if (d > order_ || *std::min_element(alpha.begin(), alpha.end()) < 0)
    throw std::out_of_range("multi-index outside jet layout");
  // Within a degree block, entries are ordered by descending (a0, a1, a2).
  std::size_t k = degree_begin_[d];
  for (int i = d; i > alpha[0]; --i) k += static_cast<std::size_t>((d - i + 1) * (d - i + 2) / 2);
  const int r = d - alpha[0];
  for (int j = r; j > alpha[1]; --j) k += static_cast<std::size_t>(r - j + 1);
  k += static_cast<std::size_t>(r - alpha[1] - alpha[2]);
  return k;
}

Jet::Jet(int order, double value) : layout_(&JetLayout::get(order)), c_(layout_->size(), 0.0) {
  c_[0] = value;
}

Jet Jet::variable(int slot, double at, int order) {
  Jet j(order, at);
  if (order >= 1) {
    MultiIndex e{0, 0, 0, 0};
    e[slot] = 1;
    j.c_[j.layout_->index(e)] = 1.0;
  }
  return j;
}

double Jet::coeff(const MultiIndex& alpha) const { return c_[layout_->index(alpha)]; }

double& Jet::coeff_ref(const MultiIndex& alpha) { return c_[layout_->index(alpha)]; }

double Jet::derivative(const MultiIndex& alpha) const {
  double fact = 1.0;
  for (int a : alpha)
    for (int k = 2; k <= a; ++k) fact *= k;
  return fact * coeff(alpha);
}

double Jet::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Jet Jet::truncated(int order) const {
  if (order >= this->order()) return *this;
  Jet r(order);
  std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
  return r;
}

Jet Jet::partial(int slot) const {
  if (order() == 0) throw std::logic_error("cannot differentiate an order-0 jet");
  Jet r(order() - 1);
  for (std::size_t k = 0; k < r.c_.size(); ++k) {
    MultiIndex a = r.layout_->monomial(k);
    a[slot] += 1;
    r.c_[k] = a[slot] * c_[layout_->index(a)];
  }
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order() < order()) *this = truncated(o.order());
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  Jet r(order);
  r.c_[0] = 0.0;
  // The layouts of lower order are prefixes of higher ones.
  for (const auto& t : r.layout_->product_terms()) r.c_[t.out] += a.c_[t.lhs] * b.c_[t.rhs];
  return r;
}

namespace {

// sum_k c[k] v^k for nilpotent v (zero value coefficient), by Horner.
Jet compose(const std::vector<double>& c, const Jet& u) {
  Jet v = u;
  v.coefficients()[0] = 0.0;
  Jet r(u.order(), c.back());
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) r = r * v + c[k];
  return r;
}

}  // namespace

Jet reciprocal(const Jet& u, double tol) {
  const double u0 = u.value();
  if (!(std::abs(u0) >= tol))
    throw Error(ErrorCode::SingularEvaluation, "division by a value below tolerance");
  std::vector<double> c(u.order() + 1);
  double t = 1.0 / u0;
  for (auto& ck : c) {
    ck = t;
    t *= -1.0 / u0;
  }
  return compose(c, u);
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet pow(const Jet& u, int n, double tol) {
  if (n < 0) return pow(reciprocal(u, tol), -n, tol);
  Jet result(u.order(), 1.0);
  Jet base = u;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Jet exp(const Jet& u) {
  std::vector<double> c(u.order() + 1);
  double t = std::exp(u.value());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = t;
    t /= static_cast<double>(k + 1);
  }
  return compose(c, u);
}

Jet log(const Jet& u) {
  const double u0 = u.value();
  if (!(u0 > 0.0)) throw Error(ErrorCode::SingularEvaluation, "log of a non-positive value");
  std::vector<double> c(u.order() + 1);
  c[0] = std::log(u0);
  double t = 1.0 / u0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    c[k] = ((k % 2 == 1) ? 1.0 : -1.0) * t / static_cast<double>(k);
    t /= u0;
  }
  return compose(c, u);
}

namespace {

// phase 0 gives sin, phase 1 gives cos; derivatives cycle sin, cos, -sin, -cos.
Jet trig(const Jet& u, int phase) {
  const double s = std::sin(u.value());
  const double co = std::cos(u.value());
  const double cycle[4] = {s, co, -s, -co};
  std::vector<double> c(u.order() + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    c[k] = cycle[(k + phase) % 4] / fact;
  }
  return compose(c, u);
}

}  // namespace

Jet sin(const Jet& u) { return trig(u, 0); }
Jet cos(const Jet& u) { return trig(u, 1); }

namespace {

[[noreturn]] void singular_at(const Expr& e, const std::string& what) {
  throw Error(ErrorCode::SingularEvaluation, what + " in '" + to_string(e) + "'");
}

Jet lift(const Expr& e, const BasePoint& p, int order, double tol) {
  return std::visit(
      [&](const auto& n) -> Jet {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          return Jet(order, n.to_double());
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          const int slot = variable_slot(n.var);
          return Jet::variable(slot, p.coords[slot], order);
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          return -lift(*n.operand, p, order, tol);
        } else if constexpr (std::is_same_v<T, BinaryNode>) {
          Jet l = lift(*n.lhs, p, order, tol);
          Jet r = lift(*n.rhs, p, order, tol);
          switch (n.op) {
            case BinaryOp::Add: return l + r;
            case BinaryOp::Sub: return l - r;
            case BinaryOp::Mul: return l * r;
            case BinaryOp::Div:
              if (!(std::abs(r.value()) >= tol)) singular_at(e, "division by a value near zero");
              return l * reciprocal(r, tol);
          }
          throw std::logic_error("unreachable");
        } else if constexpr (std::is_same_v<T, PowerNode>) {
          Jet b = lift(*n.base, p, order, tol);
          if (n.exponent < 0 && !(std::abs(b.value()) >= tol))
            singular_at(e, "negative power of a value near zero");
          return pow(b, n.exponent, tol);
        } else {
          Jet a = lift(*n.arg, p, order, tol);
          switch (n.fn) {
            case Function::Sin: return sin(a);
            case Function::Cos: return cos(a);
            case Function::Exp: return exp(a);
            case Function::Log:
              if (!(a.value() > 0.0)) singular_at(e, "log of a non-positive value");
              return log(a);
          }
          throw std::logic_error("unreachable");
        }
      },
      e.node());
}

}  // namespace

Jet jet_lift(const Expr& e, const BasePoint& p, int order, double singular_tol) {
  return lift(e, p, order, singular_tol);
}

JetMat2 operator*(const JetMat2& a, const JetMat2& b) {
  JetMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

Jet determinant(const JetMat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

JetMat2 jet_invert_2x2(const JetMat2& m, double tol) {
  const Jet det = determinant(m);
  if (!(std::abs(det.value()) >= tol))
    throw Error(ErrorCode::SingularMatrix,
                "determinant value " + std::to_string(det.value()) + " below tolerance");
  const Jet inv = reciprocal(det, tol);
  JetMat2 r;
  r(0, 0) = m(1, 1) * inv;
  r(0, 1) = -(m(0, 1) * inv);
  r(1, 0) = -(m(1, 0) * inv);
  r(1, 1) = m(0, 0) * inv;
  return r;
}

}  // namespace webgeom
