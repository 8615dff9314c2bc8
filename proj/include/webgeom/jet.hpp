#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "webgeom/expr.hpp"
#include "webgeom/point.hpp"

namespace webgeom {

using MultiIndex = std::array<int, 4>;

/// Fixed enumeration of the multi-indices |alpha| <= order in four variables,
/// graded by total degree, lexicographic (descending) within a degree.
class JetLayout {
 public:
  struct Term {
    std::uint32_t lhs, rhs, out;
  };

  static const JetLayout& get(int order);

  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const MultiIndex& monomial(std::size_t k) const { return monomials_[k]; }
  std::size_t index(const MultiIndex& alpha) const;
  /// First index of total degree `d` (degree_begin(order+1) == size()).
  std::size_t degree_begin(int d) const { return degree_begin_[d]; }

  /// All (i, j, k) with monomial(i) + monomial(j) == monomial(k).
  const std::vector<Term>& product_terms() const { return product_; }

 private:
  explicit JetLayout(int order);

  int order_;
  std::vector<MultiIndex> monomials_;
  std::vector<std::size_t> degree_begin_;
  std::vector<Term> product_;
};

/// Truncated Taylor expansion in (x1, x2, y1, y2) around a base point.
/// coeff(alpha) is d^alpha g / alpha! at the base point. Binary operations on
/// jets of different order truncate to the lower one.
class Jet {
 public:
  Jet() : Jet(0) {}
  explicit Jet(int order, double value = 0.0);

  static Jet constant(double value, int order) { return Jet(order, value); }
  /// The coordinate function in `slot` lifted at `at`.
  static Jet variable(int slot, double at, int order);

  int order() const noexcept { return layout_->order(); }
  const JetLayout& layout() const noexcept { return *layout_; }
  double value() const noexcept { return c_[0]; }
  double coeff(const MultiIndex& alpha) const;
  double& coeff_ref(const MultiIndex& alpha);
  /// Partial derivative d^alpha g at the base point (alpha! times the coefficient).
  double derivative(const MultiIndex& alpha) const;
  const std::vector<double>& coefficients() const noexcept { return c_; }
  std::vector<double>& coefficients() noexcept { return c_; }
  double max_abs() const;

  Jet truncated(int order) const;
  /// d/d(slot); the result has order one less.
  Jet partial(int slot) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }

 private:
  const JetLayout* layout_;
  std::vector<double> c_;
};

/// 1/u; throws SingularEvaluation when |u(0)| < tol.
Jet reciprocal(const Jet& u, double tol = 1e-12);
Jet operator/(const Jet& a, const Jet& b);
Jet pow(const Jet& u, int n, double tol = 1e-12);
Jet exp(const Jet& u);
/// Throws SingularEvaluation when u(0) <= 0.
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);

/// Taylor expansion of an expression at p. Singular subexpressions raise
/// SingularEvaluation naming the offending subexpression.
Jet jet_lift(const Expr& e, const BasePoint& p, int order, double singular_tol = 1e-12);

template <class T>
struct Mat2 {
  std::array<std::array<T, 2>, 2> m;

  T& operator()(int i, int j) { return m[i][j]; }
  const T& operator()(int i, int j) const { return m[i][j]; }
};

using JetMat2 = Mat2<Jet>;

JetMat2 operator*(const JetMat2& a, const JetMat2& b);
Jet determinant(const JetMat2& m);
/// Throws SingularMatrix when |det value| < tol.
JetMat2 jet_invert_2x2(const JetMat2& m, double tol = 1e-12);

}  // namespace webgeom
