#include "webgeom/frame.hpp"

#include <algorithm>
#include <cmath>

#include "webgeom/error.hpp"

namespace webgeom {

CoframeJet build_coframe(const WebDefinition& w, const BasePoint& p, int order, double det_tol) {
  if (!p.finite()) throw Error(ErrorCode::SyntaxError, "base point has non-finite coordinates");
  CoframeJet c;
  c.base = p;
  for (int i = 0; i < 2; ++i) {
    const Jet fi = jet_lift(w.component(i), p, order);
    for (int j = 0; j < 2; ++j) {
      c.lambda(i, j) = fi.partial(j);
      c.mu(i, j) = fi.partial(2 + j);
    }
  }
  const double dl = determinant(c.lambda).value();
  const double dm = determinant(c.mu).value();
  if (!(std::abs(dl) >= det_tol) || !(std::abs(dm) >= det_tol))
    throw Error(ErrorCode::NotAWebAtPoint,
                "foliations not in general position: det(df/dx) = " + std::to_string(dl) +
                    ", det(df/dy) = " + std::to_string(dm));
  return c;
}

double TwoForm::max_abs_value() const {
  double m = 0.0;
  for (const auto& row : c)
    for (const auto& v : row) m = std::max(m, std::abs(v.value()));
  return m;
}

double TwoForm::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& row : c)
    for (const auto& v : row) m = std::max(m, v.max_abs());
  return m;
}

OneForm operator+(const OneForm& a, const OneForm& b) {
  OneForm r;
  for (int k = 0; k < 4; ++k) r[k] = a[k] + b[k];
  return r;
}

OneForm operator-(const OneForm& a, const OneForm& b) {
  OneForm r;
  for (int k = 0; k < 4; ++k) r[k] = a[k] - b[k];
  return r;
}

OneForm operator*(const Jet& s, const OneForm& a) {
  OneForm r;
  for (int k = 0; k < 4; ++k) r[k] = s * a[k];
  return r;
}

OneForm operator*(double s, const OneForm& a) {
  OneForm r;
  for (int k = 0; k < 4; ++k) r[k] = s * a[k];
  return r;
}

TwoForm operator+(const TwoForm& a, const TwoForm& b) {
  TwoForm r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

TwoForm operator-(const TwoForm& a, const TwoForm& b) {
  TwoForm r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

TwoForm operator*(const Jet& s, const TwoForm& a) {
  TwoForm r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = s * a(i, j);
  return r;
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
  TwoForm r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a[i] * b[j] - a[j] * b[i];
  return r;
}

OneForm basis_form(int slot, int order) {
  OneForm r = zero_one_form(order);
  r[slot] = Jet(order, 1.0);
  return r;
}

OneForm zero_one_form(int order) {
  OneForm r;
  r.fill(Jet(order));
  return r;
}

TwoForm zero_two_form(int order) {
  TwoForm r;
  for (auto& row : r.c) row.fill(Jet(order));
  return r;
}

FrameCalculus::FrameCalculus(const CoframeJet& c, double det_tol) {
  const int order = c.lambda(0, 0).order();
  for (auto& row : t_) row.fill(Jet(order));
  for (auto& row : t_inv_) row.fill(Jet(order));
  const JetMat2 li = jet_invert_2x2(c.lambda, det_tol);
  const JetMat2 mi = jet_invert_2x2(c.mu, det_tol);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      t_[i][j] = c.lambda(i, j);
      t_[2 + i][2 + j] = c.mu(i, j);
      t_inv_[i][j] = li(i, j);
      t_inv_[2 + i][2 + j] = mi(i, j);
    }
  }
}

OneForm FrameCalculus::d(const Jet& fn) const {
  OneForm grad;
  for (int c = 0; c < 4; ++c) grad[c] = fn.partial(c);
  OneForm r;
  for (int a = 0; a < 4; ++a) {
    r[a] = t_inv_[0][a] * grad[0];
    for (int c = 1; c < 4; ++c) r[a] += t_inv_[c][a] * grad[c];
  }
  return r;
}

TwoForm FrameCalculus::d(const OneForm& form) const {
  std::array<Jet, 4> alpha;
  for (int c = 0; c < 4; ++c) {
    alpha[c] = t_[0][c] * form[0];
    for (int a = 1; a < 4; ++a) alpha[c] += t_[a][c] * form[a];
  }
  return d_coordinate(alpha);
}

TwoForm FrameCalculus::d_coordinate(const std::array<Jet, 4>& alpha) const {
  std::array<std::array<Jet, 4>, 4> grad;
  for (int c = 0; c < 4; ++c)
    for (int e = 0; e < 4; ++e) grad[c][e] = alpha[e].partial(c);  // d_c alpha_e
  std::array<std::array<Jet, 4>, 4> f;
  for (int c = 0; c < 4; ++c)
    for (int e = 0; e < 4; ++e) f[c][e] = grad[c][e] - grad[e][c];
  // F_frame = t_inv^T F t_inv
  std::array<std::array<Jet, 4>, 4> tmp;
  for (int c = 0; c < 4; ++c) {
    for (int b = 0; b < 4; ++b) {
      tmp[c][b] = f[c][0] * t_inv_[0][b];
      for (int e = 1; e < 4; ++e) tmp[c][b] += f[c][e] * t_inv_[e][b];
    }
  }
  TwoForm r;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      r(a, b) = t_inv_[0][a] * tmp[0][b];
      for (int c = 1; c < 4; ++c) r(a, b) += t_inv_[c][a] * tmp[c][b];
    }
  }
  return r;
}

OneForm ChernData::connection_form(int i, int j) const {
  return {gamma(i, j, 0), gamma(i, j, 1), delta(i, j, 0), delta(i, j, 1)};
}

ChernData solve_chern(const CoframeJet& c, double tol, double det_tol) {
  const FrameCalculus calc(c, det_tol);
  const int order = c.lambda(0, 0).order();
  const Jet zero(order);

  std::array<TwoForm, 2> d1, d2;
  for (int i = 0; i < 2; ++i) {
    d1[i] = calc.d_coordinate({c.lambda(i, 0), c.lambda(i, 1), zero, zero});
    d2[i] = calc.d_coordinate({zero, zero, c.mu(i, 0), c.mu(i, 1)});
  }

  ChernData cd;
  cd.coframe = c;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        cd.delta(i, j, k) = d1[i](j, 2 + k);
        cd.gamma(i, j, k) = -d2[i](k, 2 + j);
      }
    }
  }

  // Pure parts: omega_1^1 ^ omega_1^2 of d omega_1 and omega_2^1 ^ omega_2^2 of d omega_2.
  const auto skew_g = [&](int i) { return cd.gamma(i, 0, 1) - cd.gamma(i, 1, 0); };
  const auto skew_d = [&](int i) { return cd.delta(i, 0, 1) - cd.delta(i, 1, 0); };
  const Jet a2_from1 = -(d1[0](0, 1) - skew_g(0));
  const Jet a1_from1 = d1[1](0, 1) - skew_g(1);
  const Jet a2_from2 = d2[0](2, 3) - skew_d(0);
  const Jet a1_from2 = -(d2[1](2, 3) - skew_d(1));
  cd.a(0) = 0.5 * (a1_from1 + a1_from2);
  cd.a(1) = 0.5 * (a2_from1 + a2_from2);
  cd.a_determination_gap =
      std::max((a1_from1 - a1_from2).max_abs(), (a2_from1 - a2_from2).max_abs());

  double scale = 0.0;
  for (int i = 0; i < 2; ++i) scale = std::max({scale, d1[i].max_abs_coeff(), d2[i].max_abs_coeff()});
  cd.scale = scale;

  // Forms that must vanish: the omega_2 ^ omega_2 part of d omega_1 and the
  // omega_1 ^ omega_1 part of d omega_2.
  double pure = 0.0;
  for (int i = 0; i < 2; ++i) pure = std::max({pure, d1[i](2, 3).max_abs(), d2[i](0, 1).max_abs()});
  cd.pure_part_residual = pure;

  // Full structure equations.
  double residual = 0.0;
  for (int i = 0; i < 2; ++i) {
    TwoForm r1 = d1[i];
    TwoForm r2 = d2[i];
    for (int j = 0; j < 2; ++j) {
      const OneForm w = cd.connection_form(i, j);
      r1 = r1 - wedge(basis_form(j, order), w) - cd.a(j) * wedge(basis_form(j, order), basis_form(i, order));
      r2 = r2 - wedge(basis_form(2 + j, order), w) +
           cd.a(j) * wedge(basis_form(2 + j, order), basis_form(2 + i, order));
    }
    residual = std::max({residual, r1.max_abs_coeff(), r2.max_abs_coeff()});
  }
  cd.structure_residual = residual;

  const double limit = tol * (1.0 + scale);
  if (cd.a_determination_gap > limit || pure > limit || residual > limit)
    throw Error(ErrorCode::ChernInconsistency,
                "structure equations not satisfied: residual " + std::to_string(residual) +
                    ", pure part " + std::to_string(pure) + ", torsion gap " +
                    std::to_string(cd.a_determination_gap));
  return cd;
}

Tensor<3> torsion_tensor(const Tensor<1>& a) {
  Tensor<3> t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        t(i, j, k) = 0.5 * (a(j) * (i == k ? 1.0 : 0.0) - a(k) * (i == j ? 1.0 : 0.0));
  return t;
}

Tensor<1> torsion_covector(const Tensor<3>& t) {
  Tensor<1> a;
  a(0) = 2.0 * t(1, 0, 1);
  a(1) = 2.0 * t(0, 1, 0);
  return a;
}

}  // namespace webgeom
