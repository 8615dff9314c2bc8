#pragma once

#include <array>

#include "webgeom/expr.hpp"
#include "webgeom/jet.hpp"
#include "webgeom/tensor.hpp"

namespace webgeom {

/// Adapted coframe of the web z = f(x, y): omega_1 = Lambda dx with
/// Lambda = df/dx, omega_2 = M dy with M = df/dy, omega_3 = -dz.
struct CoframeJet {
  JetMat2 lambda;
  JetMat2 mu;
  BasePoint base;
};

/// Throws NotAWebAtPoint when det Lambda or det M vanishes at p.
CoframeJet build_coframe(const WebDefinition& w, const BasePoint& p, int order = 4,
                         double det_tol = 1e-12);

/// Frame slots: 0, 1 = omega_1^1, omega_1^2; 2, 3 = omega_2^1, omega_2^2.
using OneForm = std::array<Jet, 4>;

/// Antisymmetric frame components: F = sum_{a<b} F[a][b] theta^a ^ theta^b.
struct TwoForm {
  std::array<std::array<Jet, 4>, 4> c;

  Jet& operator()(int a, int b) { return c[a][b]; }
  const Jet& operator()(int a, int b) const { return c[a][b]; }
  double max_abs_value() const;
  double max_abs_coeff() const;
};

OneForm operator+(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a, const OneForm& b);
OneForm operator*(const Jet& s, const OneForm& a);
OneForm operator*(double s, const OneForm& a);
TwoForm operator+(const TwoForm& a, const TwoForm& b);
TwoForm operator-(const TwoForm& a, const TwoForm& b);
TwoForm operator*(const Jet& s, const TwoForm& a);
TwoForm wedge(const OneForm& a, const OneForm& b);
OneForm basis_form(int slot, int order);
OneForm zero_one_form(int order);
TwoForm zero_two_form(int order);

/// Exterior derivative expressed in the adapted coframe.
class FrameCalculus {
 public:
  explicit FrameCalculus(const CoframeJet& c, double det_tol = 1e-12);

  OneForm d(const Jet& fn) const;
  TwoForm d(const OneForm& form) const;
  /// d of the coordinate 1-form sum_c alpha[c] dx^c, in frame components.
  TwoForm d_coordinate(const std::array<Jet, 4>& alpha) const;

  const std::array<std::array<Jet, 4>, 4>& t() const { return t_; }
  const std::array<std::array<Jet, 4>, 4>& t_inv() const { return t_inv_; }

 private:
  std::array<std::array<Jet, 4>, 4> t_;      // omega^a = t[a][c] dx^c
  std::array<std::array<Jet, 4>, 4> t_inv_;  // dx^c = t_inv[c][a] omega^a
};

/// Chern connection of the web: omega^i_j = gamma^i_jk omega_1^k + delta^i_jk omega_2^k,
/// and the torsion covector a.
struct ChernData {
  JetTensor<3> gamma;  // (i, j, k)
  JetTensor<3> delta;  // (i, j, k)
  JetTensor<1> a;
  CoframeJet coframe;

  /// Largest disagreement between the two determinations of a.
  double a_determination_gap = 0.0;
  /// Largest residual of the structure equations over all 2-form components.
  double structure_residual = 0.0;
  /// Largest residual of the pure parts that must vanish for this coframe.
  double pure_part_residual = 0.0;
  double scale = 0.0;

  OneForm connection_form(int i, int j) const;
};

/// Throws ChernInconsistency when a residual exceeds tol * (1 + scale).
ChernData solve_chern(const CoframeJet& c, double tol = 1e-9, double det_tol = 1e-12);

/// a^i_jk = 1/2 (a_j delta^i_k - a_k delta^i_j) at the base point.
Tensor<3> torsion_tensor(const Tensor<1>& a);

/// Recovers the covector from the antisymmetric torsion: a_1 = 2 a^2_12, a_2 = 2 a^1_21.
Tensor<1> torsion_covector(const Tensor<3>& t);

}  // namespace webgeom
