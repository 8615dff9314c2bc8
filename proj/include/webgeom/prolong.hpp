#pragma once

#include <string>
#include <vector>

#include "webgeom/frame.hpp"
#include "webgeom/tensor.hpp"

namespace webgeom {

/// Coframe in which tensor components are expressed.
enum class FrameTag { Pipeline, Specialized, Transformed };
std::string_view frame_tag_name(FrameTag t) noexcept;

/// Values at the base point of the torsion covector, its covariant
/// derivatives, the curvature tensor and the third-order prolongations.
/// Index conventions: b(i,j,k,l) = b^i_jkl; bbar(i,j,k,l,m) = bbar^i_jklm;
/// pbar(j,k,m) = pbar_jkm, and so on.
struct WebTensors {
  Tensor<1> a;
  Tensor<2> p, q;
  Tensor<4> b;
  Tensor<5> bbar, btil;
  Tensor<3> pbar, ptil, qbar, qtil;
  BasePoint base;
  FrameTag frame = FrameTag::Pipeline;
  /// Set after a frame change: prolongations are left in the pipeline frame.
  bool prolongations_stale = false;
};

/// Residuals of the curvature computation.
struct CurvatureCheck {
  double pure_part = 0.0;
  double scale = 0.0;
};

/// b^i_jkl from d omega^i_j - omega^k_j ^ omega^i_k. Throws
/// CurvaturePurePartNonzero if the omega_1^omega_1 or omega_2^omega_2 parts
/// do not vanish to tol * (1 + scale).
Tensor<4> curvature(const ChernData& cd, double tol = 1e-9, CurvatureCheck* check = nullptr);

/// (p, q) from da_i - a_j omega^j_i = p_ij omega_1^j + q_ij omega_2^j.
std::pair<Tensor<2>, Tensor<2>> pq_tensors(const ChernData& cd);

/// Full pipeline from the Chern connection to WebTensors.
WebTensors compute_tensors(const ChernData& cd, double tol = 1e-9, CurvatureCheck* check = nullptr);

/// Same as compute_tensors; kept as a separate entry point for the prolongation step.
WebTensors prolongations(const ChernData& cd, double tol = 1e-9);

struct ResidualFamily {
  std::string name;
  double residual = 0.0;
  double scale = 0.0;  // largest component magnitude entering the family
};

struct IdentityReport {
  std::vector<ResidualFamily> families;

  const ResidualFamily* find(std::string_view name) const;
  /// Largest residual over all families.
  double max_residual() const;
};

/// Residuals of every algebraic identity tying a, p, q, b and the prolongations
/// together, plus the symmetric-part decomposition of b.
IdentityReport verify_identities(const WebTensors& t);

/// b^i_(jkl): mean over the six orderings of (j, k, l).
Tensor<4> symmetric_part(const Tensor<4>& b);

/// b rebuilt from its symmetric part and the traces p, q.
Tensor<4> reconstruct_curvature(const Tensor<4>& s, const Tensor<2>& p, const Tensor<2>& q);

}  // namespace webgeom
