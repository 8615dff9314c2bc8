#pragma once

#include <array>
#include <optional>
#include <string>

#include "webgeom/frame.hpp"
#include "webgeom/prolong.hpp"

namespace webgeom {

using Mat2d = Mat2<double>;

/// Constant change of frame omega^{i'} = A^{i'}_i omega^i. Row 1 of A is the
/// torsion covector, row 2 is (c1, c2).
struct FrameChange {
  Mat2d A{};
  Mat2d Ainv{};
  double D = 1.0;

  /// Throws DegenerateFrameChange when |D| < tol * |row1| * |row2|.
  static FrameChange from_rows(std::array<double, 2> row1, std::array<double, 2> row2,
                               double tol = 1e-12);
  static FrameChange identity();
};

/// Thresholds for the classification verdicts.
struct ClassifyTolerances {
  double classify = 1e-7;
  /// |a| below this leaves the transversal distribution undefined.
  double torsion = 1e-7;
  double frame = 1e-12;
};

/// Row 2 defaults to (-a2, a1), which gives D = |a|^2.
FrameChange specializing_frame(const Tensor<1>& a, std::optional<std::array<double, 2>> row2 = {},
                               double torsion_tol = 1e-7, double frame_tol = 1e-12);

/// Tensor transformation of a, p, q, b under a constant frame change; the
/// prolongations are left untouched and marked stale.
WebTensors transform_tensors(const WebTensors& t, const FrameChange& f,
                             FrameTag tag = FrameTag::Transformed);

/// Transformed tensors with a2' = 0. Throws DistributionUndefined or DegenerateFrameChange.
std::pair<FrameChange, WebTensors> specialize_frame(const WebTensors& t,
                                                    std::optional<std::array<double, 2>> row2 = {},
                                                    const ClassifyTolerances& tol = {});

/// A verdict with the raw residuals it was decided from. `normalized` holds
/// the residuals after dividing out the degree in a and the tensor scale; the
/// flag is max(normalized) < tolerance.
template <std::size_t N>
struct Verdict {
  bool flag = false;
  std::array<double, N> residuals{};
  std::array<double, N> normalized{};
};

/// Integrability of the transversal distribution a_1 omega^1 + a_2 omega^2 = 0:
/// residuals (r_p, r_q), r_p = a2^2 p11 - 2 a1 a2 p(12) + a1^2 p22.
Verdict<2> check_integrability(const WebTensors& t, const ClassifyTolerances& tol = {});

/// Geodesic parallelism: a2 p12 - a1 p22, a1 p21 - a2 p11 and the same in q.
Verdict<4> check_geodesic_parallel(const WebTensors& t, const ClassifyTolerances& tol = {});

/// (b^1, b^2) = D^-3 b^i_jkl v^j v^k v^l with v = (-a2, a1).
std::array<double, 2> hexagonality_contraction(const WebTensors& t, const FrameChange& f);

struct HexagonalityResult {
  std::array<double, 2> contraction{};
  std::array<double, 2> normalized{};
  bool conditions_hold = false;
  /// False when the distribution is not integrable; the verdict is then the
  /// raw conditions only.
  bool theorem_applies = false;
  /// Curvature of the two-dimensional cut subweb, b^{2'}_{2'2'2'} in the specialized frame.
  double subweb_curvature = 0.0;
  /// b^{1'}_{2'2'2'} and b^{2'}_{2'2'2'} in the specialized frame.
  std::array<double, 2> specialized_components{};
  /// conditions_hold agrees with the vanishing of specialized_components.
  bool specialized_agrees = true;
};

/// Throws PreconditionNotMet in theorem mode when the distribution is not integrable.
HexagonalityResult check_hexagonal(const WebTensors& t, const FrameChange& f,
                                   const ClassifyTolerances& tol = {}, bool theorem_mode = true);

/// Coefficients (C4, C3, C2, C1, C0) of the relative conformal curvature
/// C(t) = C4 t^4 + ... + C0, built from the symmetric part of b.
std::array<double, 5> conformal_curvature_poly(const Tensor<4>& b);
double evaluate_poly(const std::array<double, 5>& c, double t);
/// C4 a2^4 + C3 a2^3 a1 + C2 a2^2 a1^2 + C1 a2 a1^3 + C0 a1^4.
double homogeneous_poly(const std::array<double, 5>& c, double a1, double a2);

struct InvariantB {
  double value = 0.0;               // b = a_i b^i
  double expansion_residual = 0.0;  // |b + homogeneous C / D^3|
  std::optional<double> poly_residual;  // |b + a1^4 C(a2/a1) / D^3|, absent when a1 ~ 0
};

InvariantB invariant_b(const WebTensors& t, const FrameChange& f, double a1_min = 1e-7);

/// Values at the base point of a connection form omega^i_j in the frame
/// (omega_1^1, omega_1^2, omega_2^1, omega_2^2).
using ConnectionValues = std::array<std::array<std::array<double, 4>, 2>, 2>;

ConnectionValues connection_values(const ChernData& cd);
/// Constant frame change of connection-form values.
ConnectionValues transform_connection(const ConnectionValues& w, const FrameChange& f);
/// theta^i_j = omega^i_j + a^i_jk (p omega_1^k + q omega_2^k).
ConnectionValues bundle_connection(const ConnectionValues& omega, const Tensor<1>& a, double p,
                                   double q);

/// Restriction of omega^1_2 to the distribution: components -p22/a1, -q22/a1.
/// Requires specialized tensors (throws PreconditionNotMet otherwise).
Verdict<2> check_totally_geodesic(const WebTensors& t, const ClassifyTolerances& tol = {});

struct ClassificationReport {
  Tensor<1> a;
  double a_norm = 0.0;
  bool isoclinicly_geodesic = false;
  // Everything below depends on the distribution and is absent when a ~ 0.
  std::optional<FrameChange> frame;
  std::optional<Verdict<2>> delta_integrable;
  std::optional<Verdict<4>> geodesicly_parallel;
  std::optional<Verdict<2>> totally_geodesic;
  std::optional<HexagonalityResult> hexagonality;
  std::optional<InvariantB> invariant;
  std::optional<bool> principal_bivector;
  std::optional<double> principal_normalized;
  std::array<double, 5> conformal_poly{};
  std::optional<WebTensors> specialized;
};

ClassificationReport classify(const WebTensors& t, std::optional<std::array<double, 2>> row2 = {},
                              const ClassifyTolerances& tol = {});

}  // namespace webgeom
