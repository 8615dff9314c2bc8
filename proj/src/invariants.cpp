#include "webgeom/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "webgeom/error.hpp"

namespace webgeom {

namespace {

double norm2(double x, double y) { return std::hypot(x, y); }

double a_norm(const Tensor<1>& a) { return norm2(a(0), a(1)); }

double pq_scale(const WebTensors& t) { return std::max(max_abs(t.p), max_abs(t.q)); }

void require_distribution(const WebTensors& t, const ClassifyTolerances& tol) {
  if (!(a_norm(t.a) >= tol.torsion))
    throw Error(ErrorCode::DistributionUndefined,
                "torsion covector vanishes (|a| = " + std::to_string(a_norm(t.a)) +
                    "); the transversal distribution is not defined");
}

template <std::size_t N>
void decide(Verdict<N>& v, double divisor, double tol) {
  double worst = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    v.normalized[k] = std::abs(v.residuals[k]) / divisor;
    worst = std::max(worst, v.normalized[k]);
  }
  v.flag = worst < tol;
}

}  // namespace

FrameChange FrameChange::from_rows(std::array<double, 2> row1, std::array<double, 2> row2, double tol) {
  FrameChange f;
  f.A.m = {{{row1[0], row1[1]}, {row2[0], row2[1]}}};
  f.D = row1[0] * row2[1] - row1[1] * row2[0];
  const double size = norm2(row1[0], row1[1]) * norm2(row2[0], row2[1]);
  if (!(std::abs(f.D) > tol * size) || !(size > 0.0))
    throw Error(ErrorCode::DegenerateFrameChange,
                "frame change matrix is singular (D = " + std::to_string(f.D) + ")");
  f.Ainv.m = {{{row2[1] / f.D, -row1[1] / f.D}, {-row2[0] / f.D, row1[0] / f.D}}};
  return f;
}

FrameChange FrameChange::identity() { return from_rows({1.0, 0.0}, {0.0, 1.0}); }

FrameChange specializing_frame(const Tensor<1>& a, std::optional<std::array<double, 2>> row2,
                               double torsion_tol, double frame_tol) {
  if (!(a_norm(a) >= torsion_tol))
    throw Error(ErrorCode::DistributionUndefined, "torsion covector vanishes; no specialized frame");
  return FrameChange::from_rows({a(0), a(1)}, row2.value_or(std::array<double, 2>{-a(1), a(0)}),
                                frame_tol);
}

WebTensors transform_tensors(const WebTensors& t, const FrameChange& f, FrameTag tag) {
  const auto& A = f.A;
  const auto& B = f.Ainv;  // B(j, j') = a^j_{j'}
  WebTensors out = t;
  out.frame = tag;
  out.prolongations_stale = true;
  for (int i = 0; i < 2; ++i) out.a(i) = B(0, i) * t.a(0) + B(1, i) * t.a(1);
  Tensor<2>::for_each_index([&](const std::array<int, 2>& idx) {
    const auto [i2, j2] = idx;
    double sp = 0.0, sq = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        sp += B(i, i2) * B(j, j2) * t.p(i, j);
        sq += B(i, i2) * B(j, j2) * t.q(i, j);
      }
    out.p(i2, j2) = sp;
    out.q(i2, j2) = sq;
  });
  Tensor<4>::for_each_index([&](const std::array<int, 4>& o) {
    double s = 0.0;
    Tensor<4>::for_each_index([&](const std::array<int, 4>& n) {
      s += A(o[0], n[0]) * B(n[1], o[1]) * B(n[2], o[2]) * B(n[3], o[3]) * t.b.at(n);
    });
    out.b.at(o) = s;
  });
  return out;
}

std::pair<FrameChange, WebTensors> specialize_frame(const WebTensors& t,
                                                    std::optional<std::array<double, 2>> row2,
                                                    const ClassifyTolerances& tol) {
  const FrameChange f = specializing_frame(t.a, row2, tol.torsion, tol.frame);
  return {f, transform_tensors(t, f, FrameTag::Specialized)};
}

Verdict<2> check_integrability(const WebTensors& t, const ClassifyTolerances& tol) {
  require_distribution(t, tol);
  const double a1 = t.a(0), a2 = t.a(1);
  const auto lhs = [&](const Tensor<2>& x) {
    return a2 * a2 * x(0, 0) - a1 * a2 * (x(0, 1) + x(1, 0)) + a1 * a1 * x(1, 1);
  };
  Verdict<2> v;
  v.residuals = {lhs(t.p), lhs(t.q)};
  const double n = a_norm(t.a);
  decide(v, n * n * (1.0 + pq_scale(t)), tol.classify);
  return v;
}

Verdict<4> check_geodesic_parallel(const WebTensors& t, const ClassifyTolerances& tol) {
  require_distribution(t, tol);
  const double a1 = t.a(0), a2 = t.a(1);
  Verdict<4> v;
  v.residuals = {a2 * t.p(0, 1) - a1 * t.p(1, 1), a1 * t.p(1, 0) - a2 * t.p(0, 0),
                 a2 * t.q(0, 1) - a1 * t.q(1, 1), a1 * t.q(1, 0) - a2 * t.q(0, 0)};
  decide(v, a_norm(t.a) * (1.0 + pq_scale(t)), tol.classify);
  return v;
}

std::array<double, 2> hexagonality_contraction(const WebTensors& t, const FrameChange& f) {
  const double a1 = t.a(0), a2 = t.a(1);
  const double d3 = f.D * f.D * f.D;
  const auto& b = t.b;
  std::array<double, 2> out{};
  for (int i = 0; i < 2; ++i) {
    const double s112 = (b(i, 0, 0, 1) + b(i, 0, 1, 0) + b(i, 1, 0, 0)) / 3.0;
    const double s122 = (b(i, 0, 1, 1) + b(i, 1, 0, 1) + b(i, 1, 1, 0)) / 3.0;
    out[i] = (-b(i, 0, 0, 0) * a2 * a2 * a2 + 3.0 * s112 * a2 * a2 * a1 - 3.0 * s122 * a2 * a1 * a1 +
              b(i, 1, 1, 1) * a1 * a1 * a1) /
             d3;
  }
  return out;
}

HexagonalityResult check_hexagonal(const WebTensors& t, const FrameChange& f,
                                   const ClassifyTolerances& tol, bool theorem_mode) {
  const Verdict<2> integ = check_integrability(t, tol);
  if (theorem_mode && !integ.flag)
    throw Error(ErrorCode::PreconditionNotMet,
                "hexagonality of cut subwebs presupposes an integrable transversal distribution");
  HexagonalityResult h;
  h.theorem_applies = integ.flag;
  h.contraction = hexagonality_contraction(t, f);
  const double n = a_norm(t.a);
  const double k = std::pow(std::abs(f.D) / n, 3) / (1.0 + max_abs(t.b));
  h.normalized = {std::abs(h.contraction[0]) * k, std::abs(h.contraction[1]) * k};
  h.conditions_hold = std::max(h.normalized[0], h.normalized[1]) < tol.classify;

  const WebTensors s = transform_tensors(t, f, FrameTag::Specialized);
  h.specialized_components = {s.b(0, 1, 1, 1), s.b(1, 1, 1, 1)};
  h.subweb_curvature = s.b(1, 1, 1, 1);
  for (int i = 0; i < 2; ++i) {
    const double expect = f.A(i, 0) * h.contraction[0] + f.A(i, 1) * h.contraction[1];
    const double got = h.specialized_components[i];
    if (std::abs(expect - got) > 1e-9 * (1.0 + std::abs(expect) + std::abs(got)))
      h.specialized_agrees = false;
  }
  return h;
}

std::array<double, 5> conformal_curvature_poly(const Tensor<4>& b) {
  const Tensor<4> s = symmetric_part(b);
  const auto S = [&](int i, int j, int k, int l) { return s(i - 1, j - 1, k - 1, l - 1); };
  return {S(2, 1, 1, 1),
          -(3.0 * S(2, 1, 1, 2) - S(1, 1, 1, 1)),
          3.0 * (S(2, 1, 2, 2) - S(1, 1, 1, 2)),
          -(S(2, 2, 2, 2) - 3.0 * S(1, 1, 2, 2)),
          -S(1, 2, 2, 2)};
}

double evaluate_poly(const std::array<double, 5>& c, double t) {
  return (((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4];
}

double homogeneous_poly(const std::array<double, 5>& c, double a1, double a2) {
  return c[0] * std::pow(a2, 4) + c[1] * std::pow(a2, 3) * a1 + c[2] * a2 * a2 * a1 * a1 +
         c[3] * a2 * std::pow(a1, 3) + c[4] * std::pow(a1, 4);
}

InvariantB invariant_b(const WebTensors& t, const FrameChange& f, double a1_min) {
  const auto bi = hexagonality_contraction(t, f);
  const double a1 = t.a(0), a2 = t.a(1);
  const double d3 = f.D * f.D * f.D;
  const auto c = conformal_curvature_poly(t.b);
  InvariantB r;
  r.value = a1 * bi[0] + a2 * bi[1];
  r.expansion_residual = std::abs(r.value + homogeneous_poly(c, a1, a2) / d3);
  if (std::abs(a1) > a1_min)
    r.poly_residual = std::abs(r.value + std::pow(a1, 4) / d3 * evaluate_poly(c, a2 / a1));
  return r;
}

ConnectionValues connection_values(const ChernData& cd) {
  ConnectionValues w{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const OneForm f = cd.connection_form(i, j);
      for (int k = 0; k < 4; ++k) w[i][j][k] = f[k].value();
    }
  return w;
}

ConnectionValues transform_connection(const ConnectionValues& w, const FrameChange& f) {
  const auto& A = f.A;
  const auto& B = f.Ainv;
  ConnectionValues out{};
  for (int i2 = 0; i2 < 2; ++i2)
    for (int j2 = 0; j2 < 2; ++j2)
      for (int blk = 0; blk < 2; ++blk)
        for (int k2 = 0; k2 < 2; ++k2) {
          double s = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              for (int k = 0; k < 2; ++k) s += A(i2, i) * B(j, j2) * B(k, k2) * w[i][j][2 * blk + k];
          out[i2][j2][2 * blk + k2] = s;
        }
  return out;
}

ConnectionValues bundle_connection(const ConnectionValues& omega, const Tensor<1>& a, double p,
                                   double q) {
  const Tensor<3> tors = torsion_tensor(a);
  ConnectionValues theta = omega;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        theta[i][j][k] += tors(i, j, k) * p;
        theta[i][j][2 + k] += tors(i, j, k) * q;
      }
  return theta;
}

Verdict<2> check_totally_geodesic(const WebTensors& t, const ClassifyTolerances& tol) {
  require_distribution(t, tol);
  const double n = a_norm(t.a);
  if (std::abs(t.a(1)) > 1e-10 * n)
    throw Error(ErrorCode::PreconditionNotMet, "tensors are not in a specialized frame (a2 != 0)");
  Verdict<2> v;
  v.residuals = {-t.p(1, 1) / t.a(0), -t.q(1, 1) / t.a(0)};
  decide(v, (1.0 + pq_scale(t)) / n, tol.classify);
  return v;
}

ClassificationReport classify(const WebTensors& t, std::optional<std::array<double, 2>> row2,
                              const ClassifyTolerances& tol) {
  ClassificationReport r;
  r.a = t.a;
  r.a_norm = a_norm(t.a);
  r.conformal_poly = conformal_curvature_poly(t.b);
  r.isoclinicly_geodesic = !(r.a_norm >= tol.torsion);
  if (r.isoclinicly_geodesic) return r;

  auto [f, s] = specialize_frame(t, row2, tol);
  r.frame = f;
  r.delta_integrable = check_integrability(t, tol);
  r.geodesicly_parallel = check_geodesic_parallel(t, tol);
  r.totally_geodesic = check_totally_geodesic(s, tol);
  r.hexagonality = check_hexagonal(t, f, tol, /*theorem_mode=*/false);
  r.invariant = invariant_b(t, f, tol.torsion);
  const double nb = std::abs(r.invariant->value) * std::pow(std::abs(f.D), 3) /
                    std::pow(r.a_norm, 4) / (1.0 + max_abs(t.b));
  r.principal_normalized = nb;
  r.principal_bivector = nb < tol.classify;
  r.specialized = s;
  return r;
}

}  // namespace webgeom
