#include "webgeom/prolong.hpp"

#include <algorithm>
#include <cmath>

#include "webgeom/error.hpp"

namespace webgeom {

std::string_view frame_tag_name(FrameTag t) noexcept {
  switch (t) {
    case FrameTag::Pipeline: return "pipeline";
    case FrameTag::Specialized: return "specialized";
    case FrameTag::Transformed: return "transformed";
  }
  return "?";
}

namespace {

double kron(int i, int j) { return i == j ? 1.0 : 0.0; }

struct Connection {
  std::array<std::array<OneForm, 2>, 2> omega;  // omega[i][j] = omega^i_j

  explicit Connection(const ChernData& cd) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) omega[i][j] = cd.connection_form(i, j);
  }
};

struct CurvatureJets {
  JetTensor<4> b;
  double pure = 0.0;
  double scale = 0.0;
};

CurvatureJets curvature_jets(const FrameCalculus& calc, const Connection& conn) {
  CurvatureJets out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const TwoForm dw = calc.d(conn.omega[i][j]);
      TwoForm big = dw;
      for (int k = 0; k < 2; ++k) big = big - wedge(conn.omega[k][j], conn.omega[i][k]);
      out.scale = std::max(out.scale, dw.max_abs_coeff());
      out.pure = std::max({out.pure, big(0, 1).max_abs(), big(2, 3).max_abs()});
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out.b(i, j, k, l) = big(k, 2 + l);
    }
  }
  return out;
}

void check_pure(const CurvatureJets& cj, double tol) {
  if (cj.pure > tol * (1.0 + cj.scale))
    throw Error(ErrorCode::CurvaturePurePartNonzero,
                "curvature has a non-mixed component of size " + std::to_string(cj.pure));
}

// (p, q) jets from the covariant differential of a.
std::pair<JetTensor<2>, JetTensor<2>> pq_jets(const FrameCalculus& calc, const Connection& conn,
                                              const ChernData& cd) {
  JetTensor<2> p, q;
  for (int i = 0; i < 2; ++i) {
    OneForm na = calc.d(cd.a(i));
    for (int j = 0; j < 2; ++j) na = na - cd.a(j) * conn.omega[j][i];
    for (int j = 0; j < 2; ++j) {
      p(i, j) = na[j];
      q(i, j) = na[2 + j];
    }
  }
  return {p, q};
}

// Covariant differential of a rank-2 covariant tensor, split into its
// omega_1 and omega_2 parts.
void nabla2(const FrameCalculus& calc, const Connection& conn, const JetTensor<2>& t, Tensor<3>& bar,
            Tensor<3>& til) {
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      OneForm n = calc.d(t(j, k));
      for (int m = 0; m < 2; ++m) {
        n = n - t(m, k) * conn.omega[m][j];
        n = n - t(j, m) * conn.omega[m][k];
      }
      for (int m = 0; m < 2; ++m) {
        bar(j, k, m) = n[m].value();
        til(j, k, m) = n[2 + m].value();
      }
    }
  }
}

}  // namespace

Tensor<4> curvature(const ChernData& cd, double tol, CurvatureCheck* check) {
  const FrameCalculus calc(cd.coframe);
  const Connection conn(cd);
  const CurvatureJets cj = curvature_jets(calc, conn);
  if (check) *check = {cj.pure, cj.scale};
  check_pure(cj, tol);
  return values(cj.b);
}

std::pair<Tensor<2>, Tensor<2>> pq_tensors(const ChernData& cd) {
  const FrameCalculus calc(cd.coframe);
  const Connection conn(cd);
  auto [p, q] = pq_jets(calc, conn, cd);
  return {values(p), values(q)};
}

WebTensors compute_tensors(const ChernData& cd, double tol, CurvatureCheck* check) {
  const FrameCalculus calc(cd.coframe);
  const Connection conn(cd);
  const CurvatureJets cj = curvature_jets(calc, conn);
  if (check) *check = {cj.pure, cj.scale};
  check_pure(cj, tol);
  const auto [pj, qj] = pq_jets(calc, conn, cd);

  WebTensors t;
  t.base = cd.coframe.base;
  t.a = values(cd.a);
  t.p = values(pj);
  t.q = values(qj);
  t.b = values(cj.b);

  JetTensor<4>::for_each_index([&](const std::array<int, 4>& idx) {
    const auto [i, j, k, l] = idx;
    OneForm n = calc.d(cj.b(i, j, k, l));
    for (int m = 0; m < 2; ++m) {
      n = n - cj.b(i, m, k, l) * conn.omega[m][j];
      n = n - cj.b(i, j, m, l) * conn.omega[m][k];
      n = n - cj.b(i, j, k, m) * conn.omega[m][l];
      n = n + cj.b(m, j, k, l) * conn.omega[i][m];
    }
    for (int m = 0; m < 2; ++m) {
      t.bbar(i, j, k, l, m) = n[m].value();
      t.btil(i, j, k, l, m) = n[2 + m].value();
    }
  });
  nabla2(calc, conn, pj, t.pbar, t.ptil);
  nabla2(calc, conn, qj, t.qbar, t.qtil);
  return t;
}

WebTensors prolongations(const ChernData& cd, double tol) { return compute_tensors(cd, tol); }

const ResidualFamily* IdentityReport::find(std::string_view name) const {
  for (const auto& f : families)
    if (f.name == name) return &f;
  return nullptr;
}

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& f : families) m = std::max(m, f.residual);
  return m;
}

Tensor<4> symmetric_part(const Tensor<4>& b) {
  Tensor<4> s;
  Tensor<4>::for_each_index([&](const std::array<int, 4>& idx) {
    const auto [i, j, k, l] = idx;
    s(i, j, k, l) = (b(i, j, k, l) + b(i, j, l, k) + b(i, k, j, l) + b(i, k, l, j) + b(i, l, j, k) +
                     b(i, l, k, j)) /
                    6.0;
  });
  return s;
}

Tensor<4> reconstruct_curvature(const Tensor<4>& s, const Tensor<2>& p, const Tensor<2>& q) {
  Tensor<4> b;
  Tensor<4>::for_each_index([&](const std::array<int, 4>& idx) {
    const auto [i, j, k, l] = idx;
    const double trace = 2.0 * kron(i, l) * (p(j, k) + p(k, j)) - 2.0 * kron(i, j) * p(l, k) -
                         2.0 * kron(i, k) * p(l, j) + 3.0 * kron(i, k) * q(j, l) +
                         kron(i, k) * q(l, j) - 3.0 * kron(i, j) * q(k, l) + kron(i, j) * q(l, k) -
                         kron(i, l) * (q(j, k) + q(k, j));
    b(i, j, k, l) = s(i, j, k, l) + trace / 6.0;
  });
  return b;
}

namespace {

class FamilyAccumulator {
 public:
  explicit FamilyAccumulator(std::string name) { fam_.name = std::move(name); }
  // Adds one residual; `terms` are the magnitudes that entered it.
  void add(double residual, std::initializer_list<double> terms) {
    fam_.residual = std::max(fam_.residual, std::abs(residual));
    for (double t : terms) fam_.scale = std::max(fam_.scale, std::abs(t));
  }
  ResidualFamily done() const { return fam_; }

 private:
  ResidualFamily fam_;
};

}  // namespace

IdentityReport verify_identities(const WebTensors& t) {
  const auto& a = t.a;
  const auto& p = t.p;
  const auto& q = t.q;
  const auto& b = t.b;
  const auto& bb = t.bbar;
  const auto& bt = t.btil;
  IdentityReport rep;

  // Skew parts of b fixed by p and q.
  FamilyAccumulator trace_p("curvature_trace_p"), trace_q("curvature_trace_q");
  Tensor<4>::for_each_index([&](const std::array<int, 4>& idx) {
    const auto [i, j, k, l] = idx;
    trace_p.add(0.5 * (b(i, j, l, k) - b(i, k, l, j)) - 0.5 * (kron(i, k) * p(j, l) - kron(i, j) * p(k, l)),
                {b(i, j, l, k), b(i, k, l, j), p(j, l), p(k, l)});
    trace_q.add(0.5 * (b(i, j, k, l) - b(i, k, j, l)) - 0.5 * (kron(i, k) * q(j, l) - kron(i, j) * q(k, l)),
                {b(i, j, k, l), b(i, k, j, l), q(j, l), q(k, l)});
  });
  rep.families.push_back(trace_p.done());
  rep.families.push_back(trace_q.done());

  if (!t.prolongations_stale) {
    FamilyAccumulator bbar_skew("bbar_skew"), btil_skew("btilde_skew");
    Tensor<5>::for_each_index([&](const std::array<int, 5>& idx) {
      const auto [i, j, k, l, m] = idx;
      bbar_skew.add(0.5 * (bb(i, j, k, l, m) - bb(i, j, m, l, k)) +
                        0.5 * (a(m) * b(i, j, k, l) - a(k) * b(i, j, m, l)),
                    {bb(i, j, k, l, m), bb(i, j, m, l, k), a(m) * b(i, j, k, l), a(k) * b(i, j, m, l)});
      btil_skew.add(0.5 * (bt(i, j, k, l, m) - bt(i, j, k, m, l)) -
                        0.5 * (a(m) * b(i, j, k, l) - a(l) * b(i, j, k, m)),
                    {bt(i, j, k, l, m), bt(i, j, k, m, l), a(m) * b(i, j, k, l), a(l) * b(i, j, k, m)});
    });
    rep.families.push_back(bbar_skew.done());
    rep.families.push_back(btil_skew.done());

    FamilyAccumulator pbar_skew("pbar_skew"), qtil_skew("qtilde_skew"), link("ptilde_qbar_link");
    Tensor<3>::for_each_index([&](const std::array<int, 3>& idx) {
      const auto [i, l, k] = idx;
      pbar_skew.add(0.5 * (t.pbar(i, l, k) - t.pbar(i, k, l)) + 0.5 * (p(i, l) * a(k) - p(i, k) * a(l)),
                    {t.pbar(i, l, k), t.pbar(i, k, l), p(i, l) * a(k), p(i, k) * a(l)});
      qtil_skew.add(0.5 * (t.qtil(i, l, k) - t.qtil(i, k, l)) - 0.5 * (q(i, l) * a(k) - q(i, k) * a(l)),
                    {t.qtil(i, l, k), t.qtil(i, k, l), q(i, l) * a(k), q(i, k) * a(l)});
    });
    Tensor<3>::for_each_index([&](const std::array<int, 3>& idx) {
      const auto [j, k, l] = idx;
      const double ab = a(0) * b(0, j, k, l) + a(1) * b(1, j, k, l);
      link.add(ab - t.ptil(j, k, l) + t.qbar(j, l, k), {ab, t.ptil(j, k, l), t.qbar(j, l, k)});
    });
    rep.families.push_back(pbar_skew.done());
    rep.families.push_back(qtil_skew.done());
    rep.families.push_back(link.done());

    FamilyAccumulator bbar_p("bbar_trace_p"), btil_p("btilde_trace_p"), bbar_q("bbar_trace_q"),
        btil_q("btilde_trace_q");
    Tensor<5>::for_each_index([&](const std::array<int, 5>& idx) {
      const auto [i, j, k, l, m] = idx;
      bbar_p.add(0.5 * (bb(i, j, l, k, m) - bb(i, k, l, j, m)) -
                     0.5 * (kron(i, k) * t.pbar(j, l, m) - kron(i, j) * t.pbar(k, l, m)),
                 {bb(i, j, l, k, m), bb(i, k, l, j, m), t.pbar(j, l, m), t.pbar(k, l, m)});
      btil_p.add(0.5 * (bt(i, j, l, k, m) - bt(i, k, l, j, m)) -
                     0.5 * (kron(i, k) * t.ptil(j, l, m) - kron(i, j) * t.ptil(k, l, m)),
                 {bt(i, j, l, k, m), bt(i, k, l, j, m), t.ptil(j, l, m), t.ptil(k, l, m)});
      bbar_q.add(0.5 * (bb(i, j, k, l, m) - bb(i, k, j, l, m)) -
                     0.5 * (kron(i, k) * t.qbar(j, l, m) - kron(i, j) * t.qbar(k, l, m)),
                 {bb(i, j, k, l, m), bb(i, k, j, l, m), t.qbar(j, l, m), t.qbar(k, l, m)});
      btil_q.add(0.5 * (bt(i, j, k, l, m) - bt(i, k, j, l, m)) -
                     0.5 * (kron(i, k) * t.qtil(j, l, m) - kron(i, j) * t.qtil(k, l, m)),
                 {bt(i, j, k, l, m), bt(i, k, j, l, m), t.qtil(j, l, m), t.qtil(k, l, m)});
    });
    rep.families.push_back(bbar_p.done());
    rep.families.push_back(btil_p.done());
    rep.families.push_back(bbar_q.done());
    rep.families.push_back(btil_q.done());
  }

  FamilyAccumulator decomposition("decomposition");
  const Tensor<4> rebuilt = reconstruct_curvature(symmetric_part(b), p, q);
  Tensor<4>::for_each_index([&](const std::array<int, 4>& idx) {
    decomposition.add(rebuilt.at(idx) - b.at(idx), {b.at(idx)});
  });
  rep.families.push_back(decomposition.done());
  return rep;
}

}  // namespace webgeom
