#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/corpus.hpp"
#include "support/fd_oracle.hpp"
#include "support/frozen_values.hpp"
#include "support/random_webs.hpp"
#include "webgeom/analysis.hpp"
#include "webgeom/prolong.hpp"

using namespace webgeom;

namespace {

WebTensors tensors_of(const WebDefinition& w, const BasePoint& p) {
  return compute_tensors(solve_chern(build_coframe(w, p)));
}

template <std::size_t R, std::size_t N>
double frozen_gap(const Tensor<R>& t, const std::array<double, N>& exact) {
  static_assert(Tensor<R>::size == N);
  double scale = 0.0, gap = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    scale = std::max(scale, std::abs(exact[k]));
    gap = std::max(gap, std::abs(t.flat_at(k) - exact[k]));
  }
  return gap / (1.0 + scale);
}

/// Numerical rank with partial pivoting; pivots below tol * (largest entry) count as zero.
int numeric_rank(std::vector<std::vector<double>> m, double tol = 1e-9) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  double big = 0.0;
  for (const auto& r : m)
    for (double v : r) big = std::max(big, std::abs(v));
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = rank;
    for (std::size_t r = rank; r < m.size(); ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) <= tol * big) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      const double f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

double family(const IdentityReport& r, std::string_view name) {
  const ResidualFamily* f = r.find(name);
  REQUIRE(f);
  return f->residual;
}

}  // namespace

TEST_SUITE("prolong") {
  TEST_CASE("parallel web: every tensor vanishes") {
    const auto& c = corpus::webs()[0];
    const WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
    CHECK(max_abs(t.a) == 0.0);
    CHECK(max_abs(t.p) == 0.0);
    CHECK(max_abs(t.q) == 0.0);
    CHECK(max_abs(t.b) == 0.0);
    CHECK(max_abs(t.bbar) == 0.0);
    CHECK(max_abs(t.btil) == 0.0);
    CHECK(max_abs(t.pbar) == 0.0);
    CHECK(max_abs(t.ptil) == 0.0);
    CHECK(max_abs(t.qbar) == 0.0);
    CHECK(max_abs(t.qtil) == 0.0);
    CHECK(verify_identities(t).max_residual() == 0.0);
  }

  TEST_CASE("generic web matches exact symbolic values") {
    const WebTensors t = tensors_of(parse_web("f1 = x1 + y1 + x2*y2\nf2 = x2 + y2 + x1*y1*y1"),
                                    BasePoint{{0.3, -0.2, 0.5, 0.7}});
    namespace g = frozen::generic;
    CHECK(frozen_gap(t.a, g::a) < 1e-12);
    CHECK(frozen_gap(t.p, g::p) < 1e-12);
    CHECK(frozen_gap(t.q, g::q) < 1e-12);
    CHECK(frozen_gap(t.b, g::b) < 1e-12);
    CHECK(frozen_gap(t.pbar, g::pbar) < 1e-11);
    CHECK(frozen_gap(t.ptil, g::ptil) < 1e-11);
    CHECK(frozen_gap(t.qbar, g::qbar) < 1e-11);
    CHECK(frozen_gap(t.qtil, g::qtil) < 1e-11);
    CHECK(frozen_gap(t.bbar, g::bbar) < 1e-11);
    CHECK(frozen_gap(t.btil, g::btil) < 1e-11);
    CHECK(max_abs(t.b) > 0.1);
  }

  TEST_CASE("affine-group web matches exact symbolic values") {
    const WebTensors t =
        tensors_of(parse_web("f1 = x1 * y1\nf2 = x1 * y2 + x2"), BasePoint{{1.5, 1.0 / 3.0, -0.5, 0.4}});
    namespace g = frozen::affine2;
    CHECK(frozen_gap(t.a, g::a) < 1e-12);
    CHECK(frozen_gap(t.p, g::p) < 1e-12);
    CHECK(frozen_gap(t.q, g::q) < 1e-12);
    CHECK(frozen_gap(t.b, g::b) < 1e-12);
    CHECK(frozen_gap(t.pbar, g::pbar) < 1e-11);
    CHECK(frozen_gap(t.ptil, g::ptil) < 1e-11);
    CHECK(frozen_gap(t.qbar, g::qbar) < 1e-11);
    CHECK(frozen_gap(t.qtil, g::qtil) < 1e-11);
    CHECK(max_abs(t.bbar) < 1e-12);
    CHECK(max_abs(t.btil) < 1e-12);
  }

  TEST_CASE("curvature and torsion derivatives agree with finite differences") {
    for (const auto& c : corpus::webs()) {
      CAPTURE(c.label);
      const WebDefinition w = corpus::web(c);
      const WebTensors t = tensors_of(w, corpus::point(c));
      const oracle::Curvature fd = oracle::curvature(w, c.point);
      double scale = 0.0, gap = 0.0;
      Tensor<4>::for_each_index([&](const std::array<int, 4>& x) {
        const double v = fd.b[x[0]][x[1]][x[2]][x[3]];
        scale = std::max(scale, std::abs(v));
        gap = std::max(gap, std::abs(t.b.at(x) - v));
      });
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          scale = std::max({scale, std::abs(fd.p[i][j]), std::abs(fd.q[i][j])});
          gap = std::max({gap, std::abs(t.p(i, j) - fd.p[i][j]), std::abs(t.q(i, j) - fd.q[i][j])});
        }
      CHECK(gap < 1e-5 * (1.0 + scale));
    }
  }

  TEST_CASE("group web is flat at seeded points") {
    const WebDefinition w = parse_web("f1 = x1 * y1\nf2 = x1 * y2 + x2");
    for (const BasePoint& p : seeded_points(BasePoint{{1, 0, 1, 0}}, 5, 0.3)) {
      const WebTensors t = tensors_of(w, p);
      CHECK(max_abs(t.b) < 1e-8);
      CHECK(max_abs(t.bbar) < 1e-8);
      CHECK(max_abs(t.btil) < 1e-8);
      // With b = 0 the skew parts of p and q are forced to vanish as well.
      const IdentityReport r = verify_identities(t);
      CHECK(family(r, "curvature_trace_p") < 1e-8);
      CHECK(family(r, "curvature_trace_q") < 1e-8);
      CHECK(std::abs(t.p(0, 1) - t.p(1, 0)) < 1e-8);
      CHECK(std::abs(t.q(0, 1) - t.q(1, 0)) < 1e-8);
    }
  }

  TEST_CASE("identities hold on random polynomial webs") {
    for (const auto& rw : randweb::make_many(20)) {
      CAPTURE(rw.text);
      CurvatureCheck cc;
      const WebTensors t = compute_tensors(solve_chern(build_coframe(rw.web, rw.point)), 1e-9, &cc);
      CHECK(cc.pure_part < 1e-9);
      const IdentityReport r = verify_identities(t);
      CHECK(r.families.size() == 12);
      for (const auto& f : r.families) {
        CAPTURE(f.name);
        CHECK(f.residual < 1e-8);
      }
    }
  }

  TEST_CASE("seeded generic web: torsion-curvature link") {
    const WebDefinition w = parse_web("f1 = x1 + y1 + x2*y2\nf2 = x2 + y2 + x1*y1*y1");
    for (const BasePoint& p : seeded_points(BasePoint{{0.3, -0.2, 0.5, 0.7}}, 5)) {
      const WebTensors t = tensors_of(w, p);
      double worst = 0.0;
      Tensor<3>::for_each_index([&](const std::array<int, 3>& x) {
        const auto [j, k, l] = x;
        worst = std::max(worst, std::abs(t.a(0) * t.b(0, j, k, l) + t.a(1) * t.b(1, j, k, l) - t.ptil(j, k, l) +
                                         t.qbar(j, l, k)));
      });
      CHECK(worst < 1e-8);
    }
  }

  TEST_CASE("corrupted b1111 shifts the families that contain it") {
    const WebDefinition w = parse_web("f1 = x1 + y1 + x2*y2\nf2 = x2 + y2 + x1*y1*y1");
    WebTensors t = tensors_of(w, BasePoint{{0.3, -0.2, 0.5, 0.7}});
    const double a1 = t.a(0), a2 = t.a(1);
    t.b(0, 0, 0, 0) += 1.0;
    const IdentityReport r = verify_identities(t);
    // b^1_111 sits in neither skew combination of the trace identities.
    CHECK(family(r, "curvature_trace_p") < 1e-12);
    CHECK(family(r, "curvature_trace_q") < 1e-12);
    CHECK(family(r, "decomposition") < 1e-12);
    CHECK(family(r, "bbar_skew") == doctest::Approx(0.5 * std::abs(a2)).epsilon(1e-9));
    CHECK(family(r, "btilde_skew") == doctest::Approx(0.5 * std::abs(a2)).epsilon(1e-9));
    CHECK(family(r, "ptilde_qbar_link") == doctest::Approx(std::abs(a1)).epsilon(1e-9));
  }

  TEST_CASE("corrupted b1211 trips the trace identities") {
    const WebDefinition w = parse_web("f1 = x1 + y1 + x2*y2\nf2 = x2 + y2 + x1*y1*y1");
    WebTensors t = tensors_of(w, BasePoint{{0.3, -0.2, 0.5, 0.7}});
    const double a1 = t.a(0), a2 = t.a(1);
    t.b(0, 1, 0, 0) += 1.0;
    const IdentityReport r = verify_identities(t);
    // 1/2 (b^1_211 - b^1_112) moves by 1/2 under the 1/2-bracket.
    CHECK(family(r, "curvature_trace_p") == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(family(r, "curvature_trace_q") == doctest::Approx(0.5).epsilon(1e-9));
    // The symmetric part absorbs 1/3 of the change.
    CHECK(family(r, "decomposition") == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(family(r, "bbar_skew") == doctest::Approx(0.5 * std::abs(a2)).epsilon(1e-9));
    CHECK(family(r, "ptilde_qbar_link") == doctest::Approx(std::abs(a1)).epsilon(1e-9));
  }

  TEST_CASE("counting: p, q span 8 dimensions and b adds 8 more") {
    std::vector<std::vector<double>> pq, sym, full;
    for (const auto& rw : randweb::make_many(24, 0xc0u)) {
      const WebTensors t = tensors_of(rw.web, rw.point);
      std::vector<double> v, s, f;
      for (double x : t.p) v.push_back(x);
      for (double x : t.q) v.push_back(x);
      for (double x : symmetric_part(t.b)) s.push_back(x);
      for (double x : t.b) f.push_back(x);
      f.insert(f.end(), v.begin(), v.end());
      pq.push_back(v);
      sym.push_back(s);
      full.push_back(f);
    }
    CHECK(numeric_rank(pq) == 8);
    CHECK(numeric_rank(sym) == 8);
    CHECK(numeric_rank(full) == 16);
  }

  TEST_CASE("symmetric part and reconstruction") {
    randweb::Rng rng(0x5b3u);
    Tensor<4> b;
    for (double& x : b) x = rng.uniform(-1, 1);
    const Tensor<4> s = symmetric_part(b);
    Tensor<4>::for_each_index([&](const std::array<int, 4>& x) {
      CHECK(s(x[0], x[1], x[2], x[3]) == doctest::Approx(s(x[0], x[2], x[1], x[3])));
      CHECK(s(x[0], x[1], x[2], x[3]) == doctest::Approx(s(x[0], x[3], x[2], x[1])));
    });
    const Tensor<4> zero = symmetric_part(Tensor<4>{});
    CHECK(max_abs(zero) == 0.0);
    // A totally symmetric tensor with p = q = 0 is its own reconstruction.
    const Tensor<4> again = reconstruct_curvature(s, Tensor<2>{}, Tensor<2>{});
    for (std::size_t k = 0; k < 16; ++k) CHECK(again.flat_at(k) == doctest::Approx(s.flat_at(k)));
  }

  TEST_CASE("frame change marks prolongations stale and skips their families") {
    const auto& c = corpus::webs()[3];
    WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
    t.prolongations_stale = true;
    const IdentityReport r = verify_identities(t);
    CHECK(r.families.size() == 3);
    CHECK(r.find("bbar_skew") == nullptr);
  }
}
