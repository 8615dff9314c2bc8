#include <doctest.h>

#include <cmath>
#include <functional>

#include "support/corpus.hpp"
#include "support/random_webs.hpp"
#include "webgeom/analysis.hpp"
#include "webgeom/error.hpp"
#include "webgeom/invariants.hpp"

using namespace webgeom;

namespace {

WebTensors tensors_of(const WebDefinition& w, const BasePoint& p) {
  return compute_tensors(solve_chern(build_coframe(w, p)));
}

WebTensors generic_tensors() {
  return tensors_of(parse_web("f1 = x1 + y1 + x2*y2\nf2 = x2 + y2 + x1*y1*y1"), BasePoint{{0.3, -0.2, 0.5, 0.7}});
}

WebTensors synthetic(double a1, double a2) {
  WebTensors t;
  t.a(0) = a1;
  t.a(1) = a2;
  return t;
}

void fill_random(WebTensors& t, randweb::Rng& rng) {
  for (double& x : t.p) x = rng.uniform(-1, 1);
  for (double& x : t.q) x = rng.uniform(-1, 1);
  for (double& x : t.b) x = rng.uniform(-1, 1);
}

/// Row 2 drawn at random, kept well away from the direction of a.
FrameChange random_admissible(const Tensor<1>& a, randweb::Rng& rng) {
  const double n = std::hypot(a(0), a(1));
  while (true) {
    const std::array<double, 2> c{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double d = a(0) * c[1] - a(1) * c[0];
    if (std::abs(d) > 0.2 * n * std::hypot(c[0], c[1])) return FrameChange::from_rows({a(0), a(1)}, c);
  }
}

/// b'^{i'}_{j'k'l'} = A^{i'}_i b^i_jkl a^j_{j'} a^k_{k'} a^l_{l'} as eight explicit loops.
Tensor<4> brute_force_transform(const Tensor<4>& b, const FrameChange& f) {
  Tensor<4> out;
  for (int i2 = 0; i2 < 2; ++i2)
    for (int j2 = 0; j2 < 2; ++j2)
      for (int k2 = 0; k2 < 2; ++k2)
        for (int l2 = 0; l2 < 2; ++l2) {
          double s = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                  s += f.A(i2, i) * f.Ainv(j, j2) * f.Ainv(k, k2) * f.Ainv(l, l2) * b(i, j, k, l);
          out(i2, j2, k2, l2) = s;
        }
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::SyntaxError;
}

}  // namespace

TEST_SUITE("invariants") {
  TEST_CASE("frame change algebra") {
    randweb::Rng rng(0xfc1u);
    for (int n = 0; n < 30; ++n) {
      Tensor<1> a;
      a(0) = rng.uniform(-2, 2);
      a(1) = rng.uniform(-2, 2);
      const FrameChange f = random_admissible(a, rng);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double prod = f.A(i, 0) * f.Ainv(0, j) + f.A(i, 1) * f.Ainv(1, j);
          CHECK(std::abs(prod - (i == j)) < 1e-12);
        }
    }
    CHECK(code_of([] { FrameChange::from_rows({1, 2}, {2, 4}); }) == ErrorCode::DegenerateFrameChange);
  }

  TEST_CASE("integrability reduces to p22, q22 when a = (1, 0)") {
    randweb::Rng rng(0x14u);
    WebTensors t = synthetic(1, 0);
    fill_random(t, rng);
    const Verdict<2> v = check_integrability(t);
    CHECK(v.residuals[0] == doctest::Approx(t.p(1, 1)));
    CHECK(v.residuals[1] == doctest::Approx(t.q(1, 1)));
    CHECK_FALSE(v.flag);
    t.p(1, 1) = 0.0;
    t.q(1, 1) = 0.0;
    CHECK(check_integrability(t).flag);
  }

  TEST_CASE("zero p, q are integrable and geodesicly parallel for any a") {
    randweb::Rng rng(0x15u);
    for (int n = 0; n < 10; ++n) {
      const WebTensors t = synthetic(rng.uniform(-2, 2), rng.uniform(-2, 2));
      CHECK(check_integrability(t).flag);
      CHECK(check_geodesic_parallel(t).flag);
    }
  }

  TEST_CASE("vanishing torsion leaves the distribution undefined") {
    const WebTensors t = synthetic(0, 0);
    CHECK(code_of([&] { check_integrability(t); }) == ErrorCode::DistributionUndefined);
    CHECK(code_of([&] { check_geodesic_parallel(t); }) == ErrorCode::DistributionUndefined);
    CHECK(code_of([&] { specialize_frame(t); }) == ErrorCode::DistributionUndefined);
  }

  TEST_CASE("specialized frame examples") {
    randweb::Rng rng(0x5fu);
    {
      WebTensors t = synthetic(1, 0);
      fill_random(t, rng);
      const auto [f, s] = specialize_frame(t, std::array<double, 2>{0, 1});
      CHECK(f.D == 1.0);
      for (std::size_t k = 0; k < 16; ++k) CHECK(s.b.flat_at(k) == t.b.flat_at(k));
      for (std::size_t k = 0; k < 4; ++k) CHECK(s.p.flat_at(k) == t.p.flat_at(k));
      CHECK(s.a(0) == 1.0);
      CHECK(s.a(1) == 0.0);
    }
    {
      const auto [f, s] = specialize_frame(synthetic(0, 1));
      CHECK(s.a(0) > 0.0);
      CHECK(s.a(1) == 0.0);
    }
    {
      const auto [f, s] = specialize_frame(synthetic(3, 4));
      CHECK(std::abs(s.a(1)) < 1e-12 * 5.0);
      CHECK(f.D == doctest::Approx(25.0));
    }
    for (int n = 0; n < 100; ++n) {
      const WebTensors t = synthetic(rng.uniform(-5, 5), rng.uniform(-5, 5));
      const auto [f, s] = specialize_frame(t);
      CHECK(std::abs(s.a(1)) <= 1e-12 * std::hypot(t.a(0), t.a(1)));
    }
  }

  TEST_CASE("identity frame change leaves tensors unchanged") {
    const WebTensors t = generic_tensors();
    const WebTensors s = transform_tensors(t, FrameChange::identity());
    for (std::size_t k = 0; k < 16; ++k) CHECK(s.b.flat_at(k) == t.b.flat_at(k));
    for (std::size_t k = 0; k < 4; ++k) CHECK(s.q.flat_at(k) == t.q.flat_at(k));
    CHECK(s.prolongations_stale);
  }

  TEST_CASE("curvature transforms as a (1,3) tensor") {
    randweb::Rng rng(0x49u);
    for (const auto& c : corpus::webs()) {
      const WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
      if (std::hypot(t.a(0), t.a(1)) < 1e-7) continue;
      for (int n = 0; n < 5; ++n) {
        const FrameChange f = random_admissible(t.a, rng);
        const Tensor<4> expect = brute_force_transform(t.b, f);
        const Tensor<4> got = transform_tensors(t, f).b;
        for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(got.flat_at(k) - expect.flat_at(k)) < 1e-10);
      }
    }
  }

  TEST_CASE("p21 in the new frame") {
    randweb::Rng rng(0x39u);
    for (int n = 0; n < 50; ++n) {
      WebTensors t = synthetic(rng.uniform(-2, 2), rng.uniform(-2, 2));
      fill_random(t, rng);
      const FrameChange f = random_admissible(t.a, rng);
      const WebTensors s = transform_tensors(t, f);
      const double a1 = t.a(0), a2 = t.a(1), c1 = f.A(1, 0), c2 = f.A(1, 1);
      const double rhs = c1 * (a2 * t.p(0, 1) - a1 * t.p(1, 1)) + c2 * (a1 * t.p(1, 0) - a2 * t.p(0, 0));
      // The transformed component carries the factor 1/D^2 of the inverse matrix.
      CHECK(f.D * f.D * s.p(1, 0) == doctest::Approx(rhs).epsilon(1e-12));
    }
  }

  TEST_CASE("p22 in the new frame is the integrability combination with a plus sign") {
    randweb::Rng rng(0x3au);
    for (int n = 0; n < 50; ++n) {
      WebTensors t = synthetic(rng.uniform(-2, 2), rng.uniform(-2, 2));
      fill_random(t, rng);
      const FrameChange f = random_admissible(t.a, rng);
      const WebTensors s = transform_tensors(t, f);
      const double rp = check_integrability(t).residuals[0];
      const double rq = check_integrability(t).residuals[1];
      CHECK(f.D * f.D * s.p(1, 1) == doctest::Approx(rp).epsilon(1e-12));
      CHECK(f.D * f.D * s.q(1, 1) == doctest::Approx(rq).epsilon(1e-12));
    }
    // With the opposite sign the relation fails wherever the combination is nonzero.
    const WebTensors t = generic_tensors();
    const auto [f, s] = specialize_frame(t);
    const double rp = check_integrability(t).residuals[0];
    CHECK(std::abs(rp) > 0.1);
    CHECK(std::abs(f.D * f.D * s.p(1, 1) + rp) > 0.1);
  }

  TEST_CASE("geodesic parallelism with a = (1, 0)") {
    randweb::Rng rng(0x40u);
    WebTensors t = synthetic(1, 0);
    fill_random(t, rng);
    const Verdict<4> v = check_geodesic_parallel(t);
    CHECK(v.residuals[0] == doctest::Approx(-t.p(1, 1)));
    CHECK(v.residuals[1] == doctest::Approx(t.p(1, 0)));
    CHECK(v.residuals[2] == doctest::Approx(-t.q(1, 1)));
    CHECK(v.residuals[3] == doctest::Approx(t.q(1, 0)));
    CHECK_FALSE(check_geodesic_parallel(generic_tensors()).flag);
  }

  TEST_CASE("geodesic parallelism implies integrability") {
    randweb::Rng rng(0x41u);
    for (int n = 0; n < 200; ++n) {
      WebTensors t = synthetic(rng.uniform(-2, 2), rng.uniform(-2, 2));
      fill_random(t, rng);
      // Force the four conditions to hold exactly in half of the samples.
      if (n % 2 == 0) {
        const auto [f, s] = specialize_frame(t);
        WebTensors z = s;
        z.p(1, 0) = z.p(1, 1) = z.q(1, 0) = z.q(1, 1) = 0.0;
        const FrameChange back =
            FrameChange::from_rows({f.Ainv(0, 0), f.Ainv(0, 1)}, {f.Ainv(1, 0), f.Ainv(1, 1)});
        t = transform_tensors(z, back);
      }
      const bool gp = check_geodesic_parallel(t).flag;
      if (n % 2 == 0) CHECK(gp);
      if (gp) CHECK(check_integrability(t).flag);
    }
    for (const auto& c : corpus::webs()) {
      const WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
      if (std::hypot(t.a(0), t.a(1)) < 1e-7) continue;
      if (check_geodesic_parallel(t).flag) CHECK(check_integrability(t).flag);
    }
  }

  TEST_CASE("hexagonality contraction") {
    CHECK(hexagonality_contraction(synthetic(0.7, -0.4), FrameChange::from_rows({0.7, -0.4}, {0.4, 0.7})) ==
          std::array<double, 2>{0.0, 0.0});
    randweb::Rng rng(0x6e1u);
    {
      WebTensors t = synthetic(1, 0);
      fill_random(t, rng);
      const auto c = hexagonality_contraction(t, FrameChange::from_rows({1, 0}, {0, 1}));
      CHECK(c[0] == doctest::Approx(t.b(0, 1, 1, 1)));
      CHECK(c[1] == doctest::Approx(t.b(1, 1, 1, 1)));
    }
    const WebTensors t = generic_tensors();
    for (int n = 0; n < 10; ++n) {
      const FrameChange f = random_admissible(t.a, rng);
      const auto c = hexagonality_contraction(t, f);
      for (int i = 0; i < 2; ++i) {
        double s = 0.0;
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) s += t.b(i, j, k, l) * f.Ainv(j, 1) * f.Ainv(k, 1) * f.Ainv(l, 1);
        CHECK(c[i] == doctest::Approx(s).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("hexagonality verdicts") {
    {
      WebTensors t = synthetic(1, 0);
      t.b(1, 1, 1, 1) = 1.0;
      const HexagonalityResult h = check_hexagonal(t, FrameChange::from_rows({1, 0}, {0, 1}));
      CHECK_FALSE(h.conditions_hold);
      CHECK(h.subweb_curvature == 1.0);
      CHECK(h.theorem_applies);
      CHECK(h.specialized_agrees);
    }
    {
      const auto& c = corpus::webs()[1];
      const WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
      const auto [f, s] = specialize_frame(t);
      const HexagonalityResult h = check_hexagonal(t, f);
      CHECK(h.conditions_hold);
      CHECK(h.theorem_applies);
    }
    {
      const WebTensors t = generic_tensors();
      const FrameChange f = specializing_frame(t.a);
      CHECK(code_of([&] { check_hexagonal(t, f, {}, true); }) == ErrorCode::PreconditionNotMet);
      const HexagonalityResult h = check_hexagonal(t, f, {}, false);
      CHECK_FALSE(h.conditions_hold);
      CHECK_FALSE(h.theorem_applies);
      CHECK(h.specialized_agrees);
    }
  }

  TEST_CASE("conformal curvature coefficients") {
    CHECK(conformal_curvature_poly(Tensor<4>{}) == std::array<double, 5>{0, 0, 0, 0, 0});
    Tensor<4> b;
    b(1, 0, 0, 0) = 1.0;  // s^2_111
    CHECK(conformal_curvature_poly(b) == std::array<double, 5>{1, 0, 0, 0, 0});
    CHECK(evaluate_poly(conformal_curvature_poly(b), 1.7) == doctest::Approx(std::pow(1.7, 4)));
  }

  TEST_CASE("invariant b: simple cases") {
    CHECK(invariant_b(synthetic(0.6, 0.8), specializing_frame(synthetic(0.6, 0.8).a)).value == 0.0);
    randweb::Rng rng(0x1bu);
    WebTensors t = synthetic(1, 0);
    fill_random(t, rng);
    // b = a_i b^i with b^i = b^i_222 here, so b = +b^1_222.
    const InvariantB r = invariant_b(t, FrameChange::from_rows({1, 0}, {0, 1}));
    CHECK(r.value == doctest::Approx(t.b(0, 1, 1, 1)));
  }

  TEST_CASE("invariant b equals the conformal curvature up to a factor") {
    randweb::Rng rng(0x58u);
    for (const auto& c : corpus::webs()) {
      const WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
      if (std::abs(t.a(0)) < 0.1) continue;
      CAPTURE(c.label);
      for (int n = 0; n < 5; ++n) {
        const FrameChange f = random_admissible(t.a, rng);
        const InvariantB r = invariant_b(t, f);
        REQUIRE(r.poly_residual.has_value());
        CHECK(*r.poly_residual < 1e-8);
        CHECK(r.expansion_residual < 1e-9 * (1.0 + std::abs(r.value)));
      }
    }
    // Random curvature tensors, not only those produced by webs.
    for (int n = 0; n < 50; ++n) {
      WebTensors t = synthetic(rng.uniform(0.5, 2), rng.uniform(-2, 2));
      fill_random(t, rng);
      const InvariantB r = invariant_b(t, random_admissible(t.a, rng));
      CHECK(*r.poly_residual < 1e-10);
    }
  }

  TEST_CASE("alternative coefficient pattern breaks the invariant identity") {
    // C2 = 3(s2_122 - 3 s1_112) and C1 = -(3 s2_222 - 3 s1_122) in place of the
    // coefficients used by conformal_curvature_poly.
    const WebTensors t = generic_tensors();
    const Tensor<4> s = symmetric_part(t.b);
    std::array<double, 5> alt = conformal_curvature_poly(t.b);
    alt[2] = 3.0 * (s(1, 0, 1, 1) - 3.0 * s(0, 0, 0, 1));
    alt[3] = -(3.0 * s(1, 1, 1, 1) - 3.0 * s(0, 0, 1, 1));
    const FrameChange f = specializing_frame(t.a);
    const InvariantB r = invariant_b(t, f);
    const double a1 = t.a(0), a2 = t.a(1);
    const double alt_residual = std::abs(r.value + std::pow(a1, 4) / std::pow(f.D, 3) * evaluate_poly(alt, a2 / a1));
    CHECK(*r.poly_residual < 1e-8);
    CHECK(alt_residual > 1e-3);
  }

  TEST_CASE("bundle connection") {
    const auto& par = corpus::webs()[0];
    const ChernData flat = solve_chern(build_coframe(corpus::web(par), corpus::point(par)));
    const ConnectionValues w0 = connection_values(flat);
    CHECK(bundle_connection(w0, Tensor<1>{}, 0.3, -2.0) == w0);

    // Specialized frame: theta^1_1 = omega^1_1, theta^1_2 = omega^1_2,
    // theta^2_1 = omega^2_1 + a1/2 (p omega_1^2 + q omega_2^2),
    // theta^2_2 = omega^2_2 - a1/2 (p omega_1^1 + q omega_2^1).
    const auto& gen = corpus::webs()[3];
    const ChernData cd = solve_chern(build_coframe(corpus::web(gen), corpus::point(gen)));
    const WebTensors t = compute_tensors(cd);
    const auto [f, s] = specialize_frame(t);
    const ConnectionValues w = transform_connection(connection_values(cd), f);
    const double a1 = s.a(0), p = 0.75, q = -1.25;
    const ConnectionValues th = bundle_connection(w, s.a, p, q);
    for (int k = 0; k < 4; ++k) {
      CHECK(th[0][0][k] == doctest::Approx(w[0][0][k]));
      CHECK(th[0][1][k] == doctest::Approx(w[0][1][k]));
    }
    const std::array<double, 4> corr21{0, 0.5 * a1 * p, 0, 0.5 * a1 * q};
    const std::array<double, 4> corr22{-0.5 * a1 * p, 0, -0.5 * a1 * q, 0};
    for (int k = 0; k < 4; ++k) {
      CHECK(th[1][0][k] - w[1][0][k] == doctest::Approx(corr21[k]));
      CHECK(th[1][1][k] - w[1][1][k] == doctest::Approx(corr22[k]));
    }
  }

  TEST_CASE("total geodesy") {
    WebTensors t = synthetic(2, 0);
    CHECK(check_totally_geodesic(t).flag);
    t.p(1, 1) = 1.0;
    CHECK_FALSE(check_totally_geodesic(t).flag);
    CHECK(code_of([] { check_totally_geodesic(synthetic(1, 0.5)); }) == ErrorCode::PreconditionNotMet);

    for (const auto& c : corpus::webs()) {
      const WebTensors w = tensors_of(corpus::web(c), corpus::point(c));
      if (std::hypot(w.a(0), w.a(1)) < 1e-7) continue;
      CAPTURE(c.label);
      const auto [f, s] = specialize_frame(w);
      CHECK(check_totally_geodesic(s).flag == check_integrability(s).flag);
    }
  }

  TEST_CASE("verdicts do not depend on the frame") {
    randweb::Rng rng(0xf1u);
    for (const auto& c : corpus::webs()) {
      const WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
      if (std::hypot(t.a(0), t.a(1)) < 1e-7) continue;
      CAPTURE(c.label);
      const bool integ = check_integrability(t).flag;
      const bool gp = check_geodesic_parallel(t).flag;
      const bool hex = check_hexagonal(t, specializing_frame(t.a), {}, false).conditions_hold;
      for (int n = 0; n < 10; ++n) {
        const WebTensors s = transform_tensors(t, random_admissible(t.a, rng));
        CHECK(check_integrability(s).flag == integ);
        CHECK(check_geodesic_parallel(s).flag == gp);
        CHECK(check_hexagonal(s, specializing_frame(s.a), {}, false).conditions_hold == hex);
      }
    }
  }

  TEST_CASE("classification of the known webs") {
    {
      const auto& c = corpus::webs()[0];
      const ClassificationReport r = classify(tensors_of(corpus::web(c), corpus::point(c)));
      CHECK(r.isoclinicly_geodesic);
      CHECK_FALSE(r.frame.has_value());
      CHECK_FALSE(r.delta_integrable.has_value());
      CHECK_FALSE(r.principal_bivector.has_value());
    }
    {
      const auto& c = corpus::webs()[1];
      const WebTensors t = tensors_of(corpus::web(c), corpus::point(c));
      const ClassificationReport r = classify(t);
      CHECK_FALSE(r.isoclinicly_geodesic);
      CHECK(r.a_norm > 0.5);
      CHECK(max_abs(t.b) < 1e-8);
      for (double x : r.conformal_poly) CHECK(std::abs(x) < 1e-8);
      REQUIRE(r.principal_bivector.has_value());
      CHECK(*r.principal_bivector);
      CHECK(r.delta_integrable->flag);
      CHECK(r.totally_geodesic->flag);
    }
  }
}
