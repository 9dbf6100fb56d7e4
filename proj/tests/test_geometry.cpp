#include "doctest.h"

#include <cmath>

#include "lcft/geometry.hpp"
#include "lcft/rng.hpp"

using namespace lcft;

namespace {

// independent oracle for tau along the inner normal direction on the ball:
// the circle max of |0.9 + lambda|^2 - 0.81 is 2*0.9*c + c^2, so tau solves
// c^2 + 1.8 c = eps
double ball_normal_tau(double eps) { return (-1.8 + std::sqrt(3.24 + 4.0 * eps)) / 2.0; }

}  // namespace

TEST_CASE("tau closed forms on the ball") {
  ModelDomain ball(1, 1);
  C2 center{cplx(0), cplx(0)};
  C2 e1{cplx(1), cplx(0)};
  C2 e2{cplx(0), cplx(1)};
  CHECK(tau(ball, center, e1, 0.01) == doctest::Approx(0.1).epsilon(1e-4));
  C2 z{cplx(0.9), cplx(0)};
  CHECK(tau(ball, z, e2, 0.01) == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(tau(ball, z, e1, 0.01) == doctest::Approx(ball_normal_tau(0.01)).epsilon(1e-4));
  CHECK_THROWS_WITH(tau(ball, z, {cplx(2), cplx(0)}, 0.01), "direction must be unit");
}

TEST_CASE("tau tangential closed form on E(1,2)") {
  ModelDomain dom(1, 2);
  C2 z{cplx(0.9), cplx(0)};
  C2 e2{cplx(0), cplx(1)};
  CHECK(tau(dom, z, e2, 0.01) == doctest::Approx(std::pow(0.01, 0.25)).epsilon(1e-4));
}

TEST_CASE("tau is monotone in eps") {
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    ModelDomain dom(m1, m2);
    auto pts = sample_near_boundary(dom, 10, 21, 1e-3, 5e-2);
    Rng rng = Rng::substream(3, "tau_monotone");
    for (const auto& zeta : pts) {
      C2 v = rng.unit_c2();
      DirectionalJet jet = dom.directional_jet(zeta, v);
      double prev = 0.0;
      for (double eps = 1e-4; eps < 0.2; eps *= 2.0) {
        double t = tau(jet, eps);
        CHECK(t >= prev * (1.0 - 2e-6));
        prev = t;
      }
    }
  }
}

TEST_CASE("extremal basis on the ball") {
  ModelDomain ball(1, 1);
  ExtremalFrame f = extremal_basis(ball, {cplx(0.9), cplx(0)}, 0.01);
  CHECK(std::abs(f.v1[0] - cplx(1)) < 1e-12);
  CHECK(std::abs(f.v1[1]) < 1e-12);
  CHECK(std::abs(f.v2[0]) < 1e-12);
  CHECK(std::abs(f.v2[1] - cplx(1)) < 1e-12);
  CHECK(f.tau1 == doctest::Approx(ball_normal_tau(0.01)).epsilon(1e-4));
  CHECK(f.tau2 == doctest::Approx(0.1).epsilon(1e-4));
  CHECK_THROWS_WITH((void)extremal_basis(ball, {cplx(0), cplx(0)}, 0.01), "degenerate gradient");
}

TEST_CASE("extremal basis on E(1,2) and orthonormality") {
  ModelDomain dom(1, 2);
  ExtremalFrame f = extremal_basis(dom, {cplx(0.9), cplx(0)}, 0.01);
  CHECK(std::abs(f.v2[1] - cplx(1)) < 1e-12);
  CHECK(f.tau2 == doctest::Approx(std::pow(0.01, 0.25)).epsilon(1e-4));

  // orthonormality residual across random frames
  Rng rng = Rng::substream(17, "frames");
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    ModelDomain d2(m1, m2);
    auto pts = sample_near_boundary(d2, 25, 5, 1e-3, 1e-1);
    for (const auto& zeta : pts) {
      ExtremalFrame fr = extremal_basis(d2, zeta, rng.log_uniform(1e-4, 1e-1));
      CHECK(std::abs(hdot(fr.v1, fr.v1) - 1.0) < 1e-12);
      CHECK(std::abs(hdot(fr.v2, fr.v2) - 1.0) < 1e-12);
      CHECK(std::abs(hdot(fr.v1, fr.v2)) < 1e-12);
      CHECK(fr.tau1 <= fr.tau2 * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("normal tau scale stays comparable to eps") {
  ModelDomain ball(1, 1);
  C2 z{cplx(0.9), cplx(0)};
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    auto r = tau_normal_scale(ball, z, eps);
    CHECK(r.ratio >= 0.3);
    CHECK(r.ratio <= 1.2);
  }
  // doubling eps at most doubles the normal radius
  for (auto [m1, m2] : {std::pair{1, 2}, {2, 2}}) {
    ModelDomain dom(m1, m2);
    auto pts = sample_near_boundary(dom, 10, 77, 1e-3, 5e-2);
    for (const auto& zeta : pts) {
      for (double eps : {1e-3, 1e-2}) {
        double t1 = extremal_basis(dom, zeta, eps).tau1;
        double t2 = extremal_basis(dom, zeta, 2 * eps).tau1;
        CHECK(t2 <= 2.0 * t1 * (1.0 + 1e-3));
      }
    }
  }
}

TEST_CASE("polydisc membership") {
  ModelDomain ball(1, 1);
  ExtremalFrame f = extremal_basis(ball, {cplx(0.9), cplx(0)}, 0.01);
  Polydisc pd{f, 1.0, 1.0};
  CHECK(polydisc_contains(pd, f.base));
  C2 on_edge = f.base + (0.999 * pd.c0 * pd.A * f.tau2) * f.v2;
  C2 off_edge = f.base + (1.001 * pd.c0 * pd.A * f.tau2) * f.v2;
  CHECK(polydisc_contains(pd, on_edge));
  CHECK(!polydisc_contains(pd, off_edge));
  CHECK(polydisc_contains(pd, f.base + cplx(0.0) * f.v1 + cplx(0.0, 0.05) * f.v2));
}

TEST_CASE("pseudo distance basics") {
  ModelDomain ball(1, 1);
  C2 zeta{cplx(0.5), cplx(0)};
  auto d0 = pseudo_distance(ball, zeta, zeta, 1.0);
  REQUIRE(d0.has_value());
  CHECK(*d0 <= 1e-8 * 1.001);
  auto d = pseudo_distance(ball, zeta, {cplx(0.5), cplx(0.2)}, 1.0);
  REQUIRE(d.has_value());
  CHECK(*d == doctest::Approx(0.04).epsilon(5e-4));
}

TEST_CASE("pseudo distance quasi-symmetry") {
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}}) {
    ModelDomain dom(m1, m2);
    auto pts = sample_near_boundary(dom, 100, 31, 5e-3, 5e-2);
    Rng rng = Rng::substream(13, "pdist_sym");
    int checked = 0;
    for (const auto& z : pts) {
      ExtremalFrame f = extremal_basis(dom, z, rng.log_uniform(1e-3, 2e-2));
      C2 w = z + (0.08 * f.tau1 * cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))) * f.v1 +
             (0.08 * f.tau2 * cplx(rng.uniform(-1, 1), rng.uniform(-1, 1))) * f.v2;
      if (dom.rho(w) >= -1e-9) continue;
      auto dzw = pseudo_distance(dom, z, w, 0.1);
      auto dwz = pseudo_distance(dom, w, z, 0.1);
      if (!dzw || !dwz) continue;
      if (*dzw < 5e-8 || *dwz < 5e-8) continue;
      ++checked;
      CHECK(*dzw <= 10.0 * *dwz);
      CHECK(*dwz <= 10.0 * *dzw);
    }
    CHECK(checked > 50);
  }
}

TEST_CASE("k weight on the ball") {
  ModelDomain ball(1, 1);
  C2 z{cplx(0.9), cplx(0)};
  CHECK(k_weight(ball, z, {cplx(0), cplx(1)}) ==
        doctest::Approx(0.1 / std::sqrt(0.1)).epsilon(1e-3));
  double tau_norm = ball_normal_tau(0.1);
  CHECK(k_weight(ball, z, {cplx(1), cplx(0)}) == doctest::Approx(0.1 / tau_norm).epsilon(1e-3));
  // monotone in tau: the tangential direction has the larger radius
  CHECK(k_weight(ball, z, {cplx(1), cplx(0)}) > k_weight(ball, z, {cplx(0), cplx(1)}));
}

TEST_CASE("k norm of a coordinate form") {
  ModelDomain ball(1, 1);
  C2 z{cplx(0.9), cplx(0)};
  CHECK(k_norm_value(ball, {cplx(0), cplx(0)}, z) == 0.0);
  double v = k_norm_value(ball, {cplx(0), cplx(1)}, z, 500, 1);
  CHECK(v == doctest::Approx(std::sqrt(0.1) / 0.1).epsilon(1e-2));
  double v2 = k_norm_value(ball, {cplx(0), cplx(2)}, z, 500, 1);
  CHECK(v2 == doctest::Approx(2.0 * v).epsilon(1e-12));
}

TEST_CASE("geometry comparability ranges stay tight") {
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    ModelDomain dom(m1, m2);
    auto p2 = property2_range(dom, 100, 2024);
    CHECK(p2.spread() <= 50.0);
    auto p3 = property3_range(dom, 100, 2025);
    CHECK(p3.spread() <= 50.0);
    CHECK(property5_constant(dom, 100, 2026) <= 10.0);
    auto eq = tau_equiv_range(dom, 100, 2027, 0.1);
    CHECK(eq.lo >= 0.25);
    CHECK(eq.hi <= 4.0);
  }
}

TEST_CASE("polydisc engulfing constant exists") {
  ModelDomain ball(1, 1);
  double c2 = engulfing_c2(ball, 20, 5, 0.1);
  CHECK(c2 > 0.5);
  CHECK(c2 <= 64.0);
}
