#include "doctest.h"

#include <cmath>

#include "lcft/model_domain.hpp"
#include "lcft/rng.hpp"

using namespace lcft;

namespace {

// central finite differences of rho in the four real directions, assembled
// into the Wirtinger derivative d rho / d z_i
C2 fd_grad(const ModelDomain& dom, const C2& z, double h) {
  C2 g;
  for (int i = 0; i < 2; ++i) {
    C2 zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    double dx = (dom.rho(zp) - dom.rho(zm)) / (2 * h);
    zp = z;
    zm = z;
    zp[i] += cplx(0, h);
    zm[i] -= cplx(0, h);
    double dy = (dom.rho(zp) - dom.rho(zm)) / (2 * h);
    g[i] = 0.5 * cplx(dx, -dy);
  }
  return g;
}

}  // namespace

TEST_CASE("rho at reference points") {
  ModelDomain ball(1, 1);
  CHECK(ball.rho({cplx(0), cplx(0)}) == doctest::Approx(-1.0));
  CHECK(ball.rho({cplx(1), cplx(0)}) == doctest::Approx(0.0));
  ModelDomain e12(1, 2);
  CHECK(e12.rho({cplx(0), cplx(0.5)}) == doctest::Approx(-0.9375));
}

TEST_CASE("analytic gradient matches examples") {
  ModelDomain ball(1, 1);
  auto d = ball.rho_derivatives({cplx(0.9), cplx(0)});
  CHECK(std::abs(d.grad[0] - cplx(0.9)) < 1e-15);
  CHECK(std::abs(d.grad[1]) < 1e-15);

  ModelDomain e12(1, 2);
  auto d2 = e12.rho_derivatives({cplx(0), cplx(0.5)});
  CHECK(std::abs(d2.grad[0]) < 1e-15);
  CHECK(std::abs(d2.grad[1] - cplx(0.25)) < 1e-15);
}

TEST_CASE("derivatives match finite differences") {
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    ModelDomain dom(m1, m2);
    Rng rng = Rng::substream(7, "fd_check");
    for (int it = 0; it < 50; ++it) {
      C2 z = {0.8 * rng.gaussian_cplx(), 0.8 * rng.gaussian_cplx()};
      C2 fg = fd_grad(dom, z, 1e-5);
      auto d = dom.rho_derivatives(z);
      for (int i = 0; i < 2; ++i) {
        double scale = std::abs(d.grad[i]) + 1.0;
        CHECK(std::abs(d.grad[i] - fg[i]) / scale < 1e-6);
      }
      // mixed Hessian via finite differences of the analytic gradient
      for (int i = 0; i < 2; ++i) {
        double h = 1e-5;
        C2 zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        cplx dx = (dom.rho_derivatives(zp).grad[i] - dom.rho_derivatives(zm).grad[i]) / (2 * h);
        zp = z;
        zm = z;
        zp[i] += cplx(0, h);
        zm[i] -= cplx(0, h);
        cplx dy = (dom.rho_derivatives(zp).grad[i] - dom.rho_derivatives(zm).grad[i]) / (2 * h);
        cplx mixed = 0.5 * (dx + cplx(0, 1) * dy); // d/dzbar_i of grad_i
        double scale = d.hess_mixed[i] + 1.0;
        CHECK(std::abs(mixed - cplx(d.hess_mixed[i])) / scale < 1e-5);
      }
    }
  }
}

TEST_CASE("rho is convex along random segments") {
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    ModelDomain dom(m1, m2);
    Rng rng = Rng::substream(11, "convexity");
    for (int it = 0; it < 1000; ++it) {
      C2 x = {rng.gaussian_cplx(), rng.gaussian_cplx()};
      C2 y = {rng.gaussian_cplx(), rng.gaussian_cplx()};
      C2 mid = 0.5 * (x + y);
      CHECK(dom.rho(mid) <= 0.5 * (dom.rho(x) + dom.rho(y)) + 1e-12);
    }
  }
}

TEST_CASE("boundary distance: ball is exact") {
  ModelDomain ball(1, 1);
  CHECK(ball.delta({cplx(0.9), cplx(0)}) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(ball.delta({cplx(0), cplx(0)}) == doctest::Approx(1.0).epsilon(1e-9));
  C2 z = {cplx(0.3, 0.2), cplx(-0.1, 0.4)};
  CHECK(ball.delta(z) == doctest::Approx(1.0 - norm(z)).epsilon(1e-9));
}

TEST_CASE("boundary distance agrees with a dense boundary mesh") {
  ModelDomain dom(1, 2);
  C2 z = {cplx(0), cplx(0.5)};
  // brute-force minimum of |z - p| over a dense boundary mesh (the oracle)
  double best = 1e300;
  const int N = 2000;
  for (int i = 0; i <= N; ++i) {
    double u = 1.5707963267948966 * i / N;
    double s1 = std::pow(std::cos(u), 1.0);
    double s2 = std::pow(std::sin(u), 0.25);
    for (int k = 0; k <= 64; ++k) {
      double th1 = 6.283185307179586 * k / 64;
      C2 p = {s1 * cplx(std::cos(th1), std::sin(th1)), cplx(s2)};
      best = std::min(best, norm(z - p));
    }
  }
  double d = dom.delta(z);
  CHECK(std::abs(d - best) < 1e-4);
  CHECK(d > 0.49);
  CHECK(d < 0.51);
}

TEST_CASE("delta is comparable to -rho on interior points") {
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
    ModelDomain dom(m1, m2);
    auto pts = dom.sample_interior(1000, 3);
    double lo = 1e300, hi = 0.0;
    for (const auto& z : pts) {
      double r = dom.delta(z) / (-dom.rho(z));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo <= 10.0);
  }
}

TEST_CASE("directional jet reproduces the increment") {
  ModelDomain ball(1, 1);
  auto j = ball.directional_jet({cplx(0), cplx(0)}, {cplx(1), cplx(0)});
  CHECK(std::abs(j.c[1][1] - cplx(1.0)) < 1e-15);
  CHECK(std::abs(j.c[1][0]) < 1e-15);

  auto j2 = ball.directional_jet({cplx(0.9), cplx(0)}, {cplx(1), cplx(0)});
  CHECK(std::abs(j2.c[1][0] - cplx(0.9)) < 1e-15);
  CHECK(std::abs(j2.c[1][1] - cplx(1.0)) < 1e-15);

  ModelDomain e12(1, 2);
  auto j3 = e12.directional_jet({cplx(0.9), cplx(0)}, {cplx(0), cplx(1)});
  CHECK(std::abs(j3.c[2][2] - cplx(1.0)) < 1e-15);
  CHECK(std::abs(j3.c[1][1]) < 1e-15);

  // jets reproduce rho(zeta + lambda v) - rho(zeta) at |lambda| = 1e-2
  for (auto [m1, m2] : {std::pair{1, 2}, {2, 2}}) {
    ModelDomain dom(m1, m2);
    Rng rng = Rng::substream(5, "jet_check");
    for (int it = 0; it < 50; ++it) {
      auto pts = dom.sample_interior(1, 100 + it);
      C2 zeta = pts[0];
      C2 v = rng.unit_c2();
      auto jet = dom.directional_jet(zeta, v);
      for (int k = 0; k < 8; ++k) {
        double th = 0.7853981633974483 * k;
        cplx lam = 1e-2 * cplx(std::cos(th), std::sin(th));
        double exact = dom.rho(zeta + lam * v) - dom.rho(zeta);
        double viajet = jet.eval(lam);
        CHECK(std::abs(exact - viajet) <= 1e-8 * (std::abs(exact) + 1e-30) + 1e-16);
      }
    }
  }
}

TEST_CASE("jet coefficients are conjugate-symmetric") {
  ModelDomain dom(2, 2);
  Rng rng = Rng::substream(9, "jet_sym");
  auto pts = dom.sample_interior(20, 42);
  for (const auto& zeta : pts) {
    C2 v = rng.unit_c2();
    auto jet = dom.directional_jet(zeta, v);
    for (int a = 0; a <= jet.max_order; ++a)
      for (int b = 0; a + b <= jet.max_order; ++b)
        CHECK(std::abs(jet.c[a][b] - std::conj(jet.c[b][a])) < 1e-12);
  }
}

TEST_CASE("interior sampling is deterministic and contained") {
  ModelDomain dom(1, 2);
  auto a = dom.sample_interior(10, 1);
  auto b = dom.sample_interior(10, 1);
  REQUIRE(a.size() == 10);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(dom.rho(a[i]) < 0.0);
  }
}

TEST_CASE("concentration sampling pins the boundary distance") {
  ModelDomain ball(1, 1);
  auto pts = ball.sample_interior(1000, 2, 0.01);
  for (const auto& z : pts) {
    double d = ball.delta(z);
    CHECK(d >= 0.005);
    CHECK(d <= 0.02);
  }
}

TEST_CASE("domain spec parsing round-trips") {
  ModelDomain dom = parse_domain_spec("ellipsoid:1,2");
  CHECK(dom.m1() == 1);
  CHECK(dom.m2() == 2);
  CHECK(dom.spec_string() == "ellipsoid:1,2");
  CHECK(dom.type() == 4);
  CHECK_THROWS(parse_domain_spec("ball:1,2"));
}
