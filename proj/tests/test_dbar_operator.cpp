#include "doctest.h"

#include <cmath>

#include "lcft/dbar_operator.hpp"
#include "lcft/families.hpp"
#include "lcft/rng.hpp"

using namespace lcft;

TEST_CASE("Wirtinger finite differences") {
  C2 z{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
  ScalarField conj1 = [](const C2& w) { return std::conj(w[0]); };
  auto d = dbar_field(conj1, z);
  CHECK(std::abs(d.value[0] - 1.0) < 1e-9);
  CHECK(std::abs(d.value[1]) < 1e-9);
  CHECK(!d.warn);

  ScalarField holo = [](const C2& w) { return w[0] * w[0] + 3.0 * w[1]; };
  auto dh = dbar_field(holo, z);
  CHECK(std::abs(dh.value[0]) < 1e-9);
  CHECK(std::abs(dh.value[1]) < 1e-9);

  ScalarField absq = [](const C2& w) { return cplx(std::norm(w[0]), 0.0); };
  auto da = dbar_field(absq, {cplx(0.3), cplx(0.1)});
  CHECK(std::abs(da.value[0] - cplx(0.3)) < 1e-9);
  CHECK(std::abs(da.value[1]) < 1e-9);
}

TEST_CASE("closedness certificates") {
  ModelDomain ball(1, 1);
  Form01 f = dbar_round_bump({cplx(0.2), cplx(0.1)}, 0.4);
  CHECK(f.certificate == Form01::Certificate::analytic);
  Form01 g;
  g.coeff = f.coeff;
  g.scale = f.scale;
  CHECK(check_closedness(ball, g, 60, 5));
  CHECK(g.certificate == Form01::Certificate::numerically_checked);

  // a deliberately non-closed form fails
  Form01 bad;
  bad.coeff = [](const C2& z) { return FormCoeffs{std::conj(z[1]) * std::conj(z[1]), cplx(0)}; };
  bad.scale = 1.0;
  CHECK(!check_closedness(ball, bad, 60, 5));
  CHECK(bad.certificate == Form01::Certificate::unknown);
}

TEST_CASE("concentration families are closed and contained") {
  for (auto [m1, m2] : {std::pair{1, 1}, {1, 2}}) {
    ModelDomain dom(m1, m2);
    for (double t : {0.1, 0.05}) {
      Form01 f = concentration_family(dom, t, FamilyKind::bump);
      REQUIRE(f.support.has_value());
      // support containment: coefficients vanish outside the box
      Rng rng = Rng::substream(3, "supp");
      for (int i = 0; i < 200; ++i) {
        C2 z = {rng.gaussian_cplx(), rng.gaussian_cplx()};
        z = (0.95 / norm(z)) * z;
        if (!f.support->contains(z, 1.0)) {
          auto v = f(z);
          CHECK(std::abs(v[0]) == 0.0);
          CHECK(std::abs(v[1]) == 0.0);
        }
      }
      // delta stays in [t/2, 2t] on the support box samples
      for (int i = 0; i < 100; ++i) {
        cplx l1(rng.uniform(-1, 1), rng.uniform(-1, 1));
        cplx l2(rng.uniform(-1, 1), rng.uniform(-1, 1));
        C2 z = f.support->center + (f.support->R1 * l1) * f.support->u1 +
               (f.support->R2 * l2) * f.support->u2;
        if (dom.rho(z) >= -1e-12) continue;
        auto v = f(z);
        if (std::abs(v[0]) + std::abs(v[1]) == 0.0) continue;
        double d = dom.delta(z);
        CHECK(d >= t / 2);
        CHECK(d <= 2 * t);
      }
      // closedness via finite differences near the support
      ScalarField f1 = [&f](const C2& w) { return f(w)[0]; };
      ScalarField f2 = [&f](const C2& w) { return f(w)[1]; };
      C2 c = f.support->center;
      auto d1 = dbar_field(f1, c, 1e-5);
      auto d2 = dbar_field(f2, c, 1e-5);
      CHECK(std::abs(d1.value[1] - d2.value[0]) <= 1e-4 * f.scale);
    }
    // the tangential kind: closed, global, with exact potential
    Form01 g = concentration_family(dom, 0.05, FamilyKind::tangential_oscillation);
    CHECK(!g.support.has_value());
    REQUIRE(g.potential.has_value());
    Rng rng = Rng::substream(7, "peak");
    for (int i = 0; i < 20; ++i) {
      C2 z = {0.6 * rng.gaussian_cplx(), 0.6 * rng.gaussian_cplx()};
      if (dom.rho(z) >= -0.05) continue;
      auto fd = dbar_field(*g.potential, z, 1e-4);
      auto v = g(z);
      CHECK(std::abs(fd.value[0] - v[0]) <= 2e-5 + 1e-4 * std::abs(v[0]));
      CHECK(std::abs(fd.value[1] - v[1]) <= 2e-5 + 1e-4 * std::abs(v[1]));
    }
  }
}

TEST_CASE("homotopy identity at desk scale") {
  // compact smoke version of the acceptance criterion: one bump, three points
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  p.K0 = 4.0;
  QuadratureSpec quad;
  quad.base_n = 16;
  quad.shell_angular = 12;
  Form01 f = dbar_round_bump({cplx(0.25), cplx(0.15)}, 0.45);
  PreparedForm pf(ball, p, f, quad);
  for (const C2& z : {C2{cplx(0.05), cplx(0.15)}, C2{cplx(-0.3, 0.2), cplx(0.1)},
                      C2{cplx(0.45), cplx(-0.25)}}) {
    HomotopyResult h = homotopy_residual(pf, z);
    CHECK(h.residual_rel <= 0.05);
  }
  CHECK_THROWS(homotopy_residual(pf, C2{cplx(0.999), cplx(0)}));
}

TEST_CASE("PN image is dbar-closed") {
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  QuadratureSpec quad;
  quad.base_n = 12;
  Form01 f = dbar_round_bump({cplx(0.3), cplx(-0.1)}, 0.4);
  PreparedForm pf(ball, p, f, quad);
  auto g1 = [&pf](const C2& w) { return pf.apply_PN(w).value[0]; };
  auto g2 = [&pf](const C2& w) { return pf.apply_PN(w).value[1]; };
  Rng rng = Rng::substream(11, "pn_closed");
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 8; ++i) {
    C2 z = {0.5 * rng.gaussian_cplx(), 0.5 * rng.gaussian_cplx()};
    if (ball.rho(z) >= -0.2) continue;
    cplx d12 = dbar_field(g1, z, 1e-3).value[1];
    cplx d21 = dbar_field(g2, z, 1e-3).value[0];
    worst = std::max(worst, std::abs(d12 - d21));
    scale = std::max({scale, std::abs(pf.apply_PN(z).value[0]), 1e-3});
  }
  CHECK(worst <= 0.05 * scale + 1e-6);
}

TEST_CASE("solve_and_report shape and determinism") {
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  QuadratureSpec quad;
  quad.base_n = 10;
  quad.shell_levels = 4;
  Form01 f = dbar_round_bump({cplx(0.2), cplx(0.0)}, 0.4);
  PreparedForm pf(ball, p, f, quad);
  std::vector<C2> pts = {{cplx(0.1), cplx(0.0)}, {cplx(-0.2), cplx(0.1)}};
  auto rows = solve_and_report(pf, pts);
  REQUIRE(rows.size() == 2);
  auto rows2 = solve_and_report(pf, pts);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].u == rows2[i].u);
    CHECK(rows[i].residual == rows2[i].residual);
  }
  CHECK(solve_and_report(pf, {}).empty());
}
