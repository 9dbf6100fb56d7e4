#include "doctest.h"

#include <cmath>

#include "lcft/bergman.hpp"
#include "lcft/rng.hpp"

using namespace lcft;

TEST_CASE("moments match the Dirichlet closed form on the ball") {
  ModelDomain ball(1, 1);
  // reference values from the closed form pi^2 a! b! Gamma(r+1) / Gamma(a+b+r+3)
  CHECK(monomial_moment_closed_form(ball, 0, 0, 0) == doctest::Approx(4.934802200544679));
  CHECK(monomial_moment_closed_form(ball, 1, 0, 0) == doctest::Approx(1.6449340668482264));
  CHECK(monomial_moment_closed_form(ball, 1, 1, 0) == doctest::Approx(0.4112335167120566));
  for (double r : {0.0, 1.0, 2.0}) {
    WeightSpec w;
    w.r = r;
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b) {
        double q = monomial_moment(ball, w, a, b);
        double c = monomial_moment_closed_form(ball, r, a, b);
        CHECK(std::abs(q - c) <= 1e-6 * c);
      }
  }
  // fractional exponents work through the same quadrature
  WeightSpec wh;
  wh.r = 0.5;
  double q = monomial_moment(ball, wh, 0, 0);
  CHECK(std::abs(q - monomial_moment_closed_form(ball, 0.5, 0, 0)) <= 1e-6 * q);
}

TEST_CASE("moments on E(1,2) against the general closed form") {
  ModelDomain dom(1, 2);
  for (double r : {0.0, 1.0}) {
    WeightSpec w;
    w.r = r;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; b <= 2; ++b) {
        double q = monomial_moment(dom, w, a, b);
        double c = monomial_moment_closed_form(dom, r, a, b);
        CHECK(std::abs(q - c) <= 1e-6 * c);
      }
  }
}

TEST_CASE("moment table is consistent between grid and refined values") {
  ModelDomain ball(1, 1);
  WeightSpec w;
  w.r = 1.0;
  MomentTable tab(ball, w, 8);
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; a + b <= 8; ++b)
      CHECK(std::abs(tab.moment(a, b) - tab.refined(a, b)) <= 1e-7 * tab.refined(a, b));
  CHECK_THROWS(tab.moment(9, 0));
}

TEST_CASE("projection reproduces holomorphic polynomials exactly") {
  ModelDomain ball(1, 1);
  WeightSpec w;
  w.r = 1.0;
  BergmanProjector proj(ball, w, 6);
  ScalarField f = [](const C2& z) { return z[0] * z[0] + 3.0 * z[1]; };
  auto e = proj.project(f);
  CHECK(std::abs(e.coef.at({2, 0}) - 1.0) < 1e-10);
  CHECK(std::abs(e.coef.at({0, 1}) - 3.0) < 1e-10);
  double stray = 0.0;
  for (const auto& [ab, c] : e.coef)
    if (!(ab == std::pair{2, 0} || ab == std::pair{0, 1})) stray = std::max(stray, std::abs(c));
  CHECK(stray < 1e-10);
  CHECK(!e.tail_warning);
}

TEST_CASE("antiholomorphic data projects to zero and mixed data to its mean") {
  ModelDomain ball(1, 1);
  WeightSpec w0;
  w0.r = 0.0;
  BergmanProjector proj(ball, w0, 6);
  ScalarField zbar = [](const C2& z) { return std::conj(z[0]); };
  auto e = proj.project(zbar);
  double worst = 0.0;
  for (const auto& [ab, c] : e.coef) worst = std::max(worst, std::abs(c));
  CHECK(worst < 1e-10);

  // |z1|^2 projects to the constant c_{(1,0)} / c_{(0,0)} = 1/3 (moment ratio,
  // confirmed by the closed form)
  ScalarField sq = [](const C2& z) { return cplx(std::norm(z[0])); };
  auto e2 = proj.project(sq);
  CHECK(std::abs(e2.coef.at({0, 0}) - 1.0 / 3.0) < 1e-9);
  double c10 = monomial_moment_closed_form(ball, 0, 1, 0);
  double c00 = monomial_moment_closed_form(ball, 0, 0, 0);
  CHECK(c10 / c00 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("projector is idempotent and self-adjoint") {
  ModelDomain dom(1, 2);
  WeightSpec w;
  w.r = 1.0;
  BergmanProjector proj(dom, w, 8);
  Rng rng = Rng::substream(3, "bergman_random");
  // random finite-degree data mixing holomorphic and antiholomorphic parts
  std::vector<std::pair<std::pair<int, int>, cplx>> terms;
  for (int i = 0; i < 6; ++i)
    terms.push_back({{(int)(rng.uniform() * 4), (int)(rng.uniform() * 4)},
                     cplx(rng.gaussian(), rng.gaussian())});
  ScalarField f = [terms](const C2& z) {
    cplx s = 0.0;
    for (const auto& [ab, c] : terms) {
      cplx p = c;
      for (int i = 0; i < ab.first; ++i) p *= z[0];
      for (int i = 0; i < ab.second; ++i) p *= std::conj(z[1]);
      s += p;
    }
    return s;
  };
  ScalarField g = [](const C2& z) { return z[1] + std::conj(z[0]) * z[0]; };
  auto pf = proj.project(f);
  auto pg = proj.project(g);
  ScalarField pf_field = [pf](const C2& z) { return pf.eval(z); };
  ScalarField pg_field = [pg](const C2& z) { return pg.eval(z); };
  // idempotence
  auto ppf = proj.project(pf_field);
  double diff = 0.0, scale = 0.0;
  for (const auto& [ab, c] : pf.coef) {
    cplx other = ppf.coef.count(ab) ? ppf.coef.at(ab) : cplx(0.0);
    diff = std::max(diff, std::abs(c - other));
    scale = std::max(scale, std::abs(c));
  }
  CHECK(diff <= 1e-8 * (scale + 1.0));
  // self-adjointness: <Pf, g> = <f, Pg>
  cplx a = proj.inner(pf_field, g);
  cplx b = proj.inner(f, pg_field);
  CHECK(std::abs(a - b) <= 1e-8 * (std::abs(a) + std::abs(b) + 1.0));
}

TEST_CASE("projection norm experiment passes for holomorphic peaks") {
  ModelDomain ball(1, 1);
  WeightSpec w;
  w.r = 1.0;
  ProjectionSlopeConfig cfg;
  cfg.degree = 20;
  cfg.t_grid = {0.5, 0.35, 0.25};
  cfg.norm_quad = NormQuad{4, 8, 0, 1, 8};
  auto rep = projection_norm_experiment(ball, w, 2.0, 0.0, cfg);
  CHECK(rep.rows.size() == 3);
  for (const auto& r : rep.rows) {
    CHECK(r.ratio > 0.5);
    CHECK(r.ratio < 2.0);
  }
}

TEST_CASE("non-radial weights are rejected") {
  WeightSpec w;
  w.radial = false;
  CHECK_THROWS_WITH(w.validate(), "diagonal method requires radial weight");
}
