#include "doctest.h"

#include <cmath>

#include "lcft/estimates.hpp"
#include "lcft/rng.hpp"

using namespace lcft;

TEST_CASE("rational arithmetic and parsing") {
  CHECK(parse_rational("0.75") == Rational(3, 4));
  CHECK(parse_rational("-1") == Rational(-1));
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
  CHECK((Rational(1, 2) / Rational(2, 3)) == Rational(3, 4));
  CHECK(Rational(2, 4) == Rational(1, 2));
}

TEST_CASE("exponent calculator reproduces the three regimes") {
  // m=2, n=2, gamma=gamma'=0, p=2 -> q = 3
  auto r = exponent_q(2, 2, Rational(2), Rational(0), Rational(0));
  CHECK(r.regime == EstimateRegime::lq);
  CHECK(*r.q == Rational(3));
  // p = 1: q = 6/5
  r = exponent_q(2, 2, Rational(1), Rational(0), Rational(0));
  CHECK(*r.q == Rational(6, 5));
  // p = m(gamma+n)+2 = 6 -> BMO
  r = exponent_q(2, 2, Rational(6), Rational(0), Rational(0));
  CHECK(r.regime == EstimateRegime::bmo);
  // p = infinity -> Lipschitz 1/2
  r = exponent_q(2, 2, std::nullopt, Rational(0), Rational(0));
  CHECK(r.regime == EstimateRegime::lipschitz);
  CHECK(*r.alpha == Rational(1, 2));
  // p = 12 > 6: alpha = (1/2)(1 - 6/12) = 1/4
  r = exponent_q(2, 2, Rational(12), Rational(0), Rational(0));
  CHECK(*r.alpha == Rational(1, 4));
  // weight transfer: (2, 1, 3/4): q = 30/13
  r = exponent_q(2, 2, Rational(2), Rational(1), Rational(3, 4));
  CHECK(*r.q == Rational(30, 13));

  CHECK_THROWS(exponent_q(2, 2, Rational(2), Rational(0), Rational(1)));
  CHECK_THROWS(exponent_q(2, 2, Rational(2), Rational(1), Rational(1, 4)));
  CHECK_THROWS(exponent_q(2, 2, Rational(1, 2), Rational(0), Rational(0)));
}

TEST_CASE("regime boundary identities over a rational grid") {
  // 1/q -> 0 exactly as p -> critical with gamma' = gamma, and the sharper
  // remark bound (m(gamma'+n)+2)/(1-m(gamma-gamma')) > m(gamma+n)+2 when
  // gamma' < gamma
  int checked = 0;
  for (int m : {2, 4}) {
    for (int gn = 0; gn <= 4; ++gn) {
      Rational gamma(gn, 2);
      Rational critical = Rational(m) * (gamma + Rational(2)) + Rational(2);
      auto r = exponent_q(m, 2, critical, gamma, gamma);
      CHECK(r.regime == EstimateRegime::bmo);
      // approach from below: q is finite and grows
      auto below = exponent_q(m, 2, critical - Rational(1, 100), gamma, gamma);
      CHECK(below.regime == EstimateRegime::lq);
      CHECK(*below.q > Rational(100));
      for (int dn = 1; dn <= 3; ++dn) {
        Rational gp = gamma - Rational(dn, 4 * m); // gamma' in (gamma - 1/m, gamma)
        if (gp < Rational(-1)) continue;
        auto rr = exponent_q(m, 2, Rational(1), gamma, gp);
        REQUIRE(rr.case1_bound.has_value());
        CHECK(*rr.case1_bound > rr.critical_p);
        ++checked;
      }
      // at gamma' = gamma - 1/m the bound degenerates to infinity
      if (!(gamma - Rational(1, m) < Rational(-1))) {
        auto edge = exponent_q(m, 2, Rational(1), gamma, gamma - Rational(1, m));
        CHECK(!edge.case1_bound.has_value());
        CHECK_THROWS(exponent_q(m, 2, Rational(1), gamma, gamma - Rational(1, m) - Rational(1, 100)));
      }
    }
  }
  CHECK(checked >= 25);
}

TEST_CASE("fitted slope on synthetic data") {
  std::vector<ReportRow> rows;
  for (double t : {0.1, 0.05, 0.025, 0.0125}) {
    ReportRow r;
    r.level = t;
    r.ratio = 3.0 * std::pow(t, 0.7);
    rows.push_back(r);
  }
  CHECK(fitted_slope(rows) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("schur test accepts a constant kernel and rejects a non-integrable one") {
  ModelDomain ball(1, 1);
  KernelSampler ones = [](const C2&, const C2&) { return 1.0; };
  auto rep = schur_test(ball, ones, 1.0, {0.1, 0.05, 0.025}, 0.0, 8, 10, 3);
  CHECK(rep.pass);

  KernelSampler bad = [](const C2& z, const C2& zeta) {
    double r2 = norm2(zeta - z);
    return r2 < 1e-24 ? 0.0 : 1.0 / (r2 * r2);
  };
  auto rep2 = schur_test(ball, bad, 1.0, {0.1}, 0.0, 8, 10, 3);
  CHECK(!rep2.pass);
  CHECK(rep2.growth > 1.15);
}

TEST_CASE("dyadic integral lemma ratios stay bounded") {
  ModelDomain ball(1, 1);
  C2 z{cplx(0.9998), cplx(0)};
  for (double mu : {0.0, 0.5}) {
    auto rep = dyadic_integral_check_mu(ball, z, mu, 3, 8, 0.1, 10);
    CHECK(rep.rows.size() == 6);
    CHECK(rep.spread <= 10.0);
    CHECK(rep.pass);
  }
  auto repa = dyadic_integral_check_alpha(ball, z, 0.5, 3, 8, 0.1, 8);
  CHECK(repa.spread <= 10.0);
  // 1/alpha scaling on the reach-normalized means within a factor 2
  double m025 = 0.0, m1 = 0.0;
  auto ra = dyadic_integral_check_alpha(ball, z, 0.25, 3, 8, 0.1, 8);
  auto rb = dyadic_integral_check_alpha(ball, z, 1.0, 3, 8, 0.1, 8);
  CHECK(ra.spread <= 10.0);
  CHECK(rb.spread <= 10.0);
  for (const auto& r : ra.rows) m025 += r.q / ra.rows.size();
  for (const auto& r : rb.rows) m1 += r.q / rb.rows.size();
  CHECK(m025 / m1 <= 2.0);
  CHECK(m1 / m025 <= 2.0);
}
