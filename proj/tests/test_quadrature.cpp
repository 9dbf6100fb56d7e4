#include "doctest.h"

#include <cmath>

#include "lcft/dbar_operator.hpp"
#include "lcft/families.hpp"
#include "lcft/quadrature.hpp"
#include "lcft/rng.hpp"

using namespace lcft;

TEST_CASE("pairwise sum is exact on structured data") {
  std::vector<double> v(1000);
  for (size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (i + 1.0);
  double s = pairwise_sum(std::span<const double>(v));
  double ref = 0.0;
  for (size_t i = v.size(); i-- > 0;) ref += v[i];
  CHECK(s == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("source grid integrates the volume") {
  // sum of weights over the global grid approximates |Omega|
  ModelDomain ball(1, 1);
  QuadratureSpec quad;
  quad.base_n = 16;
  auto nodes = build_source_nodes(ball, Form01::zero(), quad);
  double vol = 0.0;
  for (const auto& nd : nodes) vol += nd.w;
  CHECK(vol == doctest::Approx(4.934802200544679).epsilon(0.01)); // pi^2/2
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec q;
  q.base_n = 4;
  CHECK_THROWS(q.validate());
  q = QuadratureSpec{};
  q.shell_levels = 2;
  CHECK_THROWS(q.validate());
  CHECK_NOTHROW(QuadratureSpec{}.validate());
}

TEST_CASE("apply_TK is linear and vanishes on zero data") {
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  QuadratureSpec quad;
  quad.base_n = 10;
  quad.shell_levels = 4;
  C2 z{cplx(0.2), cplx(0.1)};
  CHECK(std::abs(apply_TK(ball, p, Form01::zero(), z, quad).value) == 0.0);

  // linearity on a fixed grid: alpha f + beta g against separate evaluations
  Form01 f = dbar_round_bump({cplx(0.3), cplx(0.0)}, 0.4);
  Form01 g = dbar_round_bump({cplx(0.1), cplx(0.2)}, 0.35);
  cplx alpha(2.0, 1.0), beta(-0.5, 0.3);
  Form01 combo;
  combo.coeff = [=](const C2& w) {
    auto a = f(w);
    auto b = g(w);
    return FormCoeffs{alpha * a[0] + beta * b[0], alpha * a[1] + beta * b[1]};
  };
  combo.certificate = Form01::Certificate::analytic;
  // same global grid for all three (no support box on combo)
  Form01 f_glob = f;
  f_glob.support.reset();
  Form01 g_glob = g;
  g_glob.support.reset();
  cplx vf = apply_TK(ball, p, f_glob, z, quad).value;
  cplx vg = apply_TK(ball, p, g_glob, z, quad).value;
  cplx vc = apply_TK(ball, p, combo, z, quad).value;
  CHECK(std::abs(vc - (alpha * vf + beta * vg)) <= 1e-10 * (std::abs(vc) + 1.0));
}

TEST_CASE("apply_TK matches a dense Monte Carlo oracle") {
  // independent oracle: plain MC integration of the same wedge pairing
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  Form01 f = dbar_round_bump({cplx(0.3), cplx(0.2)}, 0.4);
  C2 z{cplx(0.3), cplx(0.2)}; // inside the support, singular case
  QuadratureSpec quad;
  quad.base_n = 20;
  quad.shell_angular = 12;
  cplx v = apply_TK(ball, p, f, z, quad).value;

  Rng rng = Rng::substream(99, "mc_oracle");
  const long M = 10000000;
  double vol = 4.934802200544679;
  std::vector<cplx> acc;
  acc.reserve(200000);
  cplx chunk = 0.0;
  long used = 0;
  for (long i = 0; i < M; ++i) {
    C2 zeta;
    for (int k = 0; k < 2; ++k) {
      double r = std::sqrt(rng.uniform());
      double th = rng.uniform(0.0, 6.283185307179586);
      zeta[k] = r * cplx(std::cos(th), std::sin(th));
    }
    if (ball.rho(zeta) >= -1e-12) continue;
    ++used;
    if (norm2(zeta - z) < 1e-8) continue;
    auto fv = f(zeta);
    if (fv[0] == 0.0 && fv[1] == 0.0) continue;
    K1Value k1 = kernel_K1(ball, p, z, ZetaData::at(ball, zeta));
    chunk += pair_K1(fv[0], fv[1], k1);
    if ((i & 1023) == 0) {
      acc.push_back(chunk);
      chunk = 0.0;
    }
  }
  acc.push_back(chunk);
  cplx mc = pairwise_sum(std::span<const cplx>(acc)) * (vol / used);
  CHECK(std::abs(v - mc) <= 0.02 * std::abs(mc));
}

TEST_CASE("deterministic results regardless of worker count") {
  ModelDomain dom(1, 2);
  KernelParams p = KernelParams::defaults(dom);
  QuadratureSpec quad;
  quad.base_n = 10;
  quad.shell_levels = 4;
  Form01 f = dbar_round_bump({cplx(0.2), cplx(0.1)}, 0.3);
  C2 z{cplx(0.15), cplx(0.05)};
  setenv("LCFT_THREADS", "1", 1);
  cplx v1 = apply_TK(dom, p, f, z, quad).value;
  setenv("LCFT_THREADS", "4", 1);
  cplx v4 = apply_TK(dom, p, f, z, quad).value;
  unsetenv("LCFT_THREADS");
  CHECK(v1.real() == v4.real());
  CHECK(v1.imag() == v4.imag());
}

TEST_CASE("kernel L1 mass near the diagonal is Cauchy in the radius") {
  // nested quadratures of int_{|zeta-z|<r} |K1| over shrinking r
  ModelDomain ball(1, 1);
  KernelParams p = KernelParams::defaults(ball);
  C2 z{cplx(0.3), cplx(0.1)};
  auto mass = [&](double r, int n) {
    // spherical grid around z
    double total = 0.0;
    int n_a = n / 2, n_b = n, n_g = n, n_r = 2 * n;
    for (int ir = 0; ir < n_r; ++ir) {
      double rr = r * (ir + 0.5) / n_r;
      for (int ia = 0; ia < n_a; ++ia) {
        double al = 1.5707963267948966 * (ia + 0.5) / n_a;
        double ca = std::cos(al), sa = std::sin(al);
        for (int ib = 0; ib < n_b; ++ib) {
          double be = 6.283185307179586 * (ib + 0.5) / n_b;
          for (int ig = 0; ig < n_g; ++ig) {
            double ga = 6.283185307179586 * (ig + 0.5) / n_g;
            C2 zeta = {z[0] + rr * ca * cplx(std::cos(be), std::sin(be)),
                       z[1] + rr * sa * cplx(std::cos(ga), std::sin(ga))};
            if (ball.rho(zeta) >= -1e-12) continue;
            double w = (r / n_r) * ca * sa * (1.5707963267948966 / n_a) *
                       (6.283185307179586 / n_b) * (6.283185307179586 / n_g) * rr * rr * rr;
            total += kernel_K1(ball, p, z, ZetaData::at(ball, zeta)).abs() * w;
          }
        }
      }
    }
    return total;
  };
  double m1 = mass(0.2, 10);
  double m2 = mass(0.1, 10);
  double m3 = mass(0.05, 10);
  // decreasing tail mass and Cauchy differences shrinking at integrable rate
  CHECK(m2 < m1);
  CHECK(m3 < m2);
  CHECK((m2 - m3) < 0.7 * (m1 - m2));
  // the same mass under refinement moves by less than 1%
  double m2f = mass(0.1, 14);
  CHECK(std::abs(m2f - m2) <= 0.01 * m2f);
}
