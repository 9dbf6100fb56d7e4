#include "lcft/families.hpp"

#include <cmath>
#include <stdexcept>

namespace lcft {

Form01 dbar_frame_bump(const C2& center, const C2& u1, const C2& u2, double R1, double R2) {
  Form01 f;
  auto lam = [center, u1, u2](const C2& z) {
    C2 w = z - center;
    return std::array<cplx, 2>{hdot(w, u1), hdot(w, u2)};
  };
  f.potential = [lam, R1, R2](const C2& z) -> cplx {
    auto l = lam(z);
    double u = std::norm(l[0]) / (R1 * R1) + std::norm(l[1]) / (R2 * R2);
    if (u >= 1.0) return 0.0;
    double s = 1.0 - u;
    return s * s * s * s;
  };
  f.coeff = [lam, u1, u2, R1, R2](const C2& z) -> FormCoeffs {
    auto l = lam(z);
    double u = std::norm(l[0]) / (R1 * R1) + std::norm(l[1]) / (R2 * R2);
    if (u >= 1.0) return {cplx(0), cplx(0)};
    double s = 1.0 - u;
    double dphi = -4.0 * s * s * s;
    // dbar_j |lambda_k|^2 = lambda_k u_k[j]
    FormCoeffs out;
    for (int j = 0; j < 2; ++j)
      out[j] = dphi * (l[0] * u1[j] / (R1 * R1) + l[1] * u2[j] / (R2 * R2));
    return out;
  };
  f.certificate = Form01::Certificate::analytic;
  f.support = SupportBox{center, u1, u2, R1, R2};
  f.scale = 4.0 / std::min(R1, R2);
  return f;
}

Form01 dbar_round_bump(const C2& center, double radius) {
  return dbar_frame_bump(center, {cplx(1), cplx(0)}, {cplx(0), cplx(1)}, radius, radius);
}

Form01 coordinate_form(int j) {
  if (j < 0 || j > 1) throw std::invalid_argument("component index must be 0 or 1");
  Form01 f;
  f.coeff = [j](const C2&) {
    FormCoeffs out{cplx(0), cplx(0)};
    out[j] = 1.0;
    return out;
  };
  f.potential = [j](const C2& z) { return std::conj(z[j]); };
  f.certificate = Form01::Certificate::analytic;
  f.scale = 1.0;
  return f;
}

FamilyKind parse_family_kind(const std::string& s) {
  if (s == "bump") return FamilyKind::bump;
  if (s == "tangential-oscillation") return FamilyKind::tangential_oscillation;
  throw std::invalid_argument("unknown family kind: " + s);
}

std::string family_kind_name(FamilyKind k) {
  return k == FamilyKind::bump ? "bump" : "tangential-oscillation";
}

Form01 concentration_family(const ModelDomain& dom, double t, FamilyKind kind, double c0,
                            int peak_power) {
  if (t <= 0.0 || t > 0.2) throw std::invalid_argument("t must lie in (0, 0.2]");
  C2 anchor = dom.reference_boundary_point();
  ExtremalFrame fr = extremal_basis(dom, anchor, t);
  if (kind == FamilyKind::bump) {
    // center at depth 1.1 t along the inward normal; the box radii keep the
    // support inside the c0-polydisc and inside the delta in [t/2, 2t] collar
    C2 center = anchor - (1.1 * t) * fr.v1;
    double R1 = std::min(0.9 * c0 * fr.tau1, 0.45 * t);
    double R2 = 0.9 * c0 * fr.tau2;
    Form01 f = dbar_frame_bump(center, fr.v1, fr.v2, R1, R2);
    f.focus = f.support;
    return f;
  }
  // tangential kind: f = (t / (t + w))^s v2-dzbar with w(z) the normalized
  // holomorphic pairing at the anchor; Re w >= -rho(z)/|drho| > 0 on the domain
  RhoDerivatives der = dom.rho_derivatives(anchor, 1);
  double g = norm(der.grad);
  C2 a = anchor;
  C2 grad = der.grad;
  int s = peak_power;
  auto w_of = [a, grad, g](const C2& z) -> cplx {
    return 2.0 * (grad[0] * (a[0] - z[0]) + grad[1] * (a[1] - z[1])) / g;
  };
  auto peak = [w_of, t, s](const C2& z) -> cplx {
    cplx base = t / (t + w_of(z));
    cplx p = 1.0;
    for (int i = 0; i < s; ++i) p *= base;
    return p;
  };
  C2 v2 = fr.v2;
  Form01 f;
  f.coeff = [peak, v2](const C2& z) -> FormCoeffs {
    cplx g2 = peak(z);
    return {g2 * v2[0], g2 * v2[1]};
  };
  f.potential = [peak, v2, a](const C2& z) -> cplx {
    cplx lam2_bar = std::conj(hdot(z - a, v2));
    return lam2_bar * peak(z);
  };
  f.certificate = Form01::Certificate::analytic;
  f.scale = 1.0;
  // concentration region of the peak: |w| <~ t around the anchor
  f.focus = SupportBox{anchor - (1.5 * t) * fr.v1, fr.v1, fr.v2, 3.0 * t, 2.5 * fr.tau2};
  return f;
}

}  // namespace lcft
