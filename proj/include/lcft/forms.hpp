// (0,1)-forms as coefficient fields, with optional closedness certificate and
// compact-support hint used by the quadrature to localize source grids.
#pragma once

#include <functional>
#include <optional>

#include "lcft/complex2.hpp"

namespace lcft {

using ScalarField = std::function<cplx(const C2&)>;
using FormCoeffs = std::array<cplx, 2>;

// frame-aligned box |<z-center, u1>| <= R1, |<z-center, u2>| <= R2
struct SupportBox {
  C2 center{};
  C2 u1{};
  C2 u2{};
  double R1 = 0.0;
  double R2 = 0.0;

  bool contains(const C2& z, double slack = 1.0) const {
    C2 w = z - center;
    return std::abs(hdot(w, u1)) <= slack * R1 && std::abs(hdot(w, u2)) <= slack * R2;
  }
  // Euclidean distance from z to the box (0 inside)
  double distance(const C2& z) const {
    C2 w = z - center;
    double d1 = std::max(0.0, std::abs(hdot(w, u1)) - R1);
    double d2 = std::max(0.0, std::abs(hdot(w, u2)) - R2);
    return std::sqrt(d1 * d1 + d2 * d2);
  }
};

struct Form01 {
  enum class Certificate { analytic, numerically_checked, unknown };

  std::function<FormCoeffs(const C2&)> coeff;
  Certificate certificate = Certificate::unknown;
  std::optional<SupportBox> support; // set for compactly supported data
  std::optional<SupportBox> focus;   // concentration region hint for norm grids
  std::optional<ScalarField> potential; // u with dbar u = f, when known
  double scale = 1.0;                   // typical coefficient magnitude

  FormCoeffs operator()(const C2& z) const { return coeff(z); }

  static Form01 zero() {
    Form01 f;
    f.coeff = [](const C2&) { return FormCoeffs{cplx(0), cplx(0)}; };
    f.certificate = Certificate::analytic;
    f.scale = 0.0;
    return f;
  }
};

}  // namespace lcft
