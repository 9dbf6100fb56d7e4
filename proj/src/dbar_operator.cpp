#include "lcft/dbar_operator.hpp"

#include <cmath>

#include "lcft/rng.hpp"

namespace lcft {

namespace {

FormCoeffs dbar_once(const ScalarField& u, const C2& z, double h) {
  FormCoeffs out;
  for (int j = 0; j < 2; ++j) {
    C2 zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    cplx dx = (u(zp) - u(zm)) / (2.0 * h);
    zp = z;
    zm = z;
    zp[j] += cplx(0, h);
    zm[j] -= cplx(0, h);
    cplx dy = (u(zp) - u(zm)) / (2.0 * h);
    out[j] = 0.5 * (dx + cplx(0, 1) * dy);
  }
  return out;
}

}  // namespace

DbarValue dbar_field(const ScalarField& u, const C2& z, double step) {
  DbarValue out;
  FormCoeffs coarse = dbar_once(u, z, step);
  FormCoeffs fine = dbar_once(u, z, step / 2.0);
  out.value = fine;
  double scale = 0.0, diff = 0.0;
  for (int j = 0; j < 2; ++j) {
    scale = std::max({scale, std::abs(fine[j]), std::abs(coarse[j])});
    diff = std::max(diff, std::abs(fine[j] - coarse[j]));
  }
  out.warn = scale > 1e-14 && diff > 0.1 * scale;
  return out;
}

bool check_closedness(const ModelDomain& dom, Form01& f, int n_points, uint64_t seed,
                      double tol_factor) {
  auto pts = dom.sample_interior(n_points, seed);
  const double h = 1e-4;
  double worst = 0.0, scale = 0.0;
  for (const auto& z : pts) {
    if (dom.delta(z) < 4 * h) continue;
    ScalarField f1 = [&f](const C2& w) { return f(w)[0]; };
    ScalarField f2 = [&f](const C2& w) { return f(w)[1]; };
    cplx d12 = dbar_once(f1, z, h)[1]; // d f1 / dzbar_2
    cplx d21 = dbar_once(f2, z, h)[0]; // d f2 / dzbar_1
    worst = std::max(worst, std::abs(d12 - d21));
    auto v = f(z);
    scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
  }
  if (scale == 0.0) scale = f.scale > 0.0 ? f.scale : 1.0;
  bool ok = worst <= tol_factor * scale;
  if (ok && f.certificate == Form01::Certificate::unknown)
    f.certificate = Form01::Certificate::numerically_checked;
  return ok;
}

HomotopyResult homotopy_residual(const PreparedForm& pf, const C2& z) {
  const Form01& f = pf.form();
  if (f.certificate == Form01::Certificate::unknown)
    throw std::invalid_argument("homotopy test needs a closedness certificate");
  if (pf.domain().delta(z) < 0.05)
    throw std::invalid_argument("homotopy test point must have delta >= 0.05");
  HomotopyResult out;
  bool warn = false;
  ScalarField u = [&pf, &warn](const C2& w) {
    TKResult r = pf.apply_TK(w);
    warn = warn || r.warn;
    return r.value;
  };
  DbarValue db = dbar_field(u, z);
  PNResult pn = pf.apply_PN(z);
  FormCoeffs fv = f(z);
  double sigma = calibrated_normalization().sigma;
  double num = 0.0, den = 1.0;
  for (int j = 0; j < 2; ++j) {
    out.reconstructed[j] = sigma * db.value[j] - pn.value[j];
    num += std::norm(fv[j] - out.reconstructed[j]);
    den += std::abs(fv[j]);
  }
  out.residual_rel = std::sqrt(num) / den;
  out.warn = warn || db.warn || pn.warn;
  return out;
}

std::vector<SolveRow> solve_and_report(const PreparedForm& pf, const std::vector<C2>& pts) {
  std::vector<SolveRow> rows(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    SolveRow& r = rows[i];
    r.z = pts[i];
    TKResult tk = pf.apply_TK(pts[i]);
    r.u = tk.value;
    HomotopyResult h = homotopy_residual(pf, pts[i]);
    r.residual = h.residual_rel;
    r.warn = tk.warn || h.warn;
  });
  return rows;
}

}  // namespace lcft
