// Points and vectors of C^2, with the Hermitian pairing used throughout.
#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace lcft {

using cplx = std::complex<double>;
using C2 = std::array<cplx, 2>;

inline C2 operator+(const C2& a, const C2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline C2 operator-(const C2& a, const C2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline C2 operator*(cplx s, const C2& a) { return {s * a[0], s * a[1]}; }
inline C2 operator*(double s, const C2& a) { return {s * a[0], s * a[1]}; }

// Hermitian inner product <a,b> = sum_i a_i conj(b_i).
inline cplx hdot(const C2& a, const C2& b) {
  return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]);
}

inline double norm2(const C2& a) { return std::norm(a[0]) + std::norm(a[1]); }
inline double norm(const C2& a) { return std::sqrt(norm2(a)); }

inline C2 conj(const C2& a) { return {std::conj(a[0]), std::conj(a[1])}; }

inline C2 normalized(const C2& a) {
  double n = norm(a);
  return {a[0] / n, a[1] / n};
}

inline bool finite(const C2& a) {
  return std::isfinite(a[0].real()) && std::isfinite(a[0].imag()) &&
         std::isfinite(a[1].real()) && std::isfinite(a[1].imag());
}

}  // namespace lcft
