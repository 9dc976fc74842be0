#pragma once

// Overflow-safe complex hyperbolic functions for arguments with Re z >= 0.
//
// Everything is expressed through exp(-2z), whose modulus is at most one on
// the right half-plane, and through a complex expm1 so that 1 - exp(-2z)
// keeps full relative precision for small |z|.

#include <complex>

namespace mcloop::hyperbolic {

using cplx = std::complex<double>;

// exp(z) - 1 without cancellation near z = 0.
inline cplx expm1(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double half_sin = std::sin(0.5 * y);
  // e^x cos y - 1 = expm1(x) cos y - 2 sin^2(y/2)
  const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

// Returns the argument reflected into Re z >= 0 together with the sign the
// odd functions pick up from the reflection.
inline cplx right_half(cplx z, double& odd_sign) {
  if (z.real() < 0.0) {
    odd_sign = -1.0;
    return -z;
  }
  odd_sign = 1.0;
  return z;
}

inline cplx tanh(cplx z) {
  double sign = 1.0;
  const cplx w = right_half(z, sign);
  const cplx e2 = std::exp(-2.0 * w);
  return sign * (-expm1(-2.0 * w)) / (1.0 + e2);
}

inline cplx coth(cplx z) {
  double sign = 1.0;
  const cplx w = right_half(z, sign);
  const cplx e2 = std::exp(-2.0 * w);
  return sign * (1.0 + e2) / (-expm1(-2.0 * w));
}

// 1 / cosh z
inline cplx sech(cplx z) {
  double sign = 1.0;
  const cplx w = right_half(z, sign);
  return 2.0 * std::exp(-w) / (1.0 + std::exp(-2.0 * w));
}

// 1 / sinh z
inline cplx csch(cplx z) {
  double sign = 1.0;
  const cplx w = right_half(z, sign);
  return sign * 2.0 * std::exp(-w) / (-expm1(-2.0 * w));
}

}  // namespace mcloop::hyperbolic
