#include "clumplab/special.hpp"

#include <cmath>
#include <limits>

#include "clumplab/error.hpp"

namespace clumplab {

namespace {

using cplx = std::complex<double>;
constexpr double kEulerGamma = 0.57721566490153286061;

cplx e1_series(cplx z) {
  cplx sum = 0.0, term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -z / static_cast<double>(k);
    const cplx add = term / static_cast<double>(k);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(z) - sum;
}

// e^{z} E1(z) by the continued fraction 1/(z+1- 1/(z+3- 4/(z+5- ...))), modified Lentz.
cplx e1_scaled_cf(cplx z) {
  const double tiny = 1e-300;
  cplx b = z + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 20000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

cplx e1_scaled(cplx z) {
  if (std::abs(z) < 1.5) return std::exp(z) * e1_series(z);
  return e1_scaled_cf(z);
}

}  // namespace

cplx expint_e1(cplx z) {
  if (z == cplx(0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
  if (std::abs(z) < 1.5) return e1_series(z);
  return std::exp(-z) * e1_scaled_cf(z);
}

// Returns e^{i kappa a} * int_a^{a+inf} u^{-n} e^{-i kappa u} du, which stays O(1/|kappa a|)
// even when e^{-i kappa a} itself would overflow.
cplx power_ray_integral(cplx a, int n, double kappa) {
  if (n < 1) fail(ErrorKind::invalid_argument, "tail exponent must be >= 1");
  if (!(a.real() > 0.0)) fail(ErrorKind::invalid_argument, "tail ray must start right of the pole");
  if (kappa == 0.0) {
    if (n == 1) return -std::log(a);
    return std::pow(a, 1 - n) / static_cast<double>(n - 1);
  }
  const cplx ik(0.0, kappa);
  cplx r = e1_scaled(ik * a);
  for (int m = 2; m <= n; ++m) {
    r = std::pow(a, 1 - m) / static_cast<double>(m - 1) - ik / static_cast<double>(m - 1) * r;
  }
  return r;
}

}  // namespace clumplab
