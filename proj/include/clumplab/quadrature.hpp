#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace clumplab {

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename Fn>
void gk15(Fn& f, double a, double b, double& kronrod, double& error) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kKronrodWeights[7];
  double g = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[static_cast<std::size_t>(i)];
    const double s = f(c - dx) + f(c + dx);
    k += kKronrodWeights[static_cast<std::size_t>(i)] * s;
    if (i % 2 == 1) g += kGaussWeights[static_cast<std::size_t>(i / 2)] * s;
  }
  kronrod = k * h;
  error = std::abs((k - g) * h);
}

template <typename Fn>
double adaptive(Fn& f, double a, double b, double tol, int depth) {
  double value = 0.0, err = 0.0;
  gk15(f, a, b, value, err);
  if (depth <= 0 || err <= tol || !std::isfinite(value)) return value;
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature of a smooth real integrand on [a, b].
template <typename Fn>
double integrate(Fn&& f, double a, double b, double abs_tol = 1e-13, int max_depth = 40) {
  if (a == b) return 0.0;
  return detail::adaptive(f, a, b, abs_tol, max_depth);
}

}  // namespace clumplab
