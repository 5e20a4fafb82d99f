#pragma once

#include <complex>

namespace clumplab {

// Exponential integral E1(z) = int_z^inf e^{-t}/t dt, principal branch (cut on the negative real axis).
std::complex<double> expint_e1(std::complex<double> z);

// int_a^{a+inf} u^{-n} e^{-i kappa u} du along the horizontal ray from a, for n >= 1.
// Requires Re(a) > 0. For n == 1 and kappa == 0 returns the regularized value -log(a),
// which is what a symmetric pair of tails needs.
std::complex<double> power_ray_integral(std::complex<double> a, int n, double kappa);

}  // namespace clumplab
