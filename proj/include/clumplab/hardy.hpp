#pragma once

#include <functional>
#include <vector>

#include "clumplab/signal.hpp"
#include "clumplab/weight.hpp"

namespace clumplab {

struct HalfPlanePoint {
  double x = 0.0;
  double y = 1.0;
  cplx z() const { return {x, y}; }
};

// Throws invalid-argument unless y > 0.
HalfPlanePoint make_point(double x, double y);

double poisson_kernel(double t, const HalfPlanePoint& z);

// int P(t,z) mu(t) dt for the piecewise-linear interpolant of the density (zero off the grid).
// The integral against each linear piece is done in closed form, so small y is fine.
double poisson_extension(const RealSignal& mu, const HalfPlanePoint& z);

enum class Integrability { poisson_integrable, divergent };

// log W on a grid; W is taken constant (exp of outside_left / outside_right) beyond the ends.
struct BoundaryModulus {
  RealSignal log_w;
  double outside_left = 0.0;
  double outside_right = 0.0;
  Integrability flag = Integrability::poisson_integrable;
  double log_integral = 0.0;  // int log W(t) / (1+t^2) dt, grid part by trapezoid plus the constant tails
  double kernel_offset = 0.0;  // int_grid log W(t) t/(1+t^2) dt, exact on the interpolant
};

BoundaryModulus make_boundary_modulus(RealSignal log_w, double outside_left = 0.0, double outside_right = 0.0);
// From W itself; zero samples make the modulus divergent.
BoundaryModulus boundary_modulus_from_weight(const RealSignal& W, double outside = 1.0);

// log h(z) = (1/(pi i)) int (1/(t-z) - t/(1+t^2)) log W(t) dt. y = 0 gives the boundary value.
cplx outer_log(const BoundaryModulus& W, double x, double y);
cplx outer_function(const BoundaryModulus& W, const HalfPlanePoint& z);

// inverse(forward(f) 1_{zeta >= 0}) back onto f's grid. A node at zeta = 0 carries half the right limit.
Signal hardy_project(const Signal& f, const Grid& zeta_grid);
// Spectral grid up to the Nyquist frequency of f with step 2 pi / (8 span).
Signal hardy_project(const Signal& f);

// Finite sum of terms c e^{i nu z} (z - p)^{-n}, evaluable off the real line.
struct RationalFunction {
  std::vector<RationalTerm> terms;

  cplx operator()(cplx z) const;
  // Tail model of x -> f(x + i y).
  TailModel tail_at(double y) const;
};

struct ExtensionQuadrature {
  Grid x = make_grid(-200.0, 0.01, 40001);
  std::function<TailModel(double)> tail;  // tail of x -> f(x + i y), optional
};

// e^{y zeta} int f(x+iy) e^{-i x zeta} dx / sqrt(2 pi).
cplx transform_via_extension(const std::function<cplx(cplx)>& f_ext, double y, double zeta,
                             const ExtensionQuadrature& q = {});

struct GrowthCheck {
  double value = 0.0;   // |f(z)|
  double bound = 0.0;   // sqrt(2C) e^{M_*(y)} / y
  double energy = 0.0;  // int_{R+} |f^|^2 e^{-M}
  bool holds = false;
};

// f(z) = int_{R+} f^(zeta) e^{i z zeta} dzeta / sqrt(2 pi), compared with the growth bound.
// Throws invalid-input if the weighted energy exceeds C, out-of-range unless 0 < y < 0.5.
GrowthCheck growth_from_spectral_weight(const Signal& f_hat, const ConcaveWeight& M, double C, const HalfPlanePoint& z);

struct CorollaryRow {
  double zeta = 0.0;
  double y = 0.0;         // sqrt(c / zeta)
  double value = 0.0;     // |h_*^(zeta)|
  double bound = 0.0;     // sqrt(pi/2) e^{2 sqrt(c zeta)}
  double envelope = 0.0;  // sqrt(pi/2) min_y e^{y zeta + c/y}, minimized numerically
  bool holds = false;
};

struct CorollaryReport {
  double c = 0.0;
  double growth_margin = 0.0;  // max over the probe of log sup_x |h(x+iy)| - c/y
  std::vector<CorollaryRow> rows;
  bool all_hold = false;
};

// Spectrum of h(x)/(i+x)^2 from the extension of h at the optimal height for each zeta > 0.
// Throws invalid-input if sup_x |h(x+iy)| > e^{c/y} somewhere on the probe.
CorollaryReport corollary_decay_check(const std::function<cplx(cplx)>& h_ext, double c,
                                      const std::vector<double>& zetas, const ExtensionQuadrature& q = {});

struct LogIntegralLadder {
  std::vector<double> cutoffs;
  std::vector<double> values;  // int max(log|f|, -T) / (1+t^2) dt over the grid
  bool stabilized = false;
};

// Same last-pair rule as detect_clumps with |I| replaced by the Poisson mass of the grid.
LogIntegralLadder poisson_log_integral(const Signal& f, const std::vector<double>& cutoffs = {2, 4, 8, 16, 32, 64, 128, 256},
                                       double slope_threshold = 0.02);

}  // namespace clumplab
