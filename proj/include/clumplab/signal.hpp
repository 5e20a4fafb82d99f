#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "clumplab/grid.hpp"

namespace clumplab {

using cplx = std::complex<double>;

// One term c * e^{i nu x} * (x - pole)^{-exponent} of a rational tail.
struct RationalTerm {
  cplx coefficient{1.0, 0.0};
  cplx pole{0.0, 0.0};
  int exponent = 1;
  double frequency = 0.0;
};

// Closed-form description of a signal beyond the ends of its grid.
//   rational_power: f(x) = sum of RationalTerm for x outside the grid (both sides).
//   exponential:    the end samples continue as f(edge) * e^{-rate |x - edge|}; a zero rate
//                   switches that side off (the signal is taken to vanish there).
struct TailModel {
  enum class Kind { none, rational_power, exponential };

  Kind kind = Kind::none;
  std::vector<RationalTerm> terms;
  double rate_left = 0.0;
  double rate_right = 0.0;

  static TailModel none() { return {}; }
  static TailModel rational(std::vector<RationalTerm> terms);
  static TailModel rational(cplx coefficient, cplx pole, int exponent, double frequency = 0.0);
  static TailModel exponential(double rate) { return exponential(rate, rate); }
  static TailModel exponential(double rate_left, double rate_right);

  bool is_none() const { return kind == Kind::none; }
  cplx eval_rational(double x) const;
};

template <typename Scalar>
struct SampledSignal {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Grid grid;
  Vector values;
  TailModel tail;

  SampledSignal() = default;
  SampledSignal(const Grid& g, Vector v, TailModel t = {}) : grid(g), values(std::move(v)), tail(std::move(t)) {}

  double x(Eigen::Index j) const { return grid.point(j); }
  Eigen::Index size() const { return values.size(); }
};

using Signal = SampledSignal<cplx>;
using RealSignal = SampledSignal<double>;

template <typename Scalar, typename Fn>
SampledSignal<Scalar> sample(const Grid& grid, Fn&& fn, TailModel tail = {}) {
  typename SampledSignal<Scalar>::Vector v(grid.count);
  for (Eigen::Index j = 0; j < grid.count; ++j) v[j] = static_cast<Scalar>(fn(grid.point(j)));
  return {grid, std::move(v), std::move(tail)};
}

inline Signal to_complex(const RealSignal& r) { return {r.grid, r.values.cast<cplx>(), r.tail}; }
inline Signal to_complex(const Signal& s) { return s; }

RealSignal abs(const Signal& s);
Signal conj(const Signal& s);

// Pointwise product on a shared grid; the tail is dropped unless `tail` is given.
Signal multiply(const Signal& a, const Signal& b, TailModel tail = {});

// Linear interpolation of the samples at x (zero outside the grid).
template <typename Scalar>
Scalar interpolate(const SampledSignal<Scalar>& s, double x) {
  const double u = (x - s.grid.start) / s.grid.step;
  if (u < 0.0 || u > static_cast<double>(s.grid.count - 1)) return Scalar(0);
  auto j = static_cast<Eigen::Index>(u);
  if (j >= s.grid.count - 1) return s.values[s.grid.count - 1];
  const double t = u - static_cast<double>(j);
  return (1.0 - t) * s.values[j] + t * s.values[j + 1];
}

// Weight used by inner products and norms: lebesgue ignores `weight`.
struct WeightedNorms {
  enum class Kind { lebesgue, weighted };
  Kind kind = Kind::lebesgue;
  RealSignal weight;

  static WeightedNorms lebesgue() { return {}; }
  static WeightedNorms weighted(RealSignal w);
};

// Trapezoid value of the integral of f * conj(g) * weight.
cplx inner_product(const Signal& f, const Signal& g, const WeightedNorms& norms = {});
double l2_norm(const Signal& f, const WeightedNorms& norms = {});

// Trapezoid integral of the samples (no tail).
template <typename Derived>
typename Derived::Scalar trapezoid(const Eigen::MatrixBase<Derived>& v, double step) {
  using S = typename Derived::Scalar;
  const Eigen::Index n = v.size();
  if (n < 2) return S(0);
  return step * (v.sum() - S(0.5) * (v[0] + v[n - 1]));
}

}  // namespace clumplab
