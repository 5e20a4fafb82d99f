#pragma once

// Shared test signals.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "clumplab/signal.hpp"

namespace corpus {

using clumplab::cplx;

inline const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
inline const cplx I{0.0, 1.0};

inline cplx psi_i(double x) { return I * kInvSqrt2Pi / (x + I); }
inline cplx psi_i_conj(double x) { return -I * kInvSqrt2Pi / (x - I); }

inline clumplab::TailModel psi_i_tail() { return clumplab::TailModel::rational(I * kInvSqrt2Pi, -I, 1); }
inline clumplab::TailModel psi_i_conj_tail() { return clumplab::TailModel::rational(-I * kInvSqrt2Pi, I, 1); }

// Default domain for 1/x kernels.
inline clumplab::Grid cauchy_grid() { return clumplab::make_grid(-200.0, 0.01, 40001); }

struct NamedSignal {
  std::string name;
  std::function<cplx(double)> f;
};

// Rapidly decaying signals whose spectra sit well inside [-20, 20].
inline std::vector<NamedSignal> schwartz_corpus() {
  using std::exp;
  return {
      {"gauss", [](double x) { return cplx(exp(-x * x / 2)); }},
      {"shifted-modulated-gauss", [](double x) { return exp(-(x - 1) * (x - 1) / 2) * std::polar(1.0, 2 * x); }},
      {"wide-gauss", [](double x) { return cplx(exp(-x * x / 8)); }},
      {"narrow-gauss", [](double x) { return cplx(exp(-2 * x * x)); }},
      {"hermite-1", [](double x) { return cplx(x * exp(-x * x / 2)); }},
      {"hermite-2", [](double x) { return cplx((x * x - 1) * exp(-x * x / 2)); }},
      {"sech", [](double x) { return cplx(1.0 / std::cosh(x)); }},
      {"sech2-cos", [](double x) { return cplx(std::cos(3 * x) / (std::cosh(x) * std::cosh(x))); }},
      {"gauss-mixture", [](double x) { return exp(-(x + 3) * (x + 3)) + 0.5 * exp(-2 * (x - 2) * (x - 2)) * I; }},
      {"wide-gauss-cos", [](double x) { return cplx(exp(-x * x / 18) * std::cos(x)); }},
  };
}

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
  auto p = [](double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; };
  return p(t) / (p(t) + p(1 - t));
}

inline clumplab::Grid corpus_grid() { return clumplab::make_grid(-20.0, 0.02, 2001); }

}  // namespace corpus
