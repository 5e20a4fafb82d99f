#pragma once

// Fixtures shared by the unit tests and the acceptance run.

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "clumplab/hardy.hpp"
#include "clumplab/intervals.hpp"
#include "clumplab/oscillation.hpp"

namespace fixtures {

using clumplab::cplx;

// Disjoint random cells, each holding a few pieces shifted to zero net and scaled to variation <= C.
inline clumplab::SignedDensityMeasure random_balanced(std::mt19937_64& rng, double C) {
  using clumplab::DensityPiece;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DensityPiece> pieces;
  std::vector<clumplab::Interval> cells;
  double x = -3.0 + u(rng);
  while (x < 3.0) {
    const double len = 0.05 + 0.5 * u(rng);
    const clumplab::Interval cell{x, x + len};
    const int k = 2 + static_cast<int>(5 * u(rng));
    std::vector<DensityPiece> local;
    double net = 0.0;
    for (int j = 0; j < k; ++j) {
      const DensityPiece p{j == 0 ? cell.lo : x + len * j / k, j + 1 == k ? cell.hi : x + len * (j + 1) / k, u(rng) * 4 - 2};
      net += (p.hi - p.lo) * p.value;
      local.push_back(p);
    }
    double var = 0.0;
    for (auto& p : local) {
      p.value -= net / len;
      var += (p.hi - p.lo) * std::abs(p.value);
    }
    const double scale = var > 0 ? C * (0.2 + 0.8 * u(rng)) / var : 0.0;
    for (auto& p : local) {
      p.value *= scale;
      pieces.push_back(p);
    }
    cells.push_back(cell);
    x += len + 0.3 * u(rng);
  }
  return clumplab::make_density(std::move(pieces), cells);
}

// H^1 and H^2 test functions: analytic in the upper half-plane, rational with exponential factors.
inline std::vector<std::pair<std::string, clumplab::RationalFunction>> hardy_signals() {
  const cplx I{0.0, 1.0};
  return {
      {"1/(x+i)^2", clumplab::RationalFunction{{{1.0, -I, 2, 0.0}}}},
      {"1/((x+i)(x+2i))", clumplab::RationalFunction{{{-I, -I, 1, 0.0}, {I, -2.0 * I, 1, 0.0}}}},
      {"e^{ix}/(x+i)^2", clumplab::RationalFunction{{{1.0, -I, 2, 1.0}}}},
  };
}

// L_n = 8^-n
inline std::vector<double> geometric_lengths(int depth) {
  std::vector<double> L;
  for (int n = 1; n <= depth; ++n) L.push_back(std::pow(8.0, -n));
  return L;
}

// [0,1] minus a centred gap of relative length gamma in every dyadic cell of levels 1..levels.
inline clumplab::IntervalCollection fat_cantor(int levels, double gamma) {
  std::vector<clumplab::Interval> gaps;
  for (int n = 1; n <= levels; ++n) {
    const double cell = std::ldexp(1.0, -n);
    for (long j = 0; j < (1L << n); ++j) {
      const double c = (static_cast<double>(j) + 0.5) * cell;
      gaps.push_back({c - 0.5 * gamma * cell, c + 0.5 * gamma * cell});
    }
  }
  return clumplab::IntervalCollection{{0.0, 1.0}}.subtract(clumplab::IntervalCollection(gaps));
}

}  // namespace fixtures
