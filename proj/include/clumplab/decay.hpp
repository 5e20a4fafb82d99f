#pragma once

#include <optional>
#include <vector>

#include "clumplab/intervals.hpp"
#include "clumplab/signal.hpp"

namespace clumplab {

// rho_f(x) = int_x^inf |f|, trapezoid on the grid plus the tail model beyond it.
double tail_mass(const Signal& f, double x);

struct StretchedFit {
  double c = 0.0;
  double a = 0.0;
  double r2 = 0.0;
};

struct DecaySample {
  double x = 0.0;
  double rho = 0.0;
};

struct DecayProfile {
  std::vector<DecaySample> samples;
  std::optional<StretchedFit> fitted;
};

DecayProfile decay_profile(const Signal& f, const std::vector<double>& xs);

// a = 0.05, 0.06, ..., 1.00
std::vector<double> default_a_grid();

// Least-squares fit of log rho ~ log A - c x^a for each a; keeps the a with the best r^2 and c > 0.
StretchedFit fit_stretched_decay(const DecayProfile& profile, const std::vector<double>& a_grid = default_a_grid());

// int_I max(log|f|, -T) dx on the piecewise-linear interpolant of the clamped samples.
double truncated_log_integral(const Signal& f, const Interval& I, double T);

struct ClumpOptions {
  int depth = 8;
  std::vector<double> cutoffs = {2, 4, 8, 16, 32, 64, 128, 256};
  double slope_threshold = 0.02;
  double floor = 1e-12;  // relative to max|f|
};

struct IntervalVerdict {
  Interval interval;
  std::vector<double> truncated;  // one value per cutoff
  bool convergent = false;
};

struct ClumpReport {
  IntervalCollection clumps;
  IntervalCollection support_estimate;
  IntervalCollection residual;
  double residual_measure = 0.0;
  std::vector<IntervalVerdict> diagnostics;
};

// Dyadic partition of the grid span at `depth`, anchored at the grid start. A cell I is convergent
// when the last rung of the cutoff ladder moves the truncated integral by less than
// slope_threshold * (T_K - T_{K-1}) * |I|, i.e. the clamp is active on less than that fraction of I.
ClumpReport detect_clumps(const Signal& f, const ClumpOptions& options = {});

}  // namespace clumplab
