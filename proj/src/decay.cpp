#include "clumplab/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "clumplab/error.hpp"
#include "clumplab/quadrature.hpp"

namespace clumplab {

namespace {

// Running trapezoid integral of piecewise-linear nodal data, queryable at any point of the span.
class NodalIntegral {
 public:
  NodalIntegral(const Grid& g, Eigen::VectorXd v) : grid_(g), v_(std::move(v)), prefix_(g.count) {
    prefix_[0] = 0.0;
    for (Eigen::Index j = 1; j < g.count; ++j) prefix_[j] = prefix_[j - 1] + 0.5 * g.step * (v_[j - 1] + v_[j]);
  }

  // int_{start}^{x} of the interpolant, x clamped to the span.
  double upto(double x) const {
    const double u = std::clamp((x - grid_.start) / grid_.step, 0.0, static_cast<double>(grid_.count - 1));
    auto j = static_cast<Eigen::Index>(u);
    if (j >= grid_.count - 1) return prefix_[grid_.count - 1];
    const double t = u - static_cast<double>(j);
    const double vx = (1.0 - t) * v_[j] + t * v_[j + 1];
    return prefix_[j] + 0.5 * t * grid_.step * (v_[j] + vx);
  }

  double between(double lo, double hi) const { return upto(hi) - upto(lo); }

 private:
  Grid grid_;
  Eigen::VectorXd v_;
  Eigen::VectorXd prefix_;
};

// int_x^{end} of the interpolant, accumulated from the right so small tails keep their relative precision.
class SuffixIntegral {
 public:
  SuffixIntegral(const Grid& g, Eigen::VectorXd v) : grid_(g), v_(std::move(v)), suffix_(g.count) {
    suffix_[g.count - 1] = 0.0;
    for (Eigen::Index j = g.count - 2; j >= 0; --j) suffix_[j] = suffix_[j + 1] + 0.5 * g.step * (v_[j] + v_[j + 1]);
  }

  double from(double x) const {
    const double u = std::clamp((x - grid_.start) / grid_.step, 0.0, static_cast<double>(grid_.count - 1));
    auto j = static_cast<Eigen::Index>(u);
    if (j >= grid_.count - 1) return 0.0;
    const double t = u - static_cast<double>(j);
    const double vx = (1.0 - t) * v_[j] + t * v_[j + 1];
    return suffix_[j + 1] + 0.5 * (1.0 - t) * grid_.step * (vx + v_[j + 1]);
  }

 private:
  Grid grid_;
  Eigen::VectorXd v_;
  Eigen::VectorXd suffix_;
};

// int_x^inf |rational tail|, x at or right of the grid end.
double rational_tail_mass(const TailModel& tail, double x) {
  std::map<double, cplx> leading;
  for (const auto& t : tail.terms) {
    if (t.exponent == 1) leading[t.frequency] += t.coefficient;
  }
  for (const auto& [freq, c] : leading) {
    if (std::abs(c) > 1e-14) return std::numeric_limits<double>::infinity();
  }
  const double scale = std::max(1.0, std::abs(x));
  auto integrand = [&](double v) {
    const double t = x + scale * (1.0 / v - 1.0);
    return std::abs(tail.eval_rational(t)) * scale / (v * v);
  };
  return integrate(integrand, 0.0, 1.0, 1e-15);
}

double right_tail_mass(const Signal& f, double x) {
  const double xr = f.grid.end();
  switch (f.tail.kind) {
    case TailModel::Kind::none:
      return 0.0;
    case TailModel::Kind::exponential: {
      const double r = f.tail.rate_right;
      if (r <= 0.0) return 0.0;
      return std::abs(f.values[f.grid.count - 1]) * std::exp(-r * std::max(0.0, x - xr)) / r;
    }
    case TailModel::Kind::rational_power:
      return rational_tail_mass(f.tail, std::max(x, xr));
  }
  return 0.0;
}

Eigen::VectorXd clamped_log(const Signal& f, double T) {
  Eigen::VectorXd v(f.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    const double a = std::abs(f.values[j]);
    v[j] = a > 0.0 ? std::max(std::log(a), -T) : -T;
  }
  return v;
}

}  // namespace

double tail_mass(const Signal& f, double x) {
  if (x < f.grid.start - 1e-12 * std::max(1.0, std::abs(f.grid.start))) {
    fail(ErrorKind::invalid_argument, "tail_mass: x lies left of the grid start");
  }
  return SuffixIntegral(f.grid, f.values.cwiseAbs()).from(x) + right_tail_mass(f, x);
}

DecayProfile decay_profile(const Signal& f, const std::vector<double>& xs) {
  const SuffixIntegral integral(f.grid, f.values.cwiseAbs());
  DecayProfile p;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted) {
    if (x < f.grid.start) fail(ErrorKind::invalid_argument, "decay_profile: x lies left of the grid start");
    p.samples.push_back({x, integral.from(x) + right_tail_mass(f, x)});
  }
  return p;
}

std::vector<double> default_a_grid() {
  std::vector<double> a;
  for (int k = 5; k <= 100; ++k) a.push_back(k / 100.0);
  return a;
}

StretchedFit fit_stretched_decay(const DecayProfile& profile, const std::vector<double>& a_grid) {
  std::vector<double> xs, ys;
  for (const auto& s : profile.samples) {
    if (s.rho > 0.0 && std::isfinite(s.rho)) {
      xs.push_back(s.x);
      ys.push_back(std::log(s.rho));
    }
  }
  if (xs.empty()) fail(ErrorKind::degenerate_input, "fit_stretched_decay: every tail mass is zero");
  if (xs.size() < 8) fail(ErrorKind::invalid_argument, "fit_stretched_decay: need at least 8 positive samples");

  const auto n = static_cast<double>(xs.size());
  double ybar = 0.0;
  for (double y : ys) ybar += y;
  ybar /= n;
  double syy = 0.0;
  for (double y : ys) syy += (y - ybar) * (y - ybar);
  if (syy == 0.0) fail(ErrorKind::degenerate_input, "fit_stretched_decay: tail mass is constant");

  std::optional<StretchedFit> best;
  for (double a : a_grid) {
    double tbar = 0.0;
    std::vector<double> ts(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) tbar += (ts[i] = std::pow(xs[i], a));
    tbar /= n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      stt += (ts[i] - tbar) * (ts[i] - tbar);
      sty += (ts[i] - tbar) * (ys[i] - ybar);
    }
    if (stt == 0.0) continue;
    const double slope = sty / stt;
    const double r2 = (sty * sty) / (stt * syy);
    if (-slope > 0.0 && (!best || r2 > best->r2)) best = StretchedFit{-slope, a, r2};
  }
  if (!best) fail(ErrorKind::degenerate_input, "fit_stretched_decay: no candidate exponent gives decay");
  return *best;
}

double truncated_log_integral(const Signal& f, const Interval& I, double T) {
  if (!(T > 0.0)) fail(ErrorKind::invalid_argument, "truncation level must be positive");
  const double tol = 1e-9 * f.grid.step;
  if (I.lo < f.grid.start - tol || I.hi > f.grid.end() + tol || !(I.hi >= I.lo)) {
    fail(ErrorKind::invalid_argument, "truncated_log_integral: interval must lie inside the grid");
  }
  return NodalIntegral(f.grid, clamped_log(f, T)).between(I.lo, I.hi);
}

ClumpReport detect_clumps(const Signal& f, const ClumpOptions& options) {
  if (options.depth < 0 || options.depth > 14) fail(ErrorKind::invalid_argument, "clump depth must be in [0, 14]");
  if (options.cutoffs.size() < 2) fail(ErrorKind::invalid_argument, "need at least two cutoffs");
  for (std::size_t k = 1; k < options.cutoffs.size(); ++k) {
    if (!(options.cutoffs[k] > options.cutoffs[k - 1])) fail(ErrorKind::invalid_argument, "cutoffs must increase");
  }

  std::vector<NodalIntegral> ladder;
  for (double T : options.cutoffs) ladder.emplace_back(f.grid, clamped_log(f, T));

  ClumpReport report;
  const std::size_t cells = std::size_t{1} << options.depth;
  const double width = f.grid.span() / static_cast<double>(cells);
  const double dT = options.cutoffs.back() - options.cutoffs[options.cutoffs.size() - 2];
  std::vector<Interval> convergent;
  for (std::size_t c = 0; c < cells; ++c) {
    IntervalVerdict v;
    v.interval = {f.grid.start + static_cast<double>(c) * width,
                  c + 1 == cells ? f.grid.end() : f.grid.start + static_cast<double>(c + 1) * width};
    for (const auto& L : ladder) v.truncated.push_back(L.between(v.interval.lo, v.interval.hi));
    const double last_move = std::abs(v.truncated.back() - v.truncated[v.truncated.size() - 2]);
    v.convergent = last_move < options.slope_threshold * dT * v.interval.length();
    if (v.convergent) convergent.push_back(v.interval);
    report.diagnostics.push_back(std::move(v));
  }
  report.clumps = IntervalCollection(std::move(convergent));

  const double peak = f.values.cwiseAbs().maxCoeff();
  std::vector<Interval> runs;
  if (peak > 0.0) {
    const double level = options.floor * peak;
    const double h = f.grid.step;
    Eigen::Index j = 0;
    while (j < f.size()) {
      if (std::abs(f.values[j]) > level) {
        Eigen::Index k = j;
        while (k + 1 < f.size() && std::abs(f.values[k + 1]) > level) ++k;
        runs.push_back({std::max(f.grid.start, f.x(j) - 0.5 * h), std::min(f.grid.end(), f.x(k) + 0.5 * h)});
        j = k + 1;
      } else {
        ++j;
      }
    }
  }
  report.support_estimate = IntervalCollection(std::move(runs));
  report.residual = report.support_estimate.subtract(report.clumps);
  report.residual_measure = report.residual.measure();
  return report;
}

}  // namespace clumplab
