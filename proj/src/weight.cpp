#include "clumplab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clumplab/error.hpp"

namespace clumplab {

namespace {

constexpr double kSlack = 1e-9;

double sol_derivative(double x) {
  const double L = std::log(x);
  return (0.5 / L - 1.0 / (L * L)) / std::sqrt(x);
}

}  // namespace

ConcaveWeight::ConcaveWeight(WeightFamily family, WeightParams params) : family_(family), params_(std::move(params)) {
  switch (family_) {
    case WeightFamily::sqrt:
      break;
    case WeightFamily::sqrt_over_log: {
      const double x0 = params_.splice;
      const double L0 = std::log(x0);
      // concave on [x0, inf) iff log(x0)^2 > 8
      if (!(L0 * L0 > 8.0)) {
        fail(ErrorKind::invalid_weight, "sqrt/log splice point must exceed exp(2 sqrt 2) for concavity");
      }
      lo_a_ = 1.0 / L0 + 2.0 / (L0 * L0);
      lo_b_ = -2.0 / (L0 * L0 * std::sqrt(x0));
      break;
    }
    case WeightFamily::power:
      if (!(params_.exponent > 0.0 && params_.exponent < 1.0) || !(params_.scale > 0.0)) {
        fail(ErrorKind::invalid_weight, "power weight needs exponent in (0,1) and positive scale");
      }
      break;
    case WeightFamily::tabulated: {
      const auto& xs = params_.xs;
      const auto& vs = params_.values;
      if (xs.size() < 2 || xs.size() != vs.size()) fail(ErrorKind::invalid_weight, "tabulated weight needs >= 2 matching nodes");
      if (xs[0] != 0.0 || vs[0] != 0.0) fail(ErrorKind::invalid_weight, "tabulated weight must start at M(0) = 0");
      for (std::size_t j = 1; j < xs.size(); ++j) {
        if (!(xs[j] > xs[j - 1])) fail(ErrorKind::invalid_weight, "tabulated nodes must increase");
        slopes_.push_back((vs[j] - vs[j - 1]) / (xs[j] - xs[j - 1]));
      }
      break;
    }
  }
}

std::string ConcaveWeight::name() const {
  switch (family_) {
    case WeightFamily::sqrt: return "sqrt";
    case WeightFamily::sqrt_over_log: return "sqrt-over-log";
    case WeightFamily::power: return "power";
    case WeightFamily::tabulated: return "tabulated";
  }
  return "";
}

double ConcaveWeight::M(double x) const {
  if (x <= 0.0) return 0.0;
  switch (family_) {
    case WeightFamily::sqrt:
      return std::sqrt(x);
    case WeightFamily::sqrt_over_log:
      if (x >= params_.splice) return std::sqrt(x) / std::log(x);
      return lo_a_ * std::sqrt(x) + lo_b_ * x;
    case WeightFamily::power:
      return params_.scale * std::pow(x, params_.exponent);
    case WeightFamily::tabulated: {
      const auto& xs = params_.xs;
      const auto& vs = params_.values;
      if (x >= xs.back()) {
        const double s = slopes_.back(), xn = xs.back();
        return vs.back() + 2.0 * s * xn * (std::sqrt(x / xn) - 1.0);
      }
      const auto j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
      return vs[j] + slopes_[j] * (x - xs[j]);
    }
  }
  return 0.0;
}

double ConcaveWeight::dM(double x) const {
  if (x < 0.0) fail(ErrorKind::invalid_argument, "M' is defined on [0, inf)");
  switch (family_) {
    case WeightFamily::sqrt:
      return x == 0.0 ? std::numeric_limits<double>::infinity() : 0.5 / std::sqrt(x);
    case WeightFamily::sqrt_over_log:
      if (x >= params_.splice) return sol_derivative(x);
      return x == 0.0 ? std::numeric_limits<double>::infinity() : 0.5 * lo_a_ / std::sqrt(x) + lo_b_;
    case WeightFamily::power:
      return x == 0.0 ? std::numeric_limits<double>::infinity()
                      : params_.scale * params_.exponent * std::pow(x, params_.exponent - 1.0);
    case WeightFamily::tabulated: {
      const auto& xs = params_.xs;
      if (x >= xs.back()) return slopes_.back() * std::sqrt(xs.back() / x);
      const auto j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
      return slopes_[j];
    }
  }
  return 0.0;
}

double ConcaveWeight::K(double y) const {
  if (!(y > 0.0)) fail(ErrorKind::out_of_range, "K(y) needs y > 0");
  switch (family_) {
    case WeightFamily::sqrt:
      return 0.25 / (y * y);
    case WeightFamily::sqrt_over_log: {
      const double x0 = params_.splice;
      if (y >= sol_derivative(x0)) {
        const double r = 0.5 * lo_a_ / (y - lo_b_);
        return r * r;
      }
      // M' is decreasing on [x0, inf): bisect in log x
      double lo = std::log(x0), hi = lo + 1.0;
      while (sol_derivative(std::exp(hi)) > y) hi = lo + 2.0 * (hi - lo);
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sol_derivative(std::exp(mid)) > y ? lo : hi) = mid;
      }
      return std::exp(0.5 * (lo + hi));
    }
    case WeightFamily::power: {
      const double a = params_.exponent;
      return std::pow(y / (params_.scale * a), 1.0 / (a - 1.0));
    }
    case WeightFamily::tabulated: {
      const auto& xs = params_.xs;
      if (y >= slopes_.front()) return 0.0;
      const double sn = slopes_.back();
      if (y < sn) return xs.back() * (sn / y) * (sn / y);
      for (std::size_t j = 1; j < slopes_.size(); ++j) {
        if (slopes_[j] <= y) return xs[j];
      }
      return xs.back();
    }
  }
  return 0.0;
}

std::vector<double> weight_check_grid() {
  std::vector<double> g(200);
  for (int k = 0; k < 200; ++k) g[k] = std::pow(10.0, 8.0 * k / 199.0);
  return g;
}

WeightCheckReport check_weight(const ConcaveWeight& w) {
  WeightCheckReport r;
  const auto grid = weight_check_grid();
  auto note = [&](bool& flag, const std::string& what, double x) {
    if (flag) r.failures.push_back(what + " fails at x = " + std::to_string(x));
    flag = false;
  };
  double prev_m = w.M(0.0), prev_d = std::numeric_limits<double>::infinity();
  if (prev_m != 0.0) r.failures.push_back("M(0) != 0");
  for (double x : grid) {
    const double m = w.M(x), d = w.dM(x);
    if (!(m > prev_m)) note(r.increasing, "M increasing", x);
    if (!(d <= prev_d * (1 + kSlack))) note(r.derivative_decreasing, "M' decreasing", x);
    if (!(m <= std::sqrt(x) * (1 + kSlack))) note(r.below_sqrt, "M(x) <= sqrt(x)", x);
    if (!(d <= m / x * (1 + kSlack))) note(r.derivative_below_ratio, "M'(x) <= M(x)/x", x);
    if (w.family() != WeightFamily::tabulated && d > 0.0) {
      if (!(std::abs(w.K(d) - x) <= 1e-8 * x)) note(r.inverse_consistent, "K(M'(x)) = x", x);
    }
    prev_m = m;
    prev_d = d;
  }
  if (w.family() == WeightFamily::tabulated) {
    // the check grid can step over short cells; compare every pair of adjacent slopes
    const auto& xs = w.params().xs;
    for (std::size_t j = 1; j + 1 < xs.size(); ++j) {
      if (!(w.dM(xs[j]) <= w.dM(xs[j - 1]) * (1 + kSlack))) note(r.derivative_decreasing, "M' decreasing", xs[j]);
    }
  }
  return r;
}

ConcaveWeight make_concave_weight(WeightFamily family, const WeightParams& params) {
  ConcaveWeight w(family, params);
  const auto report = check_weight(w);
  if (!report.ok()) fail(ErrorKind::invalid_weight, "weight " + w.name() + ": " + report.failures.front());
  return w;
}

WeightFamily parse_weight_family(const std::string& name) {
  if (name == "sqrt") return WeightFamily::sqrt;
  if (name == "sqrt-over-log") return WeightFamily::sqrt_over_log;
  if (name == "power") return WeightFamily::power;
  if (name == "tabulated") return WeightFamily::tabulated;
  fail(ErrorKind::invalid_argument, "unknown weight family: " + name);
}

}  // namespace clumplab
