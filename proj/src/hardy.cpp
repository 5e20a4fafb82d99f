#include "clumplab/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clumplab/error.hpp"
#include "clumplab/transform.hpp"

namespace clumplab {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
constexpr double kPi = std::numbers::pi;

// log(x_k - z) with z = x + i y, y >= 0; at y = 0 this is the limit from the upper half-plane.
cplx log_gap(double xk, double x, double y) { return std::log(cplx(xk - x, -y)); }

// int_grid L(t) / (t - z) dt for the piecewise-linear interpolant of L.
cplx cauchy_integral(const RealSignal& L, double x, double y) {
  const Grid& g = L.grid;
  const Eigen::Index n = g.count;
  const double h = g.step;
  const cplx z(x, y);
  auto beta = [&](Eigen::Index j) { return (L.values[j + 1] - L.values[j]) / h; };
  cplx acc = L.values[n - 1] - L.values[0];
  const cplx g0 = L.values[0] + beta(0) * (z - g.start);
  const cplx gn = L.values[n - 1] + beta(n - 2) * (z - g.end());
  if (g0 != 0.0) acc -= g0 * log_gap(g.start, x, y);
  if (gn != 0.0) acc += gn * log_gap(g.end(), x, y);
  double prev = beta(0);
  for (Eigen::Index k = 1; k < n - 1; ++k) {
    const double b = beta(k);
    const double kink = b - prev;
    prev = b;
    if (kink == 0.0) continue;
    const double d = g.point(k) - x;
    if (d == 0.0 && y == 0.0) continue;
    acc += kink * cplx(d, -y) * log_gap(g.point(k), x, y);
  }
  return acc;
}

void require_grid_signal(const RealSignal& s, const char* what) {
  if (s.size() != s.grid.count || s.grid.count < 2) fail(ErrorKind::invalid_input, std::string(what) + ": malformed signal");
  if (!s.values.allFinite()) fail(ErrorKind::invalid_input, std::string(what) + ": non-finite samples");
}

}  // namespace

HalfPlanePoint make_point(double x, double y) {
  if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) fail(ErrorKind::invalid_argument, "half-plane point needs y > 0");
  return {x, y};
}

double poisson_kernel(double t, const HalfPlanePoint& z) {
  if (!(z.y > 0.0)) fail(ErrorKind::invalid_argument, "poisson kernel needs y > 0");
  const double d = z.x - t;
  return z.y / (kPi * (d * d + z.y * z.y));
}

double poisson_extension(const RealSignal& mu, const HalfPlanePoint& z) {
  if (!(z.y > 0.0)) fail(ErrorKind::invalid_argument, "poisson extension needs y > 0");
  require_grid_signal(mu, "poisson_extension");
  return cauchy_integral(mu, z.x, z.y).imag() / kPi;
}

BoundaryModulus make_boundary_modulus(RealSignal log_w, double outside_left, double outside_right) {
  BoundaryModulus W;
  W.outside_left = outside_left;
  W.outside_right = outside_right;
  const bool finite = log_w.values.allFinite() && std::isfinite(outside_left) && std::isfinite(outside_right);
  W.log_w = std::move(log_w);
  if (!finite) {
    W.flag = Integrability::divergent;
    W.log_integral = -std::numeric_limits<double>::infinity();
    return W;
  }
  const Grid& g = W.log_w.grid;
  Eigen::VectorXd weighted(g.count);
  for (Eigen::Index j = 0; j < g.count; ++j) weighted[j] = W.log_w.values[j] / (1.0 + g.point(j) * g.point(j));
  W.log_integral = trapezoid(weighted, g.step) + outside_left * (std::atan(g.start) + kPi / 2) +
                   outside_right * (kPi / 2 - std::atan(g.end()));
  double offset = 0.0;
  for (Eigen::Index j = 0; j + 1 < g.count; ++j) {
    const double a = g.point(j), b = g.point(j + 1);
    const double beta = (W.log_w.values[j + 1] - W.log_w.values[j]) / g.step;
    const double alpha = W.log_w.values[j] - beta * a;
    offset += beta * (b - a) + 0.5 * alpha * std::log((1 + b * b) / (1 + a * a)) - beta * (std::atan(b) - std::atan(a));
  }
  W.kernel_offset = offset;
  return W;
}

BoundaryModulus boundary_modulus_from_weight(const RealSignal& W, double outside) {
  if (!(W.values.array() >= 0.0).all()) fail(ErrorKind::invalid_input, "modulus must be non-negative");
  RealSignal L{W.grid, W.values.array().log().matrix(), {}};
  return make_boundary_modulus(std::move(L), std::log(outside), std::log(outside));
}

cplx outer_log(const BoundaryModulus& W, double x, double y) {
  if (W.flag == Integrability::divergent) {
    fail(ErrorKind::divergent_log_integral, "log W is not Poisson-integrable");
  }
  if (y < 0.0) fail(ErrorKind::invalid_argument, "outer function lives on y >= 0");
  const Grid& g = W.log_w.grid;
  if (y == 0.0 && (x == g.start || x == g.end())) fail(ErrorKind::invalid_argument, "boundary value at a grid end");
  cplx total = cauchy_integral(W.log_w, x, y) - W.kernel_offset;
  // constant continuation: t > X_R and t < X_L
  const double XR = g.end(), XL = g.start;
  total += W.outside_right * (-log_gap(XR, x, y) + 0.5 * std::log1p(XR * XR));
  total += W.outside_left * (log_gap(XL, x, y) - 0.5 * std::log1p(XL * XL) + cplx(0.0, kPi));
  return total / cplx(0.0, kPi);
}

cplx outer_function(const BoundaryModulus& W, const HalfPlanePoint& z) {
  if (!(z.y > 0.0)) fail(ErrorKind::invalid_argument, "outer function needs y > 0");
  return std::exp(outer_log(W, z.x, z.y));
}

Signal hardy_project(const Signal& f, const Grid& zeta_grid) {
  Signal F = forward_transform(f, zeta_grid);
  const double tol = 1e-9 * zeta_grid.step;
  for (Eigen::Index j = 0; j < zeta_grid.count; ++j) {
    const double zeta = zeta_grid.point(j);
    if (zeta < -tol) {
      F.values[j] = 0.0;
    } else if (zeta <= tol && j + 2 < zeta_grid.count) {
      // the masked spectrum jumps here: keep half of its right limit, extrapolated from the next two nodes
      F.values[j] = 0.5 * (2.0 * F.values[j + 1] - F.values[j + 2]);
    }
  }
  F.tail = {};
  return inverse_transform(F, f.grid);
}

Signal hardy_project(const Signal& f) {
  const double nyquist = kPi / f.grid.step;
  const double step = 2.0 * kPi / (8.0 * f.grid.span());
  return hardy_project(f, grid_covering(-nyquist, nyquist, step));
}

cplx RationalFunction::operator()(cplx z) const {
  cplx acc = 0.0;
  for (const auto& t : terms) {
    acc += t.coefficient * std::exp(cplx(0.0, t.frequency) * z) * std::pow(z - t.pole, -t.exponent);
  }
  return acc;
}

TailModel RationalFunction::tail_at(double y) const {
  std::vector<RationalTerm> shifted;
  for (auto t : terms) {
    // e^{i nu (x + i y)} (x + i y - p)^{-n} = e^{-nu y} e^{i nu x} (x - (p - i y))^{-n}
    t.coefficient *= std::exp(-t.frequency * y);
    t.pole -= cplx(0.0, y);
    shifted.push_back(t);
  }
  return TailModel::rational(std::move(shifted));
}

cplx transform_via_extension(const std::function<cplx(cplx)>& f_ext, double y, double zeta, const ExtensionQuadrature& q) {
  if (!(y > 0.0)) fail(ErrorKind::invalid_argument, "extension height must be positive");
  const Grid& g = q.x;
  Signal s = sample<cplx>(g, [&](double x) { return f_ext(cplx(x, y)); }, q.tail ? q.tail(y) : TailModel{});
  if (!s.values.allFinite()) fail(ErrorKind::invalid_input, "extension is not finite on the line");
  const Eigen::VectorXd w = g.trapezoid_weights();
  cplx acc = 0.0;
  for (Eigen::Index j = 0; j < g.count; ++j) acc += w[j] * s.values[j] * std::polar(1.0, -g.point(j) * zeta);
  acc = acc * kInvSqrt2Pi + tail_transform(s, zeta);
  return std::exp(y * zeta) * acc;
}

GrowthCheck growth_from_spectral_weight(const Signal& f_hat, const ConcaveWeight& M, double C, const HalfPlanePoint& z) {
  if (!(z.y > 0.0 && z.y < 0.5)) fail(ErrorKind::out_of_range, "growth estimate is for 0 < y < 0.5");
  if (!(C > 0.0)) fail(ErrorKind::invalid_argument, "C must be positive");
  if (f_hat.tail.kind == TailModel::Kind::rational_power) {
    fail(ErrorKind::invalid_input, "spectral samples with a rational tail are not supported here");
  }
  const Grid& g = f_hat.grid;
  const Eigen::VectorXd w = g.trapezoid_weights();
  const cplx iz(-z.y, z.x);  // i z
  cplx value = 0.0;
  double energy = 0.0;
  for (Eigen::Index j = 0; j < g.count; ++j) {
    const double zeta = g.point(j);
    if (zeta < 0.0) continue;
    const cplx F = f_hat.values[j];
    value += w[j] * F * std::exp(iz * zeta);
    energy += w[j] * std::norm(F) * std::exp(-M.M(zeta));
  }
  if (f_hat.tail.kind == TailModel::Kind::exponential && f_hat.tail.rate_right > 0.0 && g.end() > 0.0) {
    const double r = f_hat.tail.rate_right, Z = g.end();
    const cplx FZ = f_hat.values[g.count - 1];
    value += FZ * std::exp(iz * Z) / (r - iz);
    // M is increasing, so e^{-M(Z)} bounds the weight on the tail
    energy += std::norm(FZ) * std::exp(-M.M(Z)) / (2.0 * r);
  }
  GrowthCheck out;
  out.energy = energy;
  if (energy > C * (1 + 1e-12)) fail(ErrorKind::invalid_input, "weighted spectral energy exceeds C");
  out.value = std::abs(value) * kInvSqrt2Pi;
  out.bound = std::sqrt(2.0 * C) * std::exp(M.Mstar(z.y)) / z.y;
  out.holds = out.value <= out.bound;
  return out;
}

CorollaryReport corollary_decay_check(const std::function<cplx(cplx)>& h_ext, double c, const std::vector<double>& zetas,
                                      const ExtensionQuadrature& q) {
  if (!(c > 0.0)) fail(ErrorKind::invalid_argument, "growth constant c must be positive");
  CorollaryReport r;
  r.c = c;
  r.growth_margin = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 24; ++k) {
    const double y = std::pow(10.0, -2.0 + 3.0 * k / 24.0);
    double sup = 0.0;
    for (Eigen::Index j = 0; j < q.x.count; j += 4) sup = std::max(sup, std::abs(h_ext(cplx(q.x.point(j), y))));
    const double margin = std::log(sup) - c / y;
    r.growth_margin = std::max(r.growth_margin, margin);
    if (margin > 1e-9) fail(ErrorKind::invalid_input, "sup |h(x+iy)| exceeds e^{c/y}");
  }
  const cplx i(0.0, 1.0);
  auto h_star = [&](cplx z) { return h_ext(z) / ((i + z) * (i + z)); };
  const double root = std::sqrt(kPi / 2);
  r.all_hold = true;
  for (double zeta : zetas) {
    if (!(zeta > 0.0)) fail(ErrorKind::invalid_argument, "the decay bound needs zeta > 0");
    CorollaryRow row;
    row.zeta = zeta;
    row.y = std::sqrt(c / zeta);
    row.value = std::abs(transform_via_extension(h_star, row.y, zeta, q));
    row.bound = root * std::exp(2.0 * std::sqrt(c * zeta));
    // golden-section search of y zeta + c/y over log y
    auto phase = [&](double u) { const double y = std::exp(u); return y * zeta + c / y; };
    double a = std::log(row.y) - 5.0, b = std::log(row.y) + 5.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
      const double u1 = b - gr * (b - a), u2 = a + gr * (b - a);
      (phase(u1) < phase(u2) ? b : a) = (phase(u1) < phase(u2) ? u2 : u1);
    }
    row.envelope = root * std::exp(phase(0.5 * (a + b)));
    row.holds = row.value <= row.bound * (1 + 1e-12) && row.value <= row.envelope * (1 + 1e-9);
    r.all_hold = r.all_hold && row.holds;
    r.rows.push_back(row);
  }
  return r;
}

LogIntegralLadder poisson_log_integral(const Signal& f, const std::vector<double>& cutoffs, double slope_threshold) {
  if (cutoffs.size() < 2) fail(ErrorKind::invalid_argument, "need at least two cutoffs");
  const Grid& g = f.grid;
  LogIntegralLadder out;
  out.cutoffs = cutoffs;
  Eigen::VectorXd v(g.count);
  for (double T : cutoffs) {
    for (Eigen::Index j = 0; j < g.count; ++j) {
      const double a = std::abs(f.values[j]);
      const double t = g.point(j);
      v[j] = (a > 0.0 ? std::max(std::log(a), -T) : -T) / (1.0 + t * t);
    }
    out.values.push_back(trapezoid(v, g.step));
  }
  const double mass = std::atan(g.end()) - std::atan(g.start);
  const std::size_t K = cutoffs.size();
  out.stabilized = std::abs(out.values[K - 1] - out.values[K - 2]) < slope_threshold * (cutoffs[K - 1] - cutoffs[K - 2]) * mass;
  return out;
}

}  // namespace clumplab
