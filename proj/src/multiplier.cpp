#include "clumplab/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "clumplab/error.hpp"
#include "clumplab/parallel.hpp"
#include "clumplab/transform.hpp"

namespace clumplab {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrt2Pi = std::sqrt(2.0 * M_PI);

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

cplx phi_coefficient(int n) { return std::pow(-kI, n) * factorial(n) / kSqrt2Pi; }

// Tail mass at every node of F's grid: reverse trapezoid plus whatever the tail model adds past the end.
Eigen::VectorXd nodal_tail_mass(const Signal& F) {
  const Grid& g = F.grid;
  Eigen::VectorXd rho(g.count);
  rho[g.count - 1] = tail_mass(F, g.end());
  for (Eigen::Index j = g.count - 2; j >= 0; --j) {
    rho[j] = rho[j + 1] + 0.5 * g.step * (std::abs(F.values[j]) + std::abs(F.values[j + 1]));
  }
  return rho;
}

struct ProbeResult {
  std::vector<DecaySample> profile;
  std::optional<StretchedFit> fit;
  bool compact = false;
  bool resolved = false;
};

// Probe rho_F on [probe_start, Z], Z the last node above the floor. The floor must be crossed within
// the first 3/4 of the grid: a tail mass cut off by the grid end falls to 0 there whatever the true
// decay, and a spectrum like 1/zeta would otherwise pass as fast decay.
ProbeResult probe_decay(const Signal& F, const DecayCheckOptions& o) {
  const Grid& g = F.grid;
  const Eigen::VectorXd rho = nodal_tail_mass(F);
  const double limit = g.start + 0.75 * g.span();
  if (!(o.probe_start >= g.start) || !(o.probe_start < limit)) {
    fail(ErrorKind::invalid_argument, "decay probe must start inside the first 3/4 of the spectral grid");
  }
  if (o.probe_count < 8) fail(ErrorKind::invalid_argument, "decay probe needs at least 8 points");
  ProbeResult r;
  const auto start = static_cast<Eigen::Index>(std::ceil((o.probe_start - g.start) / g.step - 1e-9));
  const auto stop = static_cast<Eigen::Index>(std::floor((limit - g.start) / g.step + 1e-9));
  const double rho0 = rho[start];
  if (rho0 == 0.0) {
    r.compact = true;
    return r;
  }
  Eigen::Index last = start;
  for (Eigen::Index j = start; j <= stop; ++j) {
    if (rho[j] == 0.0) r.compact = true;
    if (rho[j] < o.relative_floor * rho0) {
      r.resolved = true;
      break;
    }
    last = j;
  }
  for (Eigen::Index j = last; j <= stop && !r.compact; ++j) r.compact = rho[j] == 0.0;
  if (r.compact) {
    r.resolved = true;
    return r;
  }
  if (!r.resolved) return r;
  const double z0 = g.point(start), z1 = g.point(last);
  for (int k = 0; k < o.probe_count; ++k) {
    const double z = z0 + (z1 - z0) * k / (o.probe_count - 1);
    r.profile.push_back({z, tail_mass(F, z)});
  }
  try {
    DecayProfile p;
    p.samples = r.profile;
    r.fit = fit_stretched_decay(p);
  } catch (const Error&) {
    r.fit.reset();
  }
  return r;
}

bool decays_fast(const ProbeResult& p, double a_threshold) {
  return p.compact || (p.resolved && p.fit && p.fit->a >= a_threshold);
}

}  // namespace

cplx PhiKernel::operator()(double x) const { return phi_coefficient(n) / std::pow(cplx(x, -1.0), n); }

double PhiKernel::transform(double zeta) const {
  if (zeta > 0.0) return 0.0;
  if (zeta == 0.0) return n == 1 ? 0.5 : 0.0;
  return n * std::pow(-zeta, n - 1) * std::exp(zeta);
}

Signal PhiKernel::sample(const Grid& g) const {
  return clumplab::sample<cplx>(g, [this](double x) { return (*this)(x); }, TailModel::rational(phi_coefficient(n), kI, n));
}

double PhiKernel::l1_norm() const {
  if (n == 1) return INFINITY;
  // int (1+x^2)^{-n/2} dx = sqrt(pi) Gamma((n-1)/2) / Gamma(n/2)
  const double base = std::sqrt(M_PI) * std::tgamma(0.5 * (n - 1)) / std::tgamma(0.5 * n);
  return factorial(n) / kSqrt2Pi * base;
}

PhiKernel phi_kernel(int n) {
  if (n < 1) fail(ErrorKind::invalid_argument, "kernel order n must be >= 1");
  return PhiKernel{n};
}

cplx TamingOuter::operator()(const HalfPlanePoint& z) const {
  if (!(z.y > 0.0)) fail(ErrorKind::invalid_argument, "outer function needs y > 0");
  return trivial ? cplx(1.0) : outer_function(modulus, z);
}

cplx TamingOuter::boundary(double x) const {
  if (trivial) return 1.0;
  const Grid& g = modulus.log_w.grid;
  // log W vanishes at and next to the modulus ends, so a tiny height gives the same value
  const double tol = 1e-9 * g.step;
  const double y = std::abs(x - g.start) < tol || std::abs(x - g.end()) < tol ? 1e-12 : 0.0;
  return std::exp(outer_log(modulus, x, y));
}

TamingOuter taming_outer(const Signal& f) {
  const Grid& g = f.grid;
  Eigen::Index first = -1, last = -1;
  for (Eigen::Index j = 0; j < g.count; ++j) {
    const double a = std::abs(f.values[j]);
    if (!std::isfinite(a)) fail(ErrorKind::invalid_input, "f has non-finite samples");
    if (a > 1.0) {
      if (first < 0) first = j;
      last = j;
    }
  }
  TamingOuter h;
  if (first < 0) {
    h.trivial = true;
    return h;
  }
  // two zero nodes each side; they may lie past f's grid, where W = 1 anyway
  const Eigen::Index lo = first - 2, hi = last + 2;
  const Grid sub = make_grid(g.point(0) + static_cast<double>(lo) * g.step, g.step, hi - lo + 1);
  RealSignal log_w(sub, RealSignal::Vector::Zero(sub.count));
  for (Eigen::Index j = first; j <= last; ++j) log_w.values[j - lo] = -std::max(0.0, std::log(std::abs(f.values[j])));
  h.modulus = make_boundary_modulus(std::move(log_w), 0.0, 0.0);
  return h;
}

TemperedCheck tempered_check(const TemperedInput& input) {
  if (input.n < 1) fail(ErrorKind::invalid_argument, "growth order n must be >= 1");
  const Grid& g = input.f.grid;
  const double c = 0.5 * (g.start + g.end()), half = 0.5 * g.span();
  TemperedCheck r;
  for (int k = 6; k >= 0; --k) r.radii.push_back(std::ldexp(half, -k));
  for (double R : r.radii) {
    double s = 0.0;
    for (Eigen::Index j = 0; j + 1 < g.count; ++j) {
      const double a = g.point(j), b = g.point(j + 1);
      if (a < c - R - 1e-12 || b > c + R + 1e-12) continue;
      auto v = [&](Eigen::Index i) { return std::abs(input.f.values[i]) / std::pow(1.0 + std::abs(g.point(i)), input.n); };
      s += 0.5 * g.step * (v(j) + v(j + 1));
    }
    r.partial.push_back(s);
  }
  const std::size_t m = r.partial.size();
  const double last = r.partial[m - 1] - r.partial[m - 2], prev = r.partial[m - 2] - r.partial[m - 3];
  r.convergent = last <= prev || last <= 1e-12 * r.partial.back();
  return r;
}

MultiplierBundle build_multiplier(const TemperedInput& input) {
  const TemperedCheck tc = tempered_check(input);
  if (!tc.convergent) fail(ErrorKind::invalid_input, "int |f| / (1+|x|)^n does not settle on the grid ladder");
  const Signal& f = input.f;
  const Grid& g = f.grid;

  MultiplierBundle b;
  b.n = input.n;
  b.phi = phi_kernel(input.n);
  b.h = taming_outer(f);
  b.trivial = f.values.cwiseAbs().maxCoeff() == 0.0;
  b.phi_samples = b.phi.sample(g);
  b.h_boundary = Signal(g, Signal::Vector::Ones(g.count));
  if (!b.h.trivial) {
    parallel_for(static_cast<std::size_t>(g.count), [&](std::size_t j) {
      b.h_boundary.values[static_cast<Eigen::Index>(j)] = b.h.boundary(g.point(static_cast<Eigen::Index>(j)));
    });
  }
  b.h_star = Signal(g, Signal::Vector(g.count));
  b.m = Signal(g, Signal::Vector(g.count));
  b.mf = Signal(g, Signal::Vector(g.count));
  b.sup_phi = factorial(input.n) / kSqrt2Pi;
  b.max_envelope_excess = -INFINITY;
  b.m_nonzero = true;
  for (Eigen::Index j = 0; j < g.count; ++j) {
    const cplx xi = cplx(g.point(j), 1.0);
    b.h_star.values[j] = b.h_boundary.values[j] / (xi * xi);
    b.m.values[j] = b.phi_samples.values[j] * std::conj(b.h_star.values[j]);
    b.mf.values[j] = b.m.values[j] * f.values[j];
    const double am = std::abs(b.m.values[j]);
    b.max_m = std::max(b.max_m, am);
    b.max_envelope_excess = std::max(b.max_envelope_excess, am - std::abs(b.phi_samples.values[j]) / std::norm(xi));
    if (!(am > 0.0)) b.m_nonzero = false;
  }
  b.max_mf = b.mf.values.cwiseAbs().maxCoeff();
  b.l1_mf = g.trapezoid_weights().dot(b.mf.values.cwiseAbs());

  const ClumpReport lm = detect_clumps(b.m);
  b.log_m_neutral = std::all_of(lm.diagnostics.begin(), lm.diagnostics.end(), [](const auto& d) { return d.convergent; });
  if (b.trivial) b.note = "f vanishes on the grid; m f = 0";
  if (input.n == 1) b.note += std::string(b.note.empty() ? "" : "; ") + "n = 1: Phi alone is not integrable";
  return b;
}

MultiplierDecayReport multiplier_decay_check(const TemperedInput& input, const MultiplierBundle& bundle, const Grid& zeta_grid,
                                             const DecayCheckOptions& options) {
  if (zeta_grid.start != 0.0) fail(ErrorKind::invalid_argument, "the spectral grid must start at 0");
  MultiplierDecayReport r;
  r.a_threshold = options.a_threshold;

  const Signal fhat = input.fhat ? *input.fhat : forward_transform(input.f, zeta_grid);
  const ProbeResult in = probe_decay(fhat, options);
  r.input_profile = in.profile;
  r.input_fit = in.fit;
  r.input_compact = in.compact;
  r.input_resolved = in.resolved;
  if (!decays_fast(in, options.a_threshold)) {
    const std::string got = !in.resolved ? "tail mass not resolved on the spectral grid"
                            : in.fit     ? "fitted exponent " + std::to_string(in.fit->a)
                                         : "no stretched-exponential fit";
    fail(ErrorKind::hypothesis_not_met, "spectral tail of f is not O(e^{-c zeta^a}) with a >= " +
                                            std::to_string(options.a_threshold) + " (" + got + ")");
  }

  const ProbeResult out = probe_decay(forward_transform(bundle.mf, zeta_grid), options);
  r.output_profile = out.profile;
  r.output_fit = out.fit;
  r.output_compact = out.compact;
  r.output_resolved = out.resolved;
  r.passes = decays_fast(out, options.a_threshold);
  return r;
}

PipelineReport distributional_clump_pipeline(const TemperedInput& input, const Grid& zeta_grid,
                                             const DecayCheckOptions& decay, const ClumpOptions& clump) {
  PipelineReport r;
  r.bundle = build_multiplier(input);
  if (r.bundle.trivial) {
    r.note = "f = 0: no clumps and no residual";
    return r;
  }
  r.decay = multiplier_decay_check(input, r.bundle, zeta_grid, decay);
  r.clumps = detect_clumps(r.bundle.mf, clump);
  r.note = r.bundle.log_m_neutral ? "log|m| stabilizes on every cell; clumps of m f are clumps of f"
                                  : "log|m| fails to stabilize somewhere; clumps of m f may differ from those of f";
  return r;
}

}  // namespace clumplab
