#include "clumplab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "clumplab/error.hpp"
#include "clumplab/parallel.hpp"
#include "clumplab/quadrature.hpp"

namespace clumplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ladder_slope(const std::vector<double>& inc) {
  const std::size_t n = inc.size();
  const std::size_t k0 = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (std::size_t k = k0; k < n; ++k) {
    const double lx = std::log(static_cast<double>(k + 1));
    const double ly = std::log(std::max(inc[k], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    m += 1;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void finish_ladder(IntegrabilityLadder& ladder) {
  double run = 0.0;
  for (double d : ladder.increments) ladder.partial.push_back(run += d);
  ladder.slope = ladder_slope(ladder.increments);
  ladder.convergent = ladder.slope < -1.25;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double segment_distance(const BoundarySegment& s, double x, double y, double* px, double* py) {
  const double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((x - s.x0) * dx + (y - s.y0) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double qx = s.x0 + t * dx, qy = s.y0 + t * dy;
  if (px) *px = qx;
  if (py) *py = qy;
  return std::hypot(x - qx, y - qy);
}

struct Absorption {
  double x = 0.0, y = 0.0;
  BoundaryTag tag = BoundaryTag::e_base;
  bool capped = false;
};

Absorption walk(const TentDomain& dom, const HalfPlanePoint& z, std::uint64_t seed, std::size_t index,
                const WalkOptions& opt) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  double x = z.x, y = z.y;
  Absorption out;
  for (std::size_t step = 0;; ++step) {
    std::size_t seg = 0;
    const double d = dom.distance(x, y, &seg);
    if (d < opt.eps || step >= opt.max_steps) {
      out.capped = d >= opt.eps;
      segment_distance(dom.boundary[seg], x, y, &out.x, &out.y);
      out.tag = dom.boundary[seg].tag;
      return out;
    }
    const double theta = 2.0 * M_PI * (static_cast<double>(rng() >> 11) * 0x1p-53);
    x += d * std::cos(theta);
    y += d * std::sin(theta);
  }
}

void check_start(const TentDomain& dom, const HalfPlanePoint& z, const WalkOptions& opt) {
  if (!dom.contains(z.x, z.y)) fail(ErrorKind::invalid_argument, "starting point lies outside the tent domain");
  if (opt.n_paths == 0 || !(opt.eps > 0.0)) fail(ErrorKind::invalid_argument, "need n_paths > 0 and eps > 0");
}

std::vector<Absorption> run_walks(const TentDomain& dom, const HalfPlanePoint& z, const WalkOptions& opt) {
  check_start(dom, z, opt);
  std::vector<Absorption> hits(opt.n_paths);
  parallel_for(opt.n_paths, [&](std::size_t i) { hits[i] = walk(dom, z, opt.seed, i, opt); });
  return hits;
}

template <typename Fn>
BoundaryIntegral average(const std::vector<Absorption>& paths, Fn&& g) {
  BoundaryIntegral r;
  r.n_paths = paths.size();
  double sum = 0.0, sq = 0.0;
  for (const auto& a : paths) {
    const double v = g(a);
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(r.n_paths);
  r.mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sq - n * r.mean * r.mean) / (n - 1)) : 0.0;
  r.std_err = std::sqrt(var / n);
  return r;
}

}  // namespace

LaplaceTail laplace_tail_integral(const ConcaveWeight& M, double y) {
  if (!(y > 0.0 && y < 1.0)) fail(ErrorKind::out_of_range, "the Laplace-tail bound is for y in (0, 1)");
  LaplaceTail r;
  const double K = M.K(y);
  const double Ms = M.M(K);
  auto f = [&](double x) { return std::exp(M.M(x) - 2.0 * y * x); };
  // beyond X the majorant exp(M_* - x y) contributes exp(M_* - yX)/y < exp(-40 - yK)/y
  const double X = K + (Ms + 40.0) / y;
  const double K2 = M.K(2.0 * y);  // integrand peak
  const double tol = 1e-15 * f(K2) * X;
  r.split = K;
  r.value = integrate(f, 0.0, K, tol) + integrate(f, K, X, tol) + std::exp(Ms - y * X) / y;
  r.bound = 2.0 * std::exp(Ms) / (y * y);
  r.holds = r.value <= r.bound;
  return r;
}

double derivative_energy_tail(const ConcaveWeight& M, double x) {
  if (!(x > 0.0)) fail(ErrorKind::out_of_range, "energy tail needs x > 0");
  switch (M.family()) {
    case WeightFamily::sqrt:
    case WeightFamily::tabulated:  // continued by c sqrt(x) + d
      return kInf;
    case WeightFamily::power: {
      const double a = M.params().exponent, s = M.params().scale;
      if (a >= 0.5) return kInf;
      return s * s * a * a * std::pow(x, 2.0 * a - 1.0) / (1.0 - 2.0 * a);
    }
    case WeightFamily::sqrt_over_log: {
      const double x0 = M.params().splice;
      const double U = std::log(std::max(x, x0));
      // with u = log t, M'(t)^2 dt = (1/(4u^2) - 1/u^3 + 1/u^4) du
      double tail = 1.0 / (4.0 * U) - 1.0 / (2.0 * U * U) + 1.0 / (3.0 * U * U * U);
      if (x < x0) {
        auto g = [&](double u) {
          const double t = std::exp(u), d = M.dM(t);
          return d * d * t;
        };
        tail += integrate(g, std::log(x), std::log(x0), 1e-15);
      }
      return tail;
    }
  }
  return kInf;
}

DualIntegrabilityReport dual_integrability_check(const ConcaveWeight& M, double delta, double X) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::out_of_range, "delta must lie in (0, 1)");
  if (!(X >= 256.0)) fail(ErrorKind::out_of_range, "X must be at least 2^8");
  const int n = static_cast<int>(std::floor(std::log2(X)));
  DualIntegrabilityReport r;
  auto mstar = [&](double u) {
    const double y = std::exp(u);
    return M.Mstar(y) * y;
  };
  auto energy = [&](double u) {
    const double t = std::exp(u), d = M.dM(t);
    return d * d * t;
  };
  for (int k = 1; k <= n; ++k) {
    const double e_hi = delta * std::ldexp(1.0, -(k - 1)), e_lo = delta * std::ldexp(1.0, -k);
    r.dual.points.push_back(e_lo);
    r.dual.increments.push_back(integrate(mstar, std::log(e_lo), std::log(e_hi), 1e-15));
    const double x_lo = std::ldexp(1.0, k - 1), x_hi = std::ldexp(1.0, k);
    r.derivative.points.push_back(x_hi);
    r.derivative.increments.push_back(integrate(energy, std::log(x_lo), std::log(x_hi), 1e-15));
  }
  finish_ladder(r.dual);
  finish_ladder(r.derivative);
  r.agree = r.dual.convergent == r.derivative.convergent;
  r.convergent = r.agree && r.dual.convergent;
  return r;
}

double clump_budget(const ConcaveWeight& M, double C, double y) {
  if (!(y > 0.0)) fail(ErrorKind::out_of_range, "H(y) needs y > 0");
  if (!(C > 0.0)) fail(ErrorKind::invalid_argument, "C must be positive");
  return 0.5 * std::log(2.0 * C) + M.Mstar(y) - std::log(y);
}

double clump_budget_integral(const ConcaveWeight& M, double C, double L) {
  if (!(L > 0.0)) fail(ErrorKind::out_of_range, "integral of H needs L > 0");
  const double K = M.K(L);
  const double mstar_part = L * M.M(K) + derivative_energy_tail(M, K);
  return 0.5 * std::log(2.0 * C) * L + mstar_part - (L * std::log(L) - L);
}

CantorSpec build_cantor_set(double A, const std::vector<double>& lengths) {
  if (!(A > 0.0)) fail(ErrorKind::invalid_argument, "A must be positive");
  CantorSpec s;
  s.A = A;
  s.L = lengths;
  s.depth = static_cast<int>(lengths.size());
  s.budget_sum = s.clump_sum = std::numeric_limits<double>::quiet_NaN();
  double removed = 0.0;
  for (std::size_t n = 0; n < lengths.size(); ++n) {
    if (!(lengths[n] > 0.0)) fail(ErrorKind::invalid_argument, "gap lengths must be positive");
    s.length_sum += std::ldexp(lengths[n], static_cast<int>(n) + 1);
    removed += std::ldexp(lengths[n], static_cast<int>(n));
  }
  if (!(s.length_sum <= 0.5 * A)) fail(ErrorKind::invalid_argument, "gap lengths violate sum 2^n L_n <= A/2");

  std::vector<Interval> cur = {{0.0, A}};
  s.levels.emplace_back(cur);
  for (double L : lengths) {
    std::vector<Interval> next;
    next.reserve(2 * cur.size());
    for (const auto& iv : cur) {
      if (!(L < iv.length())) fail(ErrorKind::invalid_argument, "gap does not fit inside its interval");
      const double m = 0.5 * (iv.lo + iv.hi);
      const Interval gap{m - 0.5 * L, m + 0.5 * L};
      if (!(std::abs(gap.length() - L) <= 1e-4 * L)) {
        fail(ErrorKind::out_of_range, "gap of length " + std::to_string(L) + " is not resolvable in double precision");
      }
      next.push_back({iv.lo, gap.lo});
      next.push_back({gap.hi, iv.hi});
      s.gaps.push_back(gap);
    }
    cur = std::move(next);
    s.levels.emplace_back(cur);
  }
  std::sort(s.gaps.begin(), s.gaps.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  s.E = s.levels.back();
  s.measure = A - removed;
  return s;
}

CantorSpec build_cantor_set(double A, const ConcaveWeight& M, double C, int depth, double margin) {
  if (depth < 0 || depth > 20) fail(ErrorKind::invalid_argument, "depth must lie in [0, 20]");
  if (!(margin > 0.0)) fail(ErrorKind::invalid_argument, "margin must be positive");
  if (!(C > 0.0)) fail(ErrorKind::invalid_argument, "C must be positive");
  if (!dual_integrability_check(M).convergent) {
    fail(ErrorKind::invalid_weight, "weight " + M.name() + " has divergent int M_*; H is not integrable at 0");
  }
  auto G = [&](double L) { return clump_budget_integral(M, C, L); };
  // below this K(L) overflows for the slowly varying families
  const double floor = 1e-150;
  std::vector<double> lengths;
  for (int n = 1; n <= depth; ++n) {
    const double geo = A * std::pow(8.0, -n);
    const double target = margin * std::pow(4.0, -n);
    double L = geo;
    if (G(geo) > target) {
      if (G(floor) > target) {
        fail(ErrorKind::out_of_range, "budget cap for stage " + std::to_string(n) + " lies below 1e-150 for weight " +
                                          M.name() + "; lower the depth or raise the margin");
      }
      double lo = std::log(floor), hi = std::log(geo);
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (G(std::exp(mid)) <= target ? lo : hi) = mid;
      }
      L = std::exp(lo);
    }
    if (!(clump_budget(M, C, L) > 0.0)) fail(ErrorKind::invalid_argument, "H is not positive at the chosen gap length");
    lengths.push_back(L);
  }
  CantorSpec s = build_cantor_set(A, lengths);
  record_clump_budget(s, M, C);
  return s;
}

void record_clump_budget(CantorSpec& spec, const ConcaveWeight& M, double C) {
  spec.budget_sum = spec.clump_sum = 0.0;
  for (int n = 1; n <= spec.depth; ++n) {
    const double g = clump_budget_integral(M, C, spec.L[static_cast<std::size_t>(n - 1)]);
    spec.budget_sum += std::ldexp(g, n);
    spec.clump_sum += std::ldexp(g, n - 1);
  }
}

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::tent_side: return "tent-side";
    case BoundaryTag::top: return "top";
    case BoundaryTag::lateral: return "lateral";
    case BoundaryTag::e_base: return "E-base";
  }
  return "";
}

double BoundarySegment::length() const { return std::hypot(x1 - x0, y1 - y0); }

double Tent::roof(double x) const {
  if (x <= base.lo || x >= base.hi) return 0.0;
  return std::min(x - base.lo, base.hi - x);
}

bool TentDomain::contains(double x, double y) const {
  if (!(x > 0.0 && x < width && y > 0.0 && y < height)) return false;
  auto it = std::upper_bound(tents.begin(), tents.end(), x, [](double v, const Tent& t) { return v < t.base.lo; });
  if (it == tents.begin()) return true;
  return y > std::prev(it)->roof(x);
}

double TentDomain::distance(double x, double y, std::size_t* nearest) const {
  double best = kInf;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const double d = segment_distance(boundary[i], x, y, nullptr, nullptr);
    if (d < best) {
      best = d;
      arg = i;
    }
  }
  if (nearest) *nearest = arg;
  return best;
}

TentDomain build_tent_domain(const CantorSpec& spec, double height) {
  TentDomain d;
  d.E = spec.E;
  d.width = spec.A;
  d.height = height;
  double tallest = 0.0;
  for (const auto& g : spec.gaps) {
    d.tents.push_back({g, 0.5 * g.length()});
    tallest = std::max(tallest, 0.5 * g.length());
  }
  if (!(height > tallest)) fail(ErrorKind::invalid_argument, "rectangle height must exceed the tallest tent");

  auto seg = [&](double x0, double y0, double x1, double y1, BoundaryTag tag) {
    d.boundary.push_back({x0, y0, x1, y1, tag});
  };
  const auto& pieces = spec.E.intervals();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    seg(pieces[i].lo, 0.0, pieces[i].hi, 0.0, BoundaryTag::e_base);
    if (i < d.tents.size()) {
      const auto& t = d.tents[i];
      const double m = 0.5 * (t.base.lo + t.base.hi);
      seg(t.base.lo, 0.0, m, t.apex, BoundaryTag::tent_side);
      seg(m, t.apex, t.base.hi, 0.0, BoundaryTag::tent_side);
    }
  }
  seg(spec.A, 0.0, spec.A, height, BoundaryTag::lateral);
  seg(spec.A, height, 0.0, height, BoundaryTag::top);
  seg(0.0, height, 0.0, 0.0, BoundaryTag::lateral);

  double twice = 0.0;
  for (const auto& s : d.boundary) twice += s.x0 * s.y1 - s.x1 * s.y0;
  d.area = 0.5 * twice;
  return d;
}

void write_boundary_csv(const TentDomain& domain, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::invalid_argument, "cannot open " + path);
  out.precision(17);
  out << "x0,y0,x1,y1,tag\n";
  for (const auto& s : domain.boundary) {
    out << s.x0 << ',' << s.y0 << ',' << s.x1 << ',' << s.y1 << ',' << to_string(s.tag) << '\n';
  }
}

HarmonicTarget HarmonicTarget::whole_boundary() {
  return tagged({BoundaryTag::tent_side, BoundaryTag::top, BoundaryTag::lateral, BoundaryTag::e_base});
}

HarmonicTarget HarmonicTarget::tagged(std::vector<BoundaryTag> tags) {
  HarmonicTarget t;
  t.tags = std::move(tags);
  return t;
}

HarmonicTarget HarmonicTarget::base_subset(const IntervalCollection& B) {
  HarmonicTarget t = tagged({BoundaryTag::e_base});
  t.windowed = true;
  t.window = B;
  return t;
}

HarmonicTarget HarmonicTarget::tent_side_window(double lo, double hi) {
  HarmonicTarget t = tagged({BoundaryTag::tent_side});
  t.windowed = true;
  t.window = IntervalCollection{{lo, hi}};
  return t;
}

bool HarmonicTarget::hit(double x, BoundaryTag tag) const {
  if (std::find(tags.begin(), tags.end(), tag) == tags.end()) return false;
  return !windowed || window.contains(x);
}

HarmonicEstimate harmonic_measure_mc(const TentDomain& domain, const HalfPlanePoint& z, const HarmonicTarget& target,
                                     const WalkOptions& options) {
  const auto paths = run_walks(domain, z, options);
  HarmonicEstimate r;
  r.n_paths = paths.size();
  for (const auto& a : paths) {
    if (target.hit(a.x, a.tag)) ++r.hits;
    if (a.capped) ++r.capped;
  }
  const double n = static_cast<double>(r.n_paths);
  r.estimate = static_cast<double>(r.hits) / n;
  r.std_err = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
  return r;
}

BoundaryIntegral boundary_integral_mc(const TentDomain& domain, const HalfPlanePoint& z,
                                      const std::function<double(double, double, BoundaryTag)>& g,
                                      const WalkOptions& options) {
  const auto paths = run_walks(domain, z, options);
  return average(paths, [&](const Absorption& a) { return g(a.x, a.y, a.tag); });
}

KhrushchevReport khrushchev_budget_sum(const TentDomain& domain, const HalfPlanePoint& z, const ConcaveWeight& M,
                                       double C, const WalkOptions& options) {
  KhrushchevReport r;
  const auto paths = run_walks(domain, z, options);
  // tent-side corners sit at y = 0 and carry no mass
  auto on_upper = [](const Absorption& a) { return a.tag != BoundaryTag::e_base && a.y > 0.0; };
  r.total = average(paths, [&](const Absorption& a) { return on_upper(a) ? clump_budget(M, C, a.y) : 0.0; });
  r.tents = average(paths, [&](const Absorption& a) {
    return on_upper(a) && a.tag == BoundaryTag::tent_side ? clump_budget(M, C, a.y) : 0.0;
  });
  double budget = 0.0;
  for (const auto& t : domain.tents) budget += clump_budget_integral(M, C, t.base.length());
  r.majorant = 16.0 / z.y * budget;
  r.holds = r.tents.mean <= r.majorant + 3.0 * r.tents.std_err;
  return r;
}

}  // namespace clumplab
