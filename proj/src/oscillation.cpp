#include "clumplab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "clumplab/error.hpp"

namespace clumplab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDmax = 1099511627776.0;  // 2^40

// At y = 0 and t = x the phase is infinite; the midpoint branch keeps the modulus at the mean of the two sides.
cplx log_gap(double t, double x, double y) {
  if (y == 0.0 && t == x) return {0.0, -0.5 * kPi};
  return std::log(cplx(t - x, -y));
}

double clamp_value(double w, double p) {
  if (w >= 1.0) return 0.0;
  if (w <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(w) / p;
}

// Pieces of (I \ F) cap grid span, one per grid cell, valued min(g_j, g_{j+1}).
std::vector<DensityPiece> free_pieces(const Interval& I, const ResidualContext& ctx) {
  const Grid& g = ctx.w.grid;
  const double lo = std::max(I.lo, g.start), hi = std::min(I.hi, g.end());
  std::vector<DensityPiece> out;
  if (!(hi > lo)) return out;
  const IntervalCollection free = IntervalCollection{{lo, hi}}.subtract(ctx.F);
  for (const auto& part : free.intervals()) {
    auto j = static_cast<Eigen::Index>(std::floor((part.lo - g.start) / g.step));
    j = std::clamp<Eigen::Index>(j, 0, g.count - 2);
    for (; j + 1 < g.count && g.point(j) < part.hi; ++j) {
      const double a = std::max(part.lo, g.point(j)), b = std::min(part.hi, g.point(j + 1));
      if (!(b > a)) continue;
      const double v = std::min(clamp_value(ctx.w.values[j], ctx.p), clamp_value(ctx.w.values[j + 1], ctx.p));
      out.push_back({a, b, v});
    }
  }
  return out;
}

double clamped_integral(const std::vector<DensityPiece>& pieces, double D) {
  double acc = 0.0;
  for (const auto& p : pieces) acc += (p.hi - p.lo) * std::min(p.value, D);
  return acc;
}

CarveResult sweep(const std::vector<DensityPiece>& pieces, double c, double D) {
  CarveResult r;
  r.D = D;
  r.available = clamped_integral(pieces, D);
  if (!(r.available > c)) fail(ErrorKind::cannot_carve, "clamped log+ integral does not exceed c");
  std::vector<Interval> parts;
  double acc = 0.0;
  for (const auto& p : pieces) {
    const double v = std::min(p.value, D);
    if (v <= 0.0) continue;
    const double mass = (p.hi - p.lo) * v;
    if (acc + mass >= c) {
      const double cut = p.lo + (c - acc) / v;
      r.pieces.push_back({p.lo, cut, v});
      parts.push_back({p.lo, cut});
      acc += (cut - p.lo) * v;
      break;
    }
    r.pieces.push_back({p.lo, p.hi, v});
    parts.push_back({p.lo, p.hi});
    acc += mass;
  }
  r.E = IntervalCollection(std::move(parts));
  r.integral = acc;
  return r;
}

}  // namespace

void validate_context(const ResidualContext& ctx) {
  const Grid& g = ctx.w.grid;
  if (ctx.w.size() != g.count || g.count < 2) fail(ErrorKind::invalid_input, "context: malformed w");
  if (!(ctx.p > 2.0)) fail(ErrorKind::invalid_input, "context: p must exceed 2");
  if (!(ctx.delta > 0.0)) fail(ErrorKind::invalid_input, "context: delta must be positive");
  for (Eigen::Index j = 0; j < g.count; ++j) {
    const double w = ctx.w.values[j];
    if (!(w >= 0.0 && w <= 1.0)) fail(ErrorKind::invalid_input, "context: w must lie in [0, 1]");
    if (ctx.F.contains(g.point(j)) && !(w > ctx.delta)) fail(ErrorKind::invalid_input, "context: w <= delta on F");
  }
  if (!ctx.F.empty()) {
    const Interval h = ctx.F.hull();
    if (!std::isfinite(h.lo) || !std::isfinite(h.hi)) fail(ErrorKind::invalid_input, "context: F must be bounded");
  }
}

ResidualContext cantor_residual_context(int levels, double gamma, double p, int grid_log2) {
  if (levels < 1 || !(gamma > 0.0 && gamma < 1.0 / 3.0) || grid_log2 < 4 || grid_log2 > 22) {
    fail(ErrorKind::invalid_argument, "cantor context: bad parameters");
  }
  std::vector<Interval> gaps;
  for (int n = 1; n <= levels; ++n) {
    const double cell = std::ldexp(1.0, -n);
    for (long j = 0; j < (1L << n); ++j) {
      const double c = (static_cast<double>(j) + 0.5) * cell;
      gaps.push_back({c - 0.5 * gamma * cell, c + 0.5 * gamma * cell});
    }
  }
  ResidualContext ctx;
  ctx.F = IntervalCollection{{0.0, 1.0}}.subtract(IntervalCollection(gaps));
  ctx.p = p;
  ctx.delta = 0.5;
  const Grid g = make_grid(0.0, std::ldexp(1.0, -grid_log2), (Eigen::Index{1} << grid_log2) + 1);
  const auto& parts = ctx.F.intervals();
  ctx.w = sample<double>(g, [&](double x) {
    // distance to F through the sorted pieces
    auto it = std::upper_bound(parts.begin(), parts.end(), x, [](double v, const Interval& I) { return v < I.lo; });
    double d = std::numeric_limits<double>::infinity();
    if (it != parts.end()) d = std::min(d, it->lo - x);
    if (it != parts.begin()) {
      const Interval& prev = *(it - 1);
      if (x <= prev.hi) return 1.0;
      d = std::min(d, x - prev.hi);
    }
    return std::exp(-1.0 / d);
  });
  return ctx;
}

ResidualContext interval_residual_context(double right, double p, double lo, double hi, double step) {
  if (!(right > 0.0) || !(lo < 0.0) || !(hi > right)) fail(ErrorKind::invalid_argument, "interval context: bad parameters");
  ResidualContext ctx;
  ctx.F = IntervalCollection{{0.0, right}};
  ctx.p = p;
  ctx.delta = 0.5;
  ctx.w = sample<double>(grid_covering(lo, hi, step), [&](double x) { return x > right ? std::exp(-1.0 / (x - right)) : 1.0; });
  return ctx;
}

double SignedDensityMeasure::total_variation() const {
  double acc = 0.0;
  for (const auto& p : pieces) acc += (p.hi - p.lo) * std::abs(p.value);
  return acc;
}

double SignedDensityMeasure::cell_bound() const {
  if (cells.empty()) return total_variation();
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, c.variation);
  return m;
}

double SignedDensityMeasure::value_at(double x) const {
  // first piece starting right of x; the one before it is the only candidate containing x
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x, [](double v, const DensityPiece& p) { return v < p.lo; });
  if (it == pieces.begin()) return 0.0;
  const DensityPiece& prev = *(it - 1);
  if (prev.lo < x && x < prev.hi) return prev.value;
  if (x == prev.hi) return 0.5 * prev.value;
  if (x == prev.lo) {
    const double left = (it - 1 != pieces.begin() && (it - 2)->hi == x) ? (it - 2)->value : 0.0;
    return 0.5 * (left + prev.value);
  }
  return 0.0;
}

SignedDensityMeasure make_density(std::vector<DensityPiece> pieces, const std::vector<Interval>& cells) {
  SignedDensityMeasure mu;
  mu.pieces = std::move(pieces);
  std::sort(mu.pieces.begin(), mu.pieces.end(), [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
  for (std::size_t k = 1; k < mu.pieces.size(); ++k) {
    if (mu.pieces[k].lo < mu.pieces[k - 1].hi) fail(ErrorKind::invalid_input, "density pieces overlap");
  }
  for (const auto& c : cells) mu.cells.push_back({c, 0.0, 0.0, 0.0});
  for (const auto& p : mu.pieces) {
    if (!(p.hi >= p.lo)) fail(ErrorKind::invalid_input, "density piece with hi < lo");
    auto it = std::find_if(mu.cells.begin(), mu.cells.end(),
                           [&](const DensityCell& c) { return c.cell.lo <= p.lo && p.hi <= c.cell.hi; });
    if (it == mu.cells.end()) fail(ErrorKind::invalid_input, "density piece outside every cell");
    it->net += (p.hi - p.lo) * p.value;
    it->variation += (p.hi - p.lo) * std::abs(p.value);
  }
  return mu;
}

CarveResult carve_subset(const Interval& I, const ResidualContext& ctx, double c, double D) {
  if (!(c > 0.0)) fail(ErrorKind::invalid_argument, "carve: c must be positive");
  if (!(D > 0.0)) fail(ErrorKind::invalid_argument, "carve: D must be positive");
  if (!(ctx.F.intersect(I).measure() > 0.0)) fail(ErrorKind::invalid_argument, "carve: |I cap F| = 0");
  return sweep(free_pieces(I, ctx), c, D);
}

CarveResult carve_subset(const Interval& I, const ResidualContext& ctx, double c) {
  if (!(c > 0.0)) fail(ErrorKind::invalid_argument, "carve: c must be positive");
  if (!(ctx.F.intersect(I).measure() > 0.0)) fail(ErrorKind::invalid_argument, "carve: |I cap F| = 0");
  const auto pieces = free_pieces(I, ctx);
  const double top = clamped_integral(pieces, kDmax);
  if (!(top > c)) fail(ErrorKind::cannot_carve, "clamped log+ integral saturates below c");
  double D = kDmax;
  if (top >= 2.0 * c) {
    double lo = 0.0, hi = kDmax;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (clamped_integral(pieces, mid) >= 2.0 * c ? hi : lo) = mid;
    }
    D = hi;
  }
  return sweep(pieces, c, D);
}

SignedDensityMeasure build_oscillating_density(const ResidualContext& ctx, int n, double c_n) {
  if (n < 0 || n > 24) fail(ErrorKind::invalid_argument, "dyadic level must be in [0, 24]");
  if (!(c_n >= 0.0)) fail(ErrorKind::invalid_argument, "c_n must be non-negative");
  SignedDensityMeasure mu;
  if (c_n == 0.0 || ctx.F.empty()) return mu;
  const double len = std::ldexp(1.0, -n);
  const Interval hull = ctx.F.hull();
  const auto k0 = static_cast<long>(std::floor(hull.lo / len));
  const auto k1 = static_cast<long>(std::ceil(hull.hi / len));
  for (long k = k0; k < k1; ++k) {
    const Interval cell{static_cast<double>(k) * len, static_cast<double>(k + 1) * len};
    const IntervalCollection inside = ctx.F.intersect(cell);
    const double m = inside.measure();
    if (!(m > 0.0)) continue;
    const CarveResult carved = carve_subset(cell, ctx, c_n);
    DensityCell dc{cell, 0.0, 0.0, carved.D};
    for (const auto& p : carved.pieces) {
      mu.pieces.push_back(p);
      dc.net += (p.hi - p.lo) * p.value;
      dc.variation += (p.hi - p.lo) * p.value;
    }
    for (const auto& part : inside.intervals()) {
      mu.pieces.push_back({part.lo, part.hi, -c_n / m});
      dc.net -= part.length() * c_n / m;
      dc.variation += part.length() * c_n / m;
    }
    mu.cells.push_back(dc);
  }
  std::sort(mu.pieces.begin(), mu.pieces.end(), [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
  return mu;
}

double density_poisson(const SignedDensityMeasure& mu, const HalfPlanePoint& z) {
  if (!(z.y > 0.0)) fail(ErrorKind::invalid_argument, "poisson extension needs y > 0");
  double acc = 0.0;
  for (const auto& p : mu.pieces) acc += p.value * (std::atan((p.hi - z.x) / z.y) - std::atan((p.lo - z.x) / z.y));
  return acc / kPi;
}

cplx multiplier_log(const SignedDensityMeasure& mu, double x, double y) {
  if (y < 0.0) fail(ErrorKind::invalid_argument, "multiplier lives on y >= 0");
  cplx acc = 0.0;
  for (const auto& p : mu.pieces) {
    if (p.value == 0.0 || p.hi == p.lo) continue;
    const cplx seg = log_gap(p.hi, x, y) - log_gap(p.lo, x, y) -
                     0.5 * (std::log1p(p.hi * p.hi) - std::log1p(p.lo * p.lo));
    acc += p.value * seg;
  }
  return acc / cplx(0.0, kPi);
}

cplx multiplier_element(const SignedDensityMeasure& mu, const HalfPlanePoint& z) {
  if (!(z.y > 0.0)) fail(ErrorKind::invalid_argument, "multiplier element needs y > 0");
  return std::exp(multiplier_log(mu, z.x, z.y));
}

OscillationReport oscillation_bound_check(const SignedDensityMeasure& mu, const std::vector<HalfPlanePoint>& zs) {
  for (const auto& c : mu.cells) {
    if (std::abs(c.net) > 1e-10) fail(ErrorKind::invalid_input, "density is not balanced on every cell");
  }
  OscillationReport r;
  r.C = mu.cell_bound();
  r.naive = mu.total_variation();
  for (const auto& z : zs) {
    OscillationRow row{z, density_poisson(mu, z), r.C / (kPi * z.y)};
    if (std::abs(row.value) > row.bound) ++r.violations;
    if (r.C > 0.0) r.max_ratio = std::max(r.max_ratio, std::abs(row.value) / row.bound);
    r.rows.push_back(row);
  }
  return r;
}

std::vector<HalfPlanePoint> default_probes() {
  return {{0.0, 1.0}, {0.5, 0.5}, {0.25, 0.1}, {0.8, 0.05}, {-0.3, 0.2}, {1.4, 0.3}, {0.6, 2.0}};
}

SplittingReport splitting_conditions_report(const ResidualContext& ctx, const std::vector<int>& n_list,
                                            const std::vector<double>& c_sequence,
                                            const std::vector<HalfPlanePoint>& probes) {
  validate_context(ctx);
  if (n_list.size() != c_sequence.size() || n_list.empty()) {
    fail(ErrorKind::invalid_argument, "need one c_n per level");
  }
  SplittingReport rep;
  rep.sequence_ok = true;
  for (std::size_t k = 0; k < c_sequence.size(); ++k) {
    if (!(c_sequence[k] > 0.0)) fail(ErrorKind::invalid_argument, "c_n must be positive");
    if (k > 0) {
      const double grow_prev = c_sequence[k - 1] * std::ldexp(1.0, n_list[k - 1]);
      const double grow = c_sequence[k] * std::ldexp(1.0, n_list[k]);
      if (!(n_list[k] > n_list[k - 1])) fail(ErrorKind::invalid_argument, "levels must increase");
      if (!(c_sequence[k] < c_sequence[k - 1]) || !(grow > grow_prev)) rep.sequence_ok = false;
    }
  }
  if (!rep.sequence_ok) rep.notes.push_back("c_n is not decreasing with c_n 2^n increasing on the given list");
  rep.F_degenerate = !(ctx.F.measure() > 0.0);
  if (rep.F_degenerate) rep.notes.push_back("F has measure zero: condition (ii) is vacuous");

  // grid points strictly inside F and strictly outside it
  const Grid& g = ctx.w.grid;
  std::vector<Eigen::Index> on_F, off_F;
  const double guard = 1e-12;
  for (Eigen::Index j = 0; j < g.count; ++j) {
    const double x = g.point(j);
    if (ctx.F.contains(x - guard) && ctx.F.contains(x + guard)) on_F.push_back(j);
    else if (!ctx.F.contains(x)) off_F.push_back(j);
  }

  rep.cond_i = rep.cond_ii = rep.cond_iv = true;
  double cmax = 0.0;
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    SplittingRow row;
    row.n = n_list[k];
    row.c_n = c_sequence[k];
    cmax = std::max(cmax, row.c_n);
    const SignedDensityMeasure mu = build_oscillating_density(ctx, row.n, row.c_n);
    row.cells = static_cast<int>(mu.cells.size());
    for (const auto& c : mu.cells) {
      row.balance_error = std::max({row.balance_error, std::abs(c.net), std::abs(c.variation - 2.0 * row.c_n)});
    }

    row.cond_i = true;
    const cplx phase_at_i = std::exp(multiplier_log(mu, 0.0, 1.0));
    const cplx unit = std::abs(phase_at_i) / phase_at_i;
    for (const auto& z : probes) {
      const cplx lh = multiplier_log(mu, z.x, z.y);
      const double allowed = 2.0 * row.c_n / (kPi * z.y);
      row.eq1_worst = std::max(row.eq1_worst, std::abs(lh.real()) / allowed);
      if (std::abs(lh.real()) > allowed * (1 + 1e-9)) row.cond_i = false;
      row.distance_to_one = std::max(row.distance_to_one, std::abs(std::exp(lh) * unit - 1.0));
    }

    row.eq2_bound = std::exp(-row.c_n * std::ldexp(1.0, row.n));
    // on the boundary log|h_n| is the density itself
    for (Eigen::Index j : on_F) row.max_on_F = std::max(row.max_on_F, std::exp(mu.value_at(g.point(j))));
    row.cond_ii = rep.F_degenerate || row.max_on_F <= row.eq2_bound * (1 + 1e-6);

    for (Eigen::Index j : off_F) {
      const double mod = std::exp(mu.value_at(g.point(j)));
      row.max_off_F = std::max(row.max_off_F, std::pow(mod, ctx.p) * ctx.w.values[j]);
    }
    row.cond_iv = row.max_off_F <= 1.0 + 1e-6;

    rep.cond_i = rep.cond_i && row.cond_i;
    rep.cond_ii = rep.cond_ii && row.cond_ii;
    rep.cond_iv = rep.cond_iv && row.cond_iv;
    rep.rows.push_back(row);
  }
  rep.c_growth = 2.0 * cmax / kPi;

  rep.cond_iii = rep.rows.size() >= 2;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    if (rep.rows[k].distance_to_one > 1.1 * rep.rows[k - 1].distance_to_one) rep.cond_iii = false;
  }
  if (rep.rows.size() >= 2 && !(rep.rows.back().distance_to_one <= 0.5 * rep.rows.front().distance_to_one)) {
    rep.cond_iii = false;
  }
  if (!rep.cond_iii) rep.notes.push_back("h_n(z) does not approach 1 along the sequence");
  return rep;
}

}  // namespace clumplab
