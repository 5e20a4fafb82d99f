#include "clumplab/subspace.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "clumplab/decay.hpp"
#include "clumplab/error.hpp"
#include "clumplab/parallel.hpp"
#include "clumplab/transform.hpp"

namespace clumplab {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrt2Pi = std::sqrt(2.0 * M_PI);

Eigen::VectorXcd weighted(const Eigen::VectorXcd& v, const Eigen::VectorXd& w) {
  return v.cwiseProduct(w.cwiseSqrt().cast<cplx>());
}

// Stacked sqrt-weighted samples of a tuple.
Eigen::VectorXcd stacked(const ProductSpace& space, const ProductTuple& t) {
  Eigen::VectorXcd out(space.x.count + space.zeta.count);
  out << weighted(t.h.values, space.wx), weighted(t.k.values, space.wz);
  return out;
}

void check_tuple(const ProductSpace& space, const ProductTuple& t) {
  if (t.h.values.size() != space.x.count || t.k.values.size() != space.zeta.count) {
    fail(ErrorKind::invalid_argument, "tuple does not live on the product space grids");
  }
}

// Least squares over nested column prefixes with the Gram eigenvalue cutoff.
std::vector<DistanceResult> nested_least_squares(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& t,
                                                 const std::vector<Eigen::Index>& cols) {
  const Eigen::MatrixXcd gram = A.adjoint() * A;
  const Eigen::VectorXcd rhs = A.adjoint() * t;
  const double tnorm = t.norm();
  std::vector<DistanceResult> out;
  for (Eigen::Index n : cols) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram.topLeftCorner(n, n));
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const double lmax = lam.maxCoeff();
    if (!(lmax > 0.0)) fail(ErrorKind::degenerate_input, "basis spans only the zero tuple");
    const double cutoff = 1e-10 * lmax;
    Eigen::VectorXcd proj = eig.eigenvectors().adjoint() * rhs.head(n);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lam[i] > cutoff) {
        proj[i] /= lam[i];
        ++rank;
      } else {
        proj[i] = 0.0;
      }
    }
    DistanceResult r;
    r.coefficients = eig.eigenvectors() * proj;
    r.distance = (t - A.leftCols(n) * r.coefficients).norm();
    r.target_norm = tnorm;
    r.rank = rank;
    out.push_back(std::move(r));
  }
  return out;
}

Eigen::MatrixXcd basis_matrix(const ProductSpace& space, const BasisSpec& basis, std::size_t n) {
  Eigen::MatrixXcd A(space.x.count + space.zeta.count, static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t j) { A.col(static_cast<Eigen::Index>(j)) = stacked(space, embed(space, basis.element(j))); });
  return A;
}

std::vector<Eigen::Index> checked_sizes(const std::vector<std::size_t>& sizes, std::size_t available) {
  if (sizes.empty()) fail(ErrorKind::invalid_argument, "need at least one basis size");
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0 || sizes[i] > available) fail(ErrorKind::invalid_argument, "basis size out of range");
    if (i > 0 && sizes[i] <= sizes[i - 1]) fail(ErrorKind::invalid_argument, "basis sizes must increase");
    cols.push_back(static_cast<Eigen::Index>(sizes[i]));
  }
  return cols;
}

TrendReport make_report(std::string name, const std::vector<std::size_t>& sizes, const std::vector<DistanceResult>& res) {
  TrendReport r;
  r.experiment = std::move(name);
  r.sizes = sizes;
  for (const auto& d : res) r.distances.push_back(d.distance);
  r.target_norm = res.empty() ? 0.0 : res.front().target_norm;
  r.floor = *std::min_element(r.distances.begin(), r.distances.end());
  if (r.target_norm > 0.0) {
    r.floor_ratio = r.floor / r.target_norm;
    r.final_ratio = r.distances.back() / r.target_norm;
  }
  r.strictly_decreasing = true;
  for (std::size_t i = 1; i < r.distances.size(); ++i) {
    if (!(r.distances[i] < r.distances[i - 1])) r.strictly_decreasing = false;
  }
  return r;
}

TrendReport vacuous_report(std::string name, const std::vector<std::size_t>& sizes, std::string note) {
  TrendReport r;
  r.experiment = std::move(name);
  r.sizes = sizes;
  r.distances.assign(sizes.size(), 0.0);
  r.vacuous = true;
  r.note = std::move(note);
  return r;
}

}  // namespace

Eigen::VectorXd indicator_weights(const Grid& x, const IntervalCollection& S) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.count);
  const double h = x.step;
  for (const auto& iv : S.intervals()) {
    const double lo = std::max(iv.lo, x.start), hi = std::min(iv.hi, x.end());
    if (!(hi > lo)) continue;
    auto first = static_cast<Eigen::Index>(std::floor((lo - x.start) / h + 0.5));
    auto last = static_cast<Eigen::Index>(std::floor((hi - x.start) / h + 0.5));
    first = std::clamp<Eigen::Index>(first, 0, x.count - 1);
    last = std::clamp<Eigen::Index>(last, 0, x.count - 1);
    for (Eigen::Index j = first; j <= last; ++j) {
      const double c_lo = std::max(x.point(j) - 0.5 * h, x.start), c_hi = std::min(x.point(j) + 0.5 * h, x.end());
      w[j] += std::max(0.0, std::min(hi, c_hi) - std::max(lo, c_lo));
    }
  }
  return w;
}

Eigen::VectorXd density_weights(const Grid& x, const RealSignal& w) {
  Eigen::VectorXd out = x.trapezoid_weights();
  for (Eigen::Index j = 0; j < x.count; ++j) out[j] *= w.grid == x ? w.values[j] : interpolate(w, x.point(j));
  return out;
}

Eigen::VectorXd spectral_weights(const Grid& zeta, const std::function<double(double)>& rho) {
  Eigen::VectorXd out = zeta.trapezoid_weights();
  for (Eigen::Index j = 0; j < zeta.count; ++j) out[j] *= rho(zeta.point(j));
  return out;
}

ProductSpace make_product_space(const Grid& x, Eigen::VectorXd wx, const Grid& zeta, Eigen::VectorXd wz) {
  if (wx.size() != x.count || wz.size() != zeta.count) fail(ErrorKind::invalid_argument, "weights do not match the grids");
  if (zeta.start != 0.0) fail(ErrorKind::invalid_argument, "the spectral grid must start at 0");
  if ((wx.array() < 0.0).any() || (wz.array() < 0.0).any()) fail(ErrorKind::invalid_argument, "weights must be non-negative");
  return {x, std::move(wx), zeta, std::move(wz)};
}

ProductTuple zero_tuple(const ProductSpace& space) {
  return {Signal(space.x, Signal::Vector::Zero(space.x.count)), Signal(space.zeta, Signal::Vector::Zero(space.zeta.count))};
}

cplx inner(const ProductSpace& space, const ProductTuple& a, const ProductTuple& b) {
  check_tuple(space, a);
  check_tuple(space, b);
  cplx s = 0.0;
  for (Eigen::Index j = 0; j < space.x.count; ++j) s += a.h.values[j] * std::conj(b.h.values[j]) * space.wx[j];
  for (Eigen::Index j = 0; j < space.zeta.count; ++j) s += a.k.values[j] * std::conj(b.k.values[j]) * space.wz[j];
  return s;
}

double norm(const ProductSpace& space, const ProductTuple& t) { return std::sqrt(std::max(0.0, inner(space, t, t).real())); }

ProductTuple embed(const ProductSpace& space, const Signal& f) {
  ProductTuple t;
  if (f.grid == space.x) {
    t.h = Signal(space.x, f.values);
  } else {
    t.h = sample<cplx>(space.x, [&](double x) { return interpolate(f, x); });
  }
  t.k = forward_transform(f, space.zeta);
  // node 0 stands for zeta = 0+; a transform that jumps at 0 is sampled there at half height
  if (space.zeta.count >= 4) t.k.values[0] = 3.0 * (t.k.values[1] - t.k.values[2]) + t.k.values[3];
  return t;
}

ProductTuple shift_tuple(const ProductSpace& space, const ProductTuple& t, double s) {
  if (!(s > 0.0)) fail(ErrorKind::invalid_argument, "shift needs s > 0");
  check_tuple(space, t);
  ProductTuple out = t;
  for (Eigen::Index j = 0; j < space.x.count; ++j) out.h.values[j] *= std::exp(kI * s * space.x.point(j));
  const Grid& g = space.zeta;
  for (Eigen::Index j = 0; j < g.count; ++j) {
    // position of zeta_j - s in grid units; the 1e-9 absorbs rounding when s is a multiple of the step
    const double u = static_cast<double>(j) - s / g.step;
    if (u < -1e-9) {
      out.k.values[j] = 0.0;
      continue;
    }
    const double uc = std::max(u, 0.0);
    const auto i0 = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(uc + 1e-9)), g.count - 1);
    const double frac = std::max(0.0, uc - static_cast<double>(i0));
    const cplx a = t.k.values[i0];
    const cplx b = i0 + 1 < g.count ? t.k.values[i0 + 1] : a;
    if (frac < 1e-9) {
      // a node on the new jump at s takes the mean of the one-sided values
      out.k.values[j] = i0 == 0 && j > 0 ? 0.5 * a : a;
    } else {
      out.k.values[j] = a + frac * (b - a);
    }
  }
  return out;
}

cplx BasisElement::operator()(double x) const {
  cplx v = 0.0;
  for (std::size_t k = 0; k < poles.size(); ++k) v += residues[k] / (x - poles[k]);
  return s == 0.0 ? v : v * std::exp(kI * s * x);
}

cplx BasisElement::transform(double zeta) const {
  if (zeta < s) return 0.0;
  cplx v = 0.0;
  for (std::size_t k = 0; k < poles.size(); ++k) v += residues[k] * std::exp(-kI * poles[k] * (zeta - s));
  v *= -kI * kSqrt2Pi;
  return zeta == s ? 0.5 * v : v;
}

void validate_basis(const BasisSpec& basis) {
  if (basis.nodes.empty()) fail(ErrorKind::invalid_argument, "basis is empty");
  for (const auto& z : basis.nodes) {
    if (!(z.y > 0.0)) fail(ErrorKind::invalid_argument, "basis nodes need y > 0");
  }
  if (basis.kind == BasisKind::modulated_cauchy) {
    if (basis.modulations.size() != basis.nodes.size()) {
      fail(ErrorKind::invalid_argument, "modulated basis needs one modulation per node");
    }
    for (double s : basis.modulations) {
      if (!(s >= 0.0)) fail(ErrorKind::invalid_argument, "modulations must be >= 0");
    }
  }
  if (!(basis.epsilon >= 0.0)) fail(ErrorKind::invalid_argument, "mollifier epsilon must be >= 0");
}

BasisElement BasisSpec::element(std::size_t j) const {
  const auto& z = nodes.at(j);
  BasisElement b;
  b.s = kind == BasisKind::modulated_cauchy ? modulations.at(j) : 0.0;
  const cplx r = kI / kSqrt2Pi, p = std::conj(z.z());
  if (epsilon == 0.0) {
    b.residues = {r};
    b.poles = {p};
    return b;
  }
  // times i/(eps x + i) = (i/eps) / (x - q), q = -i/eps; split into partial fractions
  const cplx q = -kI / epsilon, c = r * (kI / epsilon);
  if (std::abs(p - q) < 1e-12) fail(ErrorKind::invalid_argument, "mollifier pole coincides with the node");
  b.residues = {c / (p - q), -c / (p - q)};
  b.poles = {p, q};
  return b;
}

BasisSpec BasisSpec::prefix(std::size_t n) const {
  BasisSpec out = *this;
  n = std::min(n, nodes.size());
  out.nodes.resize(n);
  if (kind == BasisKind::modulated_cauchy) out.modulations.resize(n);
  return out;
}

ProductTuple embed(const ProductSpace& space, const BasisElement& b) {
  ProductTuple t{sample<cplx>(space.x, [&](double x) { return b(x); }),
                 sample<cplx>(space.zeta, [&](double z) { return b.transform(z); })};
  // right limit at the start of the half-line
  if (b.s == 0.0) t.k.values[0] *= 2.0;
  return t;
}

GramSystem gram_system(const ProductSpace& space, const ProductTuple& target, const BasisSpec& basis) {
  validate_basis(basis);
  check_tuple(space, target);
  const Eigen::MatrixXcd A = basis_matrix(space, basis, basis.size());
  GramSystem g;
  g.gram = A.adjoint() * A;
  g.rhs = A.adjoint() * stacked(space, target);
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(g.gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  g.cutoff = 1e-10 * lmax;
  return g;
}

DistanceResult subspace_distance(const ProductSpace& space, const ProductTuple& target, const BasisSpec& basis) {
  return distance_trend(space, target, basis, {basis.size()}).front();
}

std::vector<DistanceResult> distance_trend(const ProductSpace& space, const ProductTuple& target, const BasisSpec& basis,
                                           const std::vector<std::size_t>& sizes) {
  validate_basis(basis);
  check_tuple(space, target);
  const auto cols = checked_sizes(sizes, basis.size());
  const Eigen::MatrixXcd A = basis_matrix(space, basis, static_cast<std::size_t>(cols.back()));
  return nested_least_squares(A, stacked(space, target), cols);
}

BasisSpec lattice_basis(std::size_t n, const LatticeOptions& o) {
  const double a = o.window.lo, b = o.window.hi, len = b - a, centre = 0.5 * (a + b);
  if (!(len > 0.0) || !(o.coarse_y > 0.0) || !(o.fine_y > 0.0) || !(o.s_step > 0.0) || !(o.s_start >= 0.0)) {
    fail(ErrorKind::invalid_argument, "lattice basis needs a proper window and positive scales");
  }
  std::vector<HalfPlanePoint> lattice;
  for (double y : {o.coarse_y, o.fine_y}) {
    for (double x = a + 0.5 * y; x < b; x += y) lattice.push_back({x, y});
  }
  BasisSpec basis;
  basis.kind = BasisKind::modulated_cauchy;
  basis.nodes.push_back({a, len});
  basis.modulations.push_back(0.0);
  std::size_t next_lattice = 0, next_mod = 1;
  while (basis.size() < n) {
    const bool take_lattice = basis.size() % 2 == 1 && next_lattice < lattice.size();
    if (take_lattice) {
      basis.nodes.push_back(lattice[next_lattice++]);
      basis.modulations.push_back(0.0);
    } else {
      basis.nodes.push_back({centre, 0.5 * len});
      basis.modulations.push_back(o.s_start + static_cast<double>(next_mod++) * o.s_step);
    }
  }
  return basis;
}

TrendReport condensation_experiment(const Signal& f, double c, const std::vector<std::size_t>& sizes,
                                    const LatticeOptions& basis_options) {
  if (!(c > 0.0)) fail(ErrorKind::invalid_argument, "decay constant c must be positive");
  const std::string name = "condensation";
  const auto clumps = detect_clumps(f);
  if (!(clumps.residual.measure() > 0.0)) return vacuous_report(name, sizes, "empty residual: every part of the support is clumped");

  RealSignal w = abs(f);
  w.values = w.values.cwiseAbs2().cwiseMin(1.0);
  ExperimentGrids grids;
  const auto space = make_product_space(f.grid, density_weights(f.grid, w), grids.zeta,
                                        spectral_weights(grids.zeta, [c](double z) { return std::exp(-c * std::sqrt(z)); }));
  ProductTuple target = zero_tuple(space);
  // nodes on a clump edge belong to the clump; the half cell around them is not residual mass
  for (Eigen::Index j = 0; j < f.grid.count; ++j) {
    const double x = f.grid.point(j);
    target.h.values[j] = clumps.residual.contains(x) && !clumps.clumps.contains(x) ? 1.0 : 0.0;
  }
  if (norm(space, target) == 0.0) return vacuous_report(name, sizes, "residual carries no grid mass");

  const auto basis = lattice_basis(sizes.back(), basis_options);
  auto r = make_report(name, sizes, distance_trend(space, target, basis, sizes));
  r.note = "residual measure " + std::to_string(clumps.residual_measure);
  return r;
}

TrendReport spectral_target_experiment(const IntervalCollection& S, const std::function<double(double)>& rho,
                                       const std::function<cplx(double)>& k, const std::vector<std::size_t>& sizes,
                                       const LatticeOptions& basis_options, const ExperimentGrids& grids) {
  const auto space = make_product_space(grids.x, indicator_weights(grids.x, S), grids.zeta, spectral_weights(grids.zeta, rho));
  ProductTuple target = zero_tuple(space);
  target.k = sample<cplx>(grids.zeta, k);
  if (norm(space, target) == 0.0) return vacuous_report("spectral-target", sizes, "zero target");
  const auto basis = lattice_basis(sizes.back(), basis_options);
  return make_report("spectral-target", sizes, distance_trend(space, target, basis, sizes));
}

TrendReport sparseness_experiment(const CantorSpec& spec, const ConcaveWeight& M, const std::function<cplx(double)>& k,
                                  const std::vector<std::size_t>& sizes, const LatticeOptions& basis,
                                  const ExperimentGrids& grids) {
  auto r = spectral_target_experiment(spec.E, [&M](double z) { return std::exp(-M.M(z)); }, k, sizes, basis, grids);
  r.experiment = "sparseness";
  return r;
}

TrendReport clumped_contrast(const Interval& I, double c, const std::function<cplx(double)>& k,
                             const std::vector<std::size_t>& sizes, const LatticeOptions& basis, const ExperimentGrids& grids) {
  if (!(c > 0.0)) fail(ErrorKind::invalid_argument, "decay constant c must be positive");
  auto r = spectral_target_experiment(IntervalCollection{I}, [c](double z) { return std::exp(-c * std::sqrt(z)); }, k, sizes,
                                      basis, grids);
  r.experiment = "clumped-contrast";
  return r;
}

TrendReport cyclicity_experiment(const Signal& f, const RealSignal& w, const Signal& target,
                                 const std::vector<double>& s_grid, const std::vector<std::size_t>& sizes) {
  const std::string name = "cyclicity";
  if (poisson_log_integral(to_complex(w)).stabilized) {
    return vacuous_report(name, sizes, "log-integral of w converges; the precondition fails");
  }
  const auto cols = checked_sizes(sizes, s_grid.size());
  for (double s : s_grid) {
    if (!(s > 0.0)) fail(ErrorKind::invalid_argument, "shift grid must be positive");
  }
  const Grid& g = w.grid;
  const Eigen::VectorXd wx = density_weights(g, w);
  auto on_grid = [&](const Signal& s, Eigen::Index j) { return s.grid == g ? s.values[j] : interpolate(s, g.point(j)); };
  const auto n = static_cast<Eigen::Index>(s_grid.size()) + 1;
  Eigen::MatrixXcd A(g.count, n);
  Eigen::VectorXcd t(g.count);
  for (Eigen::Index j = 0; j < g.count; ++j) {
    const double sw = std::sqrt(wx[j]), x = g.point(j);
    const cplx fj = on_grid(f, j);
    t[j] = on_grid(target, j) * sw;
    A(j, 0) = fj * sw;
    for (Eigen::Index m = 1; m < n; ++m) A(j, m) = std::exp(kI * s_grid[static_cast<std::size_t>(m - 1)] * x) * fj * sw;
  }
  if (t.norm() == 0.0) return vacuous_report(name, sizes, "zero target");
  std::vector<Eigen::Index> with_zero;
  for (auto c : cols) with_zero.push_back(c + 1);
  return make_report(name, sizes, nested_least_squares(A, t, with_zero));
}

}  // namespace clumplab
