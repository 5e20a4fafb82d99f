#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "clumplab/hardy.hpp"
#include "clumplab/intervals.hpp"
#include "clumplab/signal.hpp"
#include "clumplab/sparse.hpp"
#include "clumplab/weight.hpp"

namespace clumplab {

// Discretized L^2(w dx) + L^2([0, inf), rho dzeta): quadrature nodes are the grid points and the
// weights already include w (or rho).
struct ProductSpace {
  Grid x;
  Eigen::VectorXd wx;
  Grid zeta;  // starts at 0
  Eigen::VectorXd wz;
};

// |S n [x_j - h/2, x_j + h/2]| for each node, so sets finer than the grid keep their measure.
Eigen::VectorXd indicator_weights(const Grid& x, const IntervalCollection& S);
// Trapezoid weights times w interpolated onto the grid.
Eigen::VectorXd density_weights(const Grid& x, const RealSignal& w);
// Trapezoid weights times rho(zeta).
Eigen::VectorXd spectral_weights(const Grid& zeta, const std::function<double(double)>& rho);

ProductSpace make_product_space(const Grid& x, Eigen::VectorXd wx, const Grid& zeta, Eigen::VectorXd wz);

struct ProductTuple {
  Signal h;  // on the x grid
  Signal k;  // on the zeta grid
};

ProductTuple zero_tuple(const ProductSpace& space);
cplx inner(const ProductSpace& space, const ProductTuple& a, const ProductTuple& b);
double norm(const ProductSpace& space, const ProductTuple& t);

// (f on the x grid, transform of f on the zeta grid). A grid other than space.x is interpolated;
// the transform is taken from f's own grid and tail. Node 0 of the zeta grid holds the right
// limit at 0, extrapolated quadratically from nodes 1 to 3.
ProductTuple embed(const ProductSpace& space, const Signal& f);

// (e^{isx} h, k(. - s)) with k continued by 0 below 0 and interpolated between nodes. A node that
// lands exactly on the new jump at s gets k(0) / 2.
ProductTuple shift_tuple(const ProductSpace& space, const ProductTuple& t, double s);

// e^{isx} sum_k r_k / (x - p_k) with every pole in the lower half-plane. The transform is
// -i sqrt(2 pi) sum_k r_k e^{-i p_k (zeta - s)} for zeta > s, half of that at zeta = s.
struct BasisElement {
  std::vector<cplx> residues;
  std::vector<cplx> poles;
  double s = 0.0;

  cplx operator()(double x) const;
  cplx transform(double zeta) const;
};

enum class BasisKind { cauchy_nodes, modulated_cauchy };

// Element j is e^{i s_j x} psi_{z_j}(x), psi_z(x) = i / (sqrt(2 pi) (x - conj z)), multiplied by
// i / (eps x + i) when eps > 0. For cauchy_nodes the modulations are ignored.
struct BasisSpec {
  BasisKind kind = BasisKind::cauchy_nodes;
  std::vector<HalfPlanePoint> nodes;
  std::vector<double> modulations;
  double epsilon = 0.0;

  std::size_t size() const { return nodes.size(); }
  BasisElement element(std::size_t j) const;
  BasisSpec prefix(std::size_t n) const;
};

void validate_basis(const BasisSpec& basis);
ProductTuple embed(const ProductSpace& space, const BasisElement& b);

struct GramSystem {
  Eigen::MatrixXcd gram;
  Eigen::VectorXcd rhs;
  double cutoff = 0.0;  // eigenvalues below this are dropped
};

struct DistanceResult {
  double distance = 0.0;
  double target_norm = 0.0;
  Eigen::VectorXcd coefficients;
  Eigen::Index rank = 0;
};

// Least-squares distance from target to span{J b_j}, regularized by dropping Gram eigenvalues
// below 1e-10 of the largest. The distance is the norm of the computed residual.
DistanceResult subspace_distance(const ProductSpace& space, const ProductTuple& target, const BasisSpec& basis);

// The same for each nested prefix of the given sizes (increasing, at most basis.size()).
std::vector<DistanceResult> distance_trend(const ProductSpace& space, const ProductTuple& target, const BasisSpec& basis,
                                           const std::vector<std::size_t>& sizes);

GramSystem gram_system(const ProductSpace& space, const ProductTuple& target, const BasisSpec& basis);

// Nested basis over a window: element 0 is psi at (centre + i |window|); then alternately an
// unmodulated kernel from a two-scale node lattice over the window and a modulated kernel
// e^{isx} psi_{centre + i |window|} with s = s_start + m s_step.
struct LatticeOptions {
  Interval window{0.0, 1.0};
  double coarse_y = 0.25;
  double fine_y = 0.0625;
  double s_start = 0.0;
  double s_step = 3.141592653589793;
};

BasisSpec lattice_basis(std::size_t n, const LatticeOptions& options = {});

struct TrendReport {
  std::string experiment;
  std::vector<std::size_t> sizes;
  std::vector<double> distances;
  double target_norm = 0.0;
  double floor = 0.0;        // min distance
  double floor_ratio = 0.0;  // floor / target_norm
  double final_ratio = 0.0;  // last distance / target_norm
  bool strictly_decreasing = false;
  bool vacuous = false;  // nothing to measure (empty residual, zero target, failed precondition)
  std::string note;
};

struct ExperimentGrids {
  Grid x = make_grid(0.0, 1.0 / 2048.0, 2049);
  Grid zeta = make_grid(0.0, 0.02, 20001);
};

// Residual of f (from detect_clumps) against w = min(|f|^2, 1), rho = e^{-c sqrt(zeta)}; target
// (1_res, 0) on f's grid.
TrendReport condensation_experiment(const Signal& f, double c, const std::vector<std::size_t>& sizes,
                                    const LatticeOptions& basis = {});

// Target (0, k) against w = 1_S and the given rho.
TrendReport spectral_target_experiment(const IntervalCollection& S, const std::function<double(double)>& rho,
                                       const std::function<cplx(double)>& k, const std::vector<std::size_t>& sizes,
                                       const LatticeOptions& basis = {}, const ExperimentGrids& grids = {});

// w = 1_E for the Cantor set, rho = e^{-M}.
TrendReport sparseness_experiment(const CantorSpec& spec, const ConcaveWeight& M, const std::function<cplx(double)>& k,
                                  const std::vector<std::size_t>& sizes, const LatticeOptions& basis = {},
                                  const ExperimentGrids& grids = {});

// w = 1_I, rho = e^{-c sqrt(zeta)}.
TrendReport clumped_contrast(const Interval& I, double c, const std::function<cplx(double)>& k,
                             const std::vector<std::size_t>& sizes, const LatticeOptions& basis = {},
                             const ExperimentGrids& grids = {});

// Distance in L^2(w dx) from target to span{e^{isx} f : s in {0} u first n of s_grid} for each n
// in sizes. Declines (vacuous) unless the log-integral ladder of w fails to stabilize.
TrendReport cyclicity_experiment(const Signal& f, const RealSignal& w, const Signal& target,
                                 const std::vector<double>& s_grid, const std::vector<std::size_t>& sizes);

}  // namespace clumplab
