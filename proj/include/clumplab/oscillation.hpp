#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clumplab/hardy.hpp"
#include "clumplab/intervals.hpp"
#include "clumplab/signal.hpp"

namespace clumplab {

// w sampled on a grid (0 <= w <= 1), a bounded set F on which w > delta, and the exponent p > 2.
struct ResidualContext {
  RealSignal w;
  IntervalCollection F;
  double delta = 0.0;
  double p = 2.5;
};

// Throws invalid-input when the context breaks its invariants.
void validate_context(const ResidualContext& ctx);

// [0,1] minus centred gaps of relative length gamma in every dyadic cell of levels 1..levels,
// w = 1 on F and exp(-1/dist(x, F)) in the gaps, sampled with step 2^-grid_log2.
ResidualContext cantor_residual_context(int levels = 8, double gamma = 0.07, double p = 2.5, int grid_log2 = 16);

// F = [0, right], w = exp(-1/(x - right)) to its right and 1 elsewhere, on [lo, hi].
ResidualContext interval_residual_context(double right, double p = 2.5, double lo = -0.5, double hi = 1.0,
                                          double step = 1e-4);

struct DensityPiece {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

struct DensityCell {
  Interval cell;
  double net = 0.0;
  double variation = 0.0;
  double D = 0.0;  // clamp level used by the positive part (0 for hand-built cells)
};

// Piecewise-constant real density with its bookkeeping cells; pieces are kept sorted and disjoint.
struct SignedDensityMeasure {
  std::vector<DensityPiece> pieces;
  std::vector<DensityCell> cells;

  double total_variation() const;
  // Largest per-cell variation; the constant in the oscillation bound.
  double cell_bound() const;
  double value_at(double x) const;  // midpoint value on piece boundaries, which is log|h| there
};

// Fills the per-cell net integral and variation; every piece must lie in one cell.
SignedDensityMeasure make_density(std::vector<DensityPiece> pieces, const std::vector<Interval>& cells);

struct CarveResult {
  double D = 0.0;
  double available = 0.0;  // int_{I \ F} min(g, D) before cutting
  IntervalCollection E;
  std::vector<DensityPiece> pieces;  // min(g, D) on E
  double integral = 0.0;             // equals c
};

// g = p^-1 log+(1/w), valued on each grid cell as min of its end samples (so the clamp never exceeds
// the pointwise value at a node). D is the smallest level in [0, 2^40] with int_{I\F} min(g, D) >= 2c;
// if 2c is out of reach but c is not, D = 2^40. E is swept left to right and cut where the integral hits c.
CarveResult carve_subset(const Interval& I, const ResidualContext& ctx, double c);
CarveResult carve_subset(const Interval& I, const ResidualContext& ctx, double c, double D);

// Dyadic cells [k 2^-n, (k+1) 2^-n) meeting F in positive measure, each carved with c = c_n and
// balanced by -c_n / |cell cap F| on cell cap F.
SignedDensityMeasure build_oscillating_density(const ResidualContext& ctx, int n, double c_n);

// Exact for piecewise-constant densities.
double density_poisson(const SignedDensityMeasure& mu, const HalfPlanePoint& z);
// log h(z) from the outer-function formula with log W = density; y = 0 gives the boundary value.
cplx multiplier_log(const SignedDensityMeasure& mu, double x, double y);
cplx multiplier_element(const SignedDensityMeasure& mu, const HalfPlanePoint& z);

struct OscillationRow {
  HalfPlanePoint z;
  double value = 0.0;  // P_mu(z)
  double bound = 0.0;  // C / (pi y)
};

struct OscillationReport {
  double C = 0.0;
  double naive = 0.0;  // |mu|(R) as the constant
  std::vector<OscillationRow> rows;
  int violations = 0;
  double max_ratio = 0.0;  // max |P_mu| pi y / C
};

// Throws invalid-input if some cell is not balanced to 1e-10.
OscillationReport oscillation_bound_check(const SignedDensityMeasure& mu, const std::vector<HalfPlanePoint>& zs);

struct SplittingRow {
  int n = 0;
  double c_n = 0.0;
  int cells = 0;
  double balance_error = 0.0;     // max |net| and ||variation| - 2 c_n| over cells
  double eq1_worst = 0.0;         // max |log|h_n(z)|| pi y / (2 c_n) over probes, <= 1 required
  bool cond_i = false;            // e^{-2c_n/(pi y)} <= |h_n| <= e^{2c_n/(pi y)} at the probes
  double max_on_F = 0.0;          // max |h_n(x)| over interior grid points of F
  double eq2_bound = 0.0;         // e^{-c_n 2^n}
  bool cond_ii = false;
  double distance_to_one = 0.0;   // max over probes of |h_n(z) - 1| after fixing the phase at z = i
  double max_off_F = 0.0;         // max |h_n(x)|^p w(x) over grid points off F
  bool cond_iv = false;
};

struct SplittingReport {
  std::vector<SplittingRow> rows;
  double c_growth = 0.0;    // c = 2 max c_n / pi in |h_n(x+iy)| <= e^{c/y}
  bool sequence_ok = false;  // c_n decreasing and c_n 2^n increasing on the list
  bool cond_i = false;
  bool cond_ii = false;
  bool cond_iii = false;  // distances non-increasing up to 10% and the last <= half the first
  bool cond_iv = false;
  bool F_degenerate = false;
  std::vector<std::string> notes;
  bool all_pass() const { return sequence_ok && cond_i && cond_ii && cond_iii && cond_iv; }
};

std::vector<HalfPlanePoint> default_probes();

SplittingReport splitting_conditions_report(const ResidualContext& ctx, const std::vector<int>& n_list,
                                            const std::vector<double>& c_sequence,
                                            const std::vector<HalfPlanePoint>& probes = default_probes());

}  // namespace clumplab
