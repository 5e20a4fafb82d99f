#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "clumplab/hardy.hpp"
#include "clumplab/intervals.hpp"
#include "clumplab/weight.hpp"

namespace clumplab {

// I_M(y) = int_0^inf exp(M(x) - 2yx) dx and the bound 2 exp(M_*(y)) / y^2.
struct LaplaceTail {
  double value = 0.0;
  double bound = 0.0;
  double split = 0.0;  // K(y)
  bool holds = false;
};

// y in (0, 1), otherwise out-of-range.
LaplaceTail laplace_tail_integral(const ConcaveWeight& M, double y);

// int_x^inf M'(t)^2 dt; infinite when M'^2 is not integrable at infinity.
double derivative_energy_tail(const ConcaveWeight& M, double x);

// Partial integrals on a dyadic ladder. The increments are fitted against log k over the second half
// of the ladder; a log-log slope below -1.25 (faster than 1/k) counts as convergent.
struct IntegrabilityLadder {
  std::vector<double> points;      // eps_k = delta 2^-k, or X_k = 2^k
  std::vector<double> increments;  // integral over [eps_k, eps_{k-1}] or [X_{k-1}, X_k]
  std::vector<double> partial;     // running sums
  double slope = 0.0;
  bool convergent = false;
};

struct DualIntegrabilityReport {
  IntegrabilityLadder dual;        // int_eps^delta M_*(y) dy
  IntegrabilityLadder derivative;  // int_1^X M'(x)^2 dx
  bool agree = false;
  bool convergent = false;
};

DualIntegrabilityReport dual_integrability_check(const ConcaveWeight& M, double delta = 0.5, double X = 0x1p40);

// H(y) = log(2C)/2 + M_*(y) - log y.
double clump_budget(const ConcaveWeight& M, double C, double y);
// int_0^L H(y) dy, using int_0^L M_* = L M_*(L) + int_{K(L)}^inf M'^2.
double clump_budget_integral(const ConcaveWeight& M, double C, double L);

// Cantor-type set in [0, A]: stage n removes a centred open gap of length L_n from each of the
// 2^{n-1} intervals of the previous stage.
struct CantorSpec {
  double A = 1.0;
  std::vector<double> L;                 // L_1 .. L_depth
  int depth = 0;
  std::vector<IntervalCollection> levels;  // E_0 .. E_depth
  IntervalCollection E;
  std::vector<Interval> gaps;  // complementary intervals inside [0, A], sorted
  double length_sum = 0.0;     // sum 2^n L_n
  double budget_sum = 0.0;     // sum 2^n int_0^{L_n} H; NaN without a weight
  double clump_sum = 0.0;      // sum over gaps of int_0^{|gap|} H; NaN without a weight
  double measure = 0.0;
};

// Explicit gap lengths; requires sum 2^n L_n <= A/2 and each gap to fit its interval. A gap whose
// realized length differs from L_n by more than 1e-4 relative raises out-of-range.
CantorSpec build_cantor_set(double A, const std::vector<double>& lengths);

// L_n = min(A 8^-n, largest L with 2^n int_0^L H <= margin 2^-n). Divergent-class weights raise
// invalid-weight; H must be positive at the chosen lengths. When int_0^L H decays only like
// 1/log(1/L) (sqrt-over-log) the cap drops below what a double can place after three stages
// and out-of-range is raised.
CantorSpec build_cantor_set(double A, const ConcaveWeight& M, double C, int depth = 8, double margin = 1.0);

// Fills budget_sum and clump_sum for the set's gap lengths.
void record_clump_budget(CantorSpec& spec, const ConcaveWeight& M, double C);

enum class BoundaryTag { tent_side, top, lateral, e_base };
std::string to_string(BoundaryTag tag);

struct BoundarySegment {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  BoundaryTag tag = BoundaryTag::e_base;
  double length() const;
};

struct Tent {
  Interval base;
  double apex = 0.0;  // |base| / 2
  double area() const { return 0.5 * base.length() * apex; }
  // height of the tent roof at x, 0 outside the base
  double roof(double x) const;
};

// Rectangle [0, A] x [0, height] minus the tents over the gaps of E.
struct TentDomain {
  IntervalCollection E;
  double width = 1.0;
  double height = 1.0;
  std::vector<Tent> tents;
  std::vector<BoundarySegment> boundary;  // closed polyline, counter-clockwise from (0, 0)
  double area = 0.0;                      // shoelace area of the polyline

  bool contains(double x, double y) const;
  // Distance to the boundary and the index of the nearest segment.
  double distance(double x, double y, std::size_t* nearest = nullptr) const;
};

// height must exceed the tallest apex, otherwise invalid-argument.
TentDomain build_tent_domain(const CantorSpec& spec, double height);

// Boundary polyline as CSV rows x0,y0,x1,y1,tag.
void write_boundary_csv(const TentDomain& domain, const std::string& path);

// Union of tagged segments, optionally restricted to absorption points with x in a window.
struct HarmonicTarget {
  std::vector<BoundaryTag> tags;
  bool windowed = false;
  IntervalCollection window;

  static HarmonicTarget whole_boundary();
  static HarmonicTarget tagged(std::vector<BoundaryTag> tags);
  static HarmonicTarget base_subset(const IntervalCollection& B);
  static HarmonicTarget tent_side_window(double lo, double hi);
  bool hit(double x, BoundaryTag tag) const;
};

struct WalkOptions {
  std::size_t n_paths = 100000;
  double eps = 1e-4;
  std::uint64_t seed = 0;
  std::size_t max_steps = 100000;
};

struct HarmonicEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
  std::size_t hits = 0;
  std::size_t n_paths = 0;
  std::size_t capped = 0;  // walks stopped by max_steps, absorbed at the nearest segment
};

// Walk-on-spheres estimate of omega_z(target). z outside the domain raises invalid-argument.
// Each path draws from its own generator seeded by (seed, path index).
HarmonicEstimate harmonic_measure_mc(const TentDomain& domain, const HalfPlanePoint& z, const HarmonicTarget& target,
                                     const WalkOptions& options = {});

struct BoundaryIntegral {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n_paths = 0;
};

// Monte Carlo estimate of int g(t) d omega_z(t) over the boundary.
BoundaryIntegral boundary_integral_mc(const TentDomain& domain, const HalfPlanePoint& z,
                                      const std::function<double(double x, double y, BoundaryTag tag)>& g,
                                      const WalkOptions& options = {});

struct KhrushchevReport {
  BoundaryIntegral total;  // int over the boundary in the upper half-plane of H(Im t)
  BoundaryIntegral tents;  // tent sides only
  double majorant = 0.0;   // (16 / y) sum over gaps of int_0^{|gap|} H
  bool holds = false;      // tents.mean <= majorant + 3 tents.std_err
};

KhrushchevReport khrushchev_budget_sum(const TentDomain& domain, const HalfPlanePoint& z, const ConcaveWeight& M,
                                       double C, const WalkOptions& options = {});

}  // namespace clumplab
