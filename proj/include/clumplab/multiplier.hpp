#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clumplab/decay.hpp"
#include "clumplab/hardy.hpp"
#include "clumplab/signal.hpp"

namespace clumplab {

// Phi(x) = (-i)^n n! / (sqrt(2 pi) (x - i)^n). Its transform is n |zeta|^{n-1} e^{zeta} on zeta < 0
// and 0 on zeta > 0; at zeta = 0 it is 1/2 for n = 1 and 0 otherwise.
struct PhiKernel {
  int n = 1;

  cplx operator()(double x) const;
  double transform(double zeta) const;
  // Samples with the exact rational tail.
  Signal sample(const Grid& g) const;
  // int |Phi| dx in closed form; infinite for n = 1.
  double l1_norm() const;
};

// n < 1 raises invalid-argument.
PhiKernel phi_kernel(int n);

// Outer function with modulus W = min(1, 1/|f|) on f's grid and W = 1 beyond it.
struct TamingOuter {
  BoundaryModulus modulus;
  bool trivial = false;  // |f| <= 1 on the grid, so h = 1

  cplx operator()(const HalfPlanePoint& z) const;
  // Boundary value at a grid node or between nodes, away from the ends of the modulus grid.
  cplx boundary(double x) const;
};

// Non-finite samples raise invalid-input. The modulus grid is trimmed to the nodes where
// log W < 0, padded by two zero nodes each side; log W is 0 elsewhere, so nothing is lost.
TamingOuter taming_outer(const Signal& f);

struct TemperedInput {
  Signal f;
  int n = 1;                   // growth order
  std::optional<Signal> fhat;  // known transform on a grid inside [0, inf); computed when absent
};

// int |f| / (1+|x|)^n over windows [c - R, c + R] of the grid, R halving from the half-span. Tail
// models only decay, so they never break convergence. Convergent when the outermost doubling adds
// no more than the one before it.
struct TemperedCheck {
  std::vector<double> radii;    // increasing
  std::vector<double> partial;  // integral over each window
  bool convergent = false;
};

TemperedCheck tempered_check(const TemperedInput& input);

struct MultiplierBundle {
  int n = 1;
  PhiKernel phi;
  TamingOuter h;
  Signal phi_samples;   // on f's grid
  Signal h_boundary;    // h on f's grid
  Signal h_star;        // h / (x + i)^2
  Signal m;             // Phi conj(h_star)
  Signal mf;            // m f, no tail: the grid must hold f's mass
  double max_m = 0.0;
  double sup_phi = 0.0;            // sup |Phi| = n! / sqrt(2 pi)
  double max_envelope_excess = 0.0;  // max(|m| - |Phi| / |x+i|^2), should be <= 0
  double max_mf = 0.0;
  double l1_mf = 0.0;
  bool m_nonzero = false;   // |m| > 0 at every node
  bool log_m_neutral = false;  // every dyadic cell of log|m| stabilizes
  bool trivial = false;        // f = 0
  std::string note;
};

// Fails with invalid-input when the tempered check does not converge.
MultiplierBundle build_multiplier(const TemperedInput& input);

struct MultiplierDecayReport {
  std::optional<StretchedFit> input_fit;   // of rho_{fhat}
  std::optional<StretchedFit> output_fit;  // of rho_{(mf)^}
  bool input_compact = false;   // rho_{fhat} reaches 0 on the probe
  bool output_compact = false;
  bool input_resolved = false;  // rho fell below the floor inside the first 3/4 of the grid
  bool output_resolved = false;
  std::vector<DecaySample> input_profile;
  std::vector<DecaySample> output_profile;
  double a_threshold = 0.45;
  bool passes = false;
};

struct DecayCheckOptions {
  double probe_start = 1.0;
  int probe_count = 64;
  double relative_floor = 1e-10;  // probe stops where rho drops below this times rho(probe_start);
                                  // not reaching it by 3/4 of the grid end counts as unresolved
  double a_threshold = 0.45;
};

// The hypothesis is a stretched fit of rho_{fhat} with exponent >= a_threshold (or compact spectral
// support on the probe); otherwise hypothesis-not-met. zeta_grid must start at 0.
MultiplierDecayReport multiplier_decay_check(const TemperedInput& input, const MultiplierBundle& bundle,
                                             const Grid& zeta_grid, const DecayCheckOptions& options = {});

struct PipelineReport {
  MultiplierBundle bundle;
  MultiplierDecayReport decay;
  ClumpReport clumps;  // of mf, which carries the clumps of f when log|m| is neutral
  std::string note;
};

// Decay check, then clumps of m f. Propagates hypothesis-not-met.
PipelineReport distributional_clump_pipeline(const TemperedInput& input, const Grid& zeta_grid,
                                             const DecayCheckOptions& decay = {}, const ClumpOptions& clump = {});

}  // namespace clumplab
