#pragma once

#include <json.hpp>

#include "clumplab/decay.hpp"
#include "clumplab/multiplier.hpp"
#include "clumplab/oscillation.hpp"
#include "clumplab/sparse.hpp"
#include "clumplab/subspace.hpp"
#include "clumplab/weight.hpp"

namespace clumplab {

// JSON forms of the module reports. NaN and infinities come out as null.

nlohmann::json intervals_to_json(const IntervalCollection& c);  // [[lo, hi], ...]
IntervalCollection intervals_from_json(const nlohmann::json& j);

nlohmann::json fit_to_json(const std::optional<StretchedFit>& fit);
nlohmann::json decay_to_json(const DecayProfile& p);
nlohmann::json clumps_to_json(const ClumpReport& r);

nlohmann::json weight_to_json(const ConcaveWeight& M);
// Goes through make_concave_weight, so a bad table is rejected.
ConcaveWeight weight_from_json(const nlohmann::json& j);
nlohmann::json weight_check_to_json(const WeightCheckReport& r);
nlohmann::json laplace_tail_to_json(const LaplaceTail& t);
nlohmann::json ladder_to_json(const IntegrabilityLadder& l);
nlohmann::json dual_integrability_to_json(const DualIntegrabilityReport& r);

nlohmann::json density_to_json(const SignedDensityMeasure& mu);
nlohmann::json oscillation_to_json(const OscillationReport& r);
nlohmann::json splitting_to_json(const SplittingReport& r);

nlohmann::json cantor_to_json(const CantorSpec& spec);
// Rebuilt from A and L; the sets and sums are recomputed rather than trusted.
CantorSpec cantor_from_json(const nlohmann::json& j);
nlohmann::json tent_domain_to_json(const TentDomain& d);
nlohmann::json harmonic_to_json(const HarmonicEstimate& e);
nlohmann::json boundary_integral_to_json(const BoundaryIntegral& b);
nlohmann::json khrushchev_to_json(const KhrushchevReport& r);

nlohmann::json trend_to_json(const TrendReport& r);

// Summary of the bundle; the sampled signals are left out (they are as large as the input).
nlohmann::json bundle_to_json(const MultiplierBundle& b);
nlohmann::json multiplier_decay_to_json(const MultiplierDecayReport& r);
nlohmann::json pipeline_to_json(const PipelineReport& r);

}  // namespace clumplab
