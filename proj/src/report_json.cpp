#include "clumplab/report_json.hpp"

#include <cmath>

#include "clumplab/error.hpp"
#include "clumplab/signal_io.hpp"

namespace clumplab {

using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json point_to_json(const HalfPlanePoint& z) { return json{{"x", z.x}, {"y", z.y}}; }

}  // namespace

json intervals_to_json(const IntervalCollection& c) {
  json out = json::array();
  for (const auto& I : c.intervals()) out.push_back({I.lo, I.hi});
  return out;
}

IntervalCollection intervals_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorKind::invalid_input, "interval list must be an array of [lo, hi] pairs");
  std::vector<Interval> parts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) fail(ErrorKind::invalid_input, "interval must be a [lo, hi] pair");
    parts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return IntervalCollection(std::move(parts));
}

json fit_to_json(const std::optional<StretchedFit>& fit) {
  if (!fit) return nullptr;
  return json{{"c", num(fit->c)}, {"a", num(fit->a)}, {"r2", num(fit->r2)}};
}

json decay_to_json(const DecayProfile& p) {
  json xs = json::array(), rho = json::array();
  for (const auto& s : p.samples) {
    xs.push_back(s.x);
    rho.push_back(num(s.rho));
  }
  return json{{"x", xs}, {"rho", rho}, {"fit", fit_to_json(p.fitted)}};
}

json clumps_to_json(const ClumpReport& r) {
  json cells = json::array();
  for (const auto& d : r.diagnostics) {
    json t = json::array();
    for (double v : d.truncated) t.push_back(num(v));
    cells.push_back({{"interval", {d.interval.lo, d.interval.hi}}, {"convergent", d.convergent}, {"truncated", t}});
  }
  return json{{"clumps", intervals_to_json(r.clumps)},
              {"support_estimate", intervals_to_json(r.support_estimate)},
              {"residual", intervals_to_json(r.residual)},
              {"residual_measure", num(r.residual_measure)},
              {"cells", cells}};
}

json weight_to_json(const ConcaveWeight& M) {
  const auto& p = M.params();
  json j{{"family", M.name()}};
  switch (M.family()) {
    case WeightFamily::sqrt: break;
    case WeightFamily::sqrt_over_log: j["splice"] = p.splice; break;
    case WeightFamily::power:
      j["exponent"] = p.exponent;
      j["scale"] = p.scale;
      break;
    case WeightFamily::tabulated:
      j["xs"] = p.xs;
      j["values"] = p.values;
      break;
  }
  return j;
}

ConcaveWeight weight_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) fail(ErrorKind::invalid_input, "weight needs a \"family\" field");
  WeightParams p;
  if (j.contains("splice")) p.splice = j["splice"].get<double>();
  if (j.contains("exponent")) p.exponent = j["exponent"].get<double>();
  if (j.contains("scale")) p.scale = j["scale"].get<double>();
  if (j.contains("xs")) p.xs = j["xs"].get<std::vector<double>>();
  if (j.contains("values")) p.values = j["values"].get<std::vector<double>>();
  return make_concave_weight(parse_weight_family(j["family"].get<std::string>()), p);
}

json weight_check_to_json(const WeightCheckReport& r) {
  return json{{"increasing", r.increasing},
              {"derivative_decreasing", r.derivative_decreasing},
              {"below_sqrt", r.below_sqrt},
              {"derivative_below_ratio", r.derivative_below_ratio},
              {"inverse_consistent", r.inverse_consistent},
              {"failures", r.failures},
              {"ok", r.ok()}};
}

json laplace_tail_to_json(const LaplaceTail& t) {
  return json{{"value", num(t.value)}, {"bound", num(t.bound)}, {"split", num(t.split)}, {"holds", t.holds}};
}

json ladder_to_json(const IntegrabilityLadder& l) {
  json inc = json::array(), part = json::array();
  for (double v : l.increments) inc.push_back(num(v));
  for (double v : l.partial) part.push_back(num(v));
  return json{{"points", l.points}, {"increments", inc}, {"partial", part},
              {"slope", num(l.slope)}, {"convergent", l.convergent}};
}

json dual_integrability_to_json(const DualIntegrabilityReport& r) {
  return json{{"dual", ladder_to_json(r.dual)},
              {"derivative", ladder_to_json(r.derivative)},
              {"agree", r.agree},
              {"convergent", r.convergent}};
}

json density_to_json(const SignedDensityMeasure& mu) {
  json pieces = json::array(), cells = json::array();
  for (const auto& p : mu.pieces) pieces.push_back({{"lo", p.lo}, {"hi", p.hi}, {"value", p.value}});
  for (const auto& c : mu.cells)
    cells.push_back({{"cell", {c.cell.lo, c.cell.hi}}, {"net", c.net}, {"variation", c.variation}, {"D", c.D}});
  return json{{"pieces", pieces}, {"cells", cells}, {"total_variation", mu.total_variation()},
              {"cell_bound", mu.cell_bound()}};
}

json oscillation_to_json(const OscillationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"z", point_to_json(row.z)}, {"value", num(row.value)}, {"bound", num(row.bound)}});
  return json{{"C", r.C}, {"naive", r.naive}, {"violations", r.violations},
              {"max_ratio", num(r.max_ratio)}, {"rows", rows}};
}

json splitting_to_json(const SplittingReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"c_n", row.c_n},
                    {"cells", row.cells},
                    {"balance_error", num(row.balance_error)},
                    {"eq1_worst", num(row.eq1_worst)},
                    {"cond_i", row.cond_i},
                    {"max_on_F", num(row.max_on_F)},
                    {"eq2_bound", num(row.eq2_bound)},
                    {"cond_ii", row.cond_ii},
                    {"distance_to_one", num(row.distance_to_one)},
                    {"max_off_F", num(row.max_off_F)},
                    {"cond_iv", row.cond_iv}});
  return json{{"rows", rows},
              {"c_growth", num(r.c_growth)},
              {"sequence_ok", r.sequence_ok},
              {"cond_i", r.cond_i},
              {"cond_ii", r.cond_ii},
              {"cond_iii", r.cond_iii},
              {"cond_iv", r.cond_iv},
              {"F_degenerate", r.F_degenerate},
              {"notes", r.notes},
              {"all_pass", r.all_pass()}};
}

json cantor_to_json(const CantorSpec& spec) {
  json gaps = json::array();
  for (const auto& g : spec.gaps) gaps.push_back({g.lo, g.hi});
  return json{{"A", spec.A},
              {"depth", spec.depth},
              {"L", spec.L},
              {"length_sum", spec.length_sum},
              {"measure", spec.measure},
              {"budget_sum", num(spec.budget_sum)},
              {"clump_sum", num(spec.clump_sum)},
              {"E", intervals_to_json(spec.E)},
              {"gaps", gaps}};
}

CantorSpec cantor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("L"))
    fail(ErrorKind::invalid_input, "Cantor spec needs \"A\" and \"L\" fields");
  return build_cantor_set(j["A"].get<double>(), j["L"].get<std::vector<double>>());
}

json tent_domain_to_json(const TentDomain& d) {
  json tents = json::array(), segs = json::array();
  for (const auto& t : d.tents) tents.push_back({{"base", {t.base.lo, t.base.hi}}, {"apex", t.apex}});
  for (const auto& s : d.boundary) segs.push_back({s.x0, s.y0, s.x1, s.y1, to_string(s.tag)});
  return json{{"width", d.width}, {"height", d.height}, {"area", d.area},
              {"E", intervals_to_json(d.E)}, {"tents", tents}, {"boundary", segs}};
}

json harmonic_to_json(const HarmonicEstimate& e) {
  return json{{"estimate", e.estimate}, {"std_err", e.std_err}, {"hits", e.hits},
              {"n_paths", e.n_paths}, {"capped", e.capped}};
}

json boundary_integral_to_json(const BoundaryIntegral& b) {
  return json{{"mean", num(b.mean)}, {"std_err", num(b.std_err)}, {"n_paths", b.n_paths}};
}

json khrushchev_to_json(const KhrushchevReport& r) {
  return json{{"total", boundary_integral_to_json(r.total)},
              {"tents", boundary_integral_to_json(r.tents)},
              {"majorant", num(r.majorant)},
              {"holds", r.holds}};
}

json trend_to_json(const TrendReport& r) {
  json d = json::array();
  for (double v : r.distances) d.push_back(num(v));
  return json{{"experiment", r.experiment},
              {"basis_size", r.sizes},
              {"distance", d},
              {"target_norm", num(r.target_norm)},
              {"floor", num(r.floor)},
              {"floor_ratio", num(r.floor_ratio)},
              {"final_ratio", num(r.final_ratio)},
              {"strictly_decreasing", r.strictly_decreasing},
              {"vacuous", r.vacuous},
              {"note", r.note}};
}

json bundle_to_json(const MultiplierBundle& b) {
  return json{{"n", b.n},
              {"phi_l1_norm", num(b.phi.l1_norm())},
              {"grid", grid_to_json(b.mf.grid)},
              {"h_trivial", b.h.trivial},
              {"h_log_integral", num(b.h.modulus.log_integral)},
              {"max_m", num(b.max_m)},
              {"sup_phi", num(b.sup_phi)},
              {"max_envelope_excess", num(b.max_envelope_excess)},
              {"max_mf", num(b.max_mf)},
              {"l1_mf", num(b.l1_mf)},
              {"m_nonzero", b.m_nonzero},
              {"log_m_neutral", b.log_m_neutral},
              {"trivial", b.trivial},
              {"note", b.note}};
}

namespace {

json profile_json(const std::vector<DecaySample>& p) {
  json xs = json::array(), rho = json::array();
  for (const auto& s : p) {
    xs.push_back(s.x);
    rho.push_back(num(s.rho));
  }
  return json{{"zeta", xs}, {"rho", rho}};
}

}  // namespace

json multiplier_decay_to_json(const MultiplierDecayReport& r) {
  return json{{"input_fit", fit_to_json(r.input_fit)},
              {"output_fit", fit_to_json(r.output_fit)},
              {"input_compact", r.input_compact},
              {"output_compact", r.output_compact},
              {"input_resolved", r.input_resolved},
              {"output_resolved", r.output_resolved},
              {"input_profile", profile_json(r.input_profile)},
              {"output_profile", profile_json(r.output_profile)},
              {"a_threshold", r.a_threshold},
              {"passes", r.passes}};
}

json pipeline_to_json(const PipelineReport& r) {
  return json{{"bundle", bundle_to_json(r.bundle)},
              {"decay", multiplier_decay_to_json(r.decay)},
              {"clumps", clumps_to_json(r.clumps)},
              {"note", r.note}};
}

}  // namespace clumplab
