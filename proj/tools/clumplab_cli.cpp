#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clumplab/decay.hpp"
#include "clumplab/error.hpp"
#include "clumplab/hardy.hpp"
#include "clumplab/multiplier.hpp"
#include "clumplab/oscillation.hpp"
#include "clumplab/parallel.hpp"
#include "clumplab/report_json.hpp"
#include "clumplab/signal_io.hpp"
#include "clumplab/sparse.hpp"
#include "clumplab/subspace.hpp"
#include "clumplab/transform.hpp"
#include "clumplab/weight.hpp"

using namespace clumplab;
using nlohmann::json;

namespace {

// ---- argument parsing helpers ----

double parse_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    fail(ErrorKind::invalid_argument, what + ": '" + text + "' is not a finite number");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_double(s, what));
  if (out.empty()) fail(ErrorKind::invalid_argument, what + " is empty");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_list(text, "--sizes")) {
    if (v < 1.0 || v != std::floor(v)) fail(ErrorKind::invalid_argument, "--sizes takes positive integers, e.g. 8,16,32,64");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

Grid parse_grid(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 3 || v[2] < 2.0 || v[2] != std::floor(v[2]))
    fail(ErrorKind::invalid_argument, what + " expects start,step,count with count >= 2, e.g. 0,0.01,4001");
  return make_grid(v[0], v[1], static_cast<Eigen::Index>(v[2]));
}

Interval parse_interval(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, what);
  if (v.size() != 2 || !(v[0] < v[1])) fail(ErrorKind::invalid_argument, what + " expects lo,hi with lo < hi");
  return {v[0], v[1]};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_input, "'" + path + "' is not valid JSON: " + e.what());
  }
}

RealSignal real_part(const Signal& s) { return {s.grid, s.values.real(), s.tail}; }

// add_option with a round-trip default string; CLI11 would print doubles to 6 digits.
template <typename T>
CLI::Option* opt(CLI::App* sub, const std::string& name, T& var, const std::string& help) {
  CLI::Option* o = sub->add_option(name, var, help);
  if constexpr (std::is_floating_point_v<T>) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(var));
    o->default_str(buf);
  }
  return o;
}

// ---- weight options, shared by several subcommands ----

struct WeightArgs {
  std::string family = "sqrt-over-log";
  double splice = 20.085536923187668;
  double exponent = 1.0 / 3.0;
  double scale = 1.0;
  std::string table;  // CSV rows x,M

  void attach(CLI::App* sub) {
    opt(sub, "--weight", family, "sqrt | sqrt-over-log | power | tabulated");
    opt(sub, "--splice", splice, "sqrt-over-log splice point");
    opt(sub, "--exponent", exponent, "power family exponent");
    opt(sub, "--scale", scale, "power family scale");
    opt(sub, "--table", table, "tabulated weight: CSV file with rows x,M");
  }

  ConcaveWeight build() const {
    if (family.empty()) fail(ErrorKind::invalid_argument, "--weight is required here (the Cantor set file records no weight)");
    WeightParams p;
    p.splice = splice;
    p.exponent = exponent;
    p.scale = scale;
    const WeightFamily fam = parse_weight_family(family);
    if (fam == WeightFamily::tabulated) {
      if (table.empty()) fail(ErrorKind::invalid_argument, "--weight tabulated needs --table <csv of x,M rows>");
      std::ifstream in(table);
      if (!in) fail(ErrorKind::invalid_input, "cannot open weight table '" + table + "'");
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        const auto cols = split(line, ',');
        if (cols.size() < 2) fail(ErrorKind::invalid_input, "weight table rows must be x,M: '" + line + "'");
        p.xs.push_back(parse_double(cols[0], "weight table x"));
        p.values.push_back(parse_double(cols[1], "weight table M"));
      }
    }
    return make_concave_weight(fam, p);
  }
};

struct LatticeArgs {
  std::string window = "0,1";
  double coarse_y = 0.25;
  double fine_y = 0.0625;
  double s_start = 0.0;
  double s_step = std::numbers::pi;

  void attach(CLI::App* sub) {
    opt(sub, "--window", window, "basis window lo,hi");
    opt(sub, "--coarse-y", coarse_y, "coarse node height");
    opt(sub, "--fine-y", fine_y, "fine node height");
    opt(sub, "--s-start", s_start, "first modulation");
    opt(sub, "--s-step", s_step, "modulation step");
  }

  LatticeOptions build() const {
    LatticeOptions o;
    o.window = parse_interval(window, "--window");
    o.coarse_y = coarse_y;
    o.fine_y = fine_y;
    o.s_start = s_start;
    o.s_step = s_step;
    return o;
  }
};

std::function<cplx(double)> spectral_target(const std::string& k) {
  if (k == "exp") return [](double z) { return cplx(std::exp(-z), 0.0); };
  if (k == "gauss") return [](double z) { return cplx(std::exp(-0.5 * z * z), 0.0); };
  if (k == "rational") return [](double z) { return cplx(1.0 / ((1.0 + z) * (1.0 + z)), 0.0); };
  fail(ErrorKind::invalid_argument, "--k must be exp, gauss or rational");
}

// ---- config handling ----

// Every non-help option of `app` with its effective value: flags as booleans, everything else as
// the string that was parsed (or the default).
json resolved_options(const CLI::App* app) {
  json o = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->get_expected_min() == 0) {
      o[name] = opt->count() > 0;
      continue;
    }
    if (opt->count() == 0) {
      o[name] = opt->get_default_str();
      continue;
    }
    std::string joined;
    for (const auto& r : opt->reduced_results()) joined += (joined.empty() ? "" : ",") + r;
    o[name] = joined;
  }
  return o;
}

// {"command": "sparse build-e", "options": {"A": 1, "depth": 8}} becomes the argument list
// sparse build-e --A=1 --depth=8. Later command-line options override.
std::vector<std::string> expand_config(const json& cfg) {
  if (!cfg.is_object() || !cfg.contains("command"))
    fail(ErrorKind::invalid_input, "config must be an object with a \"command\" field, e.g. \"sparse build-e\"");
  std::vector<std::string> args;
  const auto& cmd = cfg["command"];
  if (cmd.is_string()) {
    for (const auto& t : split(cmd.get<std::string>(), ' '))
      if (!t.empty()) args.push_back(t);
  } else {
    for (const auto& t : cmd) args.push_back(t.get<std::string>());
  }
  for (const char* section : {"globals", "options"}) {
    if (!cfg.contains(section)) continue;
    for (const auto& [key, value] : cfg[section].items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back("--" + key);
      } else if (value.is_string()) {
        if (value.get<std::string>().empty()) continue;  // an unset option
        args.push_back("--" + key + "=" + value.get<std::string>());
      } else if (value.is_array()) {
        std::string joined;
        for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
        args.push_back("--" + key + "=" + joined);
      } else if (!value.is_null()) {
        args.push_back("--" + key + "=" + value.dump());
      }
    }
  }
  return args;
}

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::optional<double> tolerance;
  std::string out;
  std::string config;
};

struct Run {
  const CLI::App* app = nullptr;
  const CLI::App* leaf = nullptr;
  std::string command;
  Globals g;

  double tolerance_or(double fallback) const { return g.tolerance.value_or(fallback); }

  // `used_tolerance` is what the command did with --tolerance (null when it has none).
  json config(json used_tolerance) const {
    json globals = resolved_options(app);
    globals["tolerance"] = std::move(used_tolerance);
    return json{{"command", command}, {"globals", globals}, {"options", resolved_options(leaf)}};
  }

  void emit(const json& report) const {
    const std::string text = report.dump(2) + "\n";
    if (g.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(g.out);
    if (!f) fail(ErrorKind::invalid_input, "cannot write '" + g.out + "'");
    f << text;
  }
};

// ---- subcommands ----

struct TransformArgs {
  std::string in, grid, method = "auto";
  bool inverse = false;
};

int run_transform(const Run& run, const TransformArgs& a) {
  const Signal f = load_signal(a.in);
  const Grid out = parse_grid(a.grid, "--grid");
  TransformMethod m = TransformMethod::automatic;
  if (a.method == "direct") m = TransformMethod::direct;
  else if (a.method == "chirp") m = TransformMethod::chirp;
  else if (a.method != "auto") fail(ErrorKind::invalid_argument, "--method must be auto, direct or chirp");
  const Signal F = a.inverse ? inverse_transform(f, out, m) : forward_transform(f, out, m);

  const json cfg = run.config(nullptr);
  const bool as_json = run.g.out.size() >= 5 && run.g.out.ends_with(".json");
  if (as_json) {
    json j = signal_to_json(F);
    j["config"] = cfg;
    run.emit(j);
  } else if (run.g.out.empty()) {
    write_signal_csv(std::cout, F);
  } else {
    save_signal(run.g.out, F);
    std::ofstream side(run.g.out + ".config.json");
    side << json{{"config", cfg}}.dump(2) << '\n';
  }
  return 0;
}

struct DecayArgs {
  std::string in;
  double from = 1.0;
  double to = 0.0;  // 0: the grid end
  int count = 64;
};

int run_decay(const Run& run, const DecayArgs& a) {
  const Signal f = load_signal(a.in);
  const double hi = a.to > 0.0 ? a.to : f.grid.end();
  if (!(hi > a.from) || a.count < 3) fail(ErrorKind::invalid_argument, "decay probe needs --to > --from and --count >= 3");
  std::vector<double> xs(static_cast<std::size_t>(a.count));
  for (int k = 0; k < a.count; ++k) xs[static_cast<std::size_t>(k)] = a.from + (hi - a.from) * k / (a.count - 1);
  DecayProfile p = decay_profile(f, xs);
  if (!p.fitted) p.fitted = fit_stretched_decay(p);
  run.emit(json{{"config", run.config(nullptr)}, {"decay", decay_to_json(p)}});
  return 0;
}

struct ClumpArgs {
  std::string in, cutoffs = "2,4,8,16,32,64,128,256", format = "json";
  int depth = 8;
  double floor = 1e-12;
};

void print_clump_table(std::ostream& out, const ClumpReport& r) {
  out << "interval                         verdict      T[K-1]          T[K]\n";
  for (const auto& d : r.diagnostics) {
    char line[160];
    const double a = d.truncated.size() >= 2 ? d.truncated[d.truncated.size() - 2] : NAN;
    const double b = d.truncated.empty() ? NAN : d.truncated.back();
    std::snprintf(line, sizeof line, "[%12.6g, %12.6g]  %-11s %14.6g %14.6g\n", d.interval.lo, d.interval.hi,
                  d.convergent ? "clump" : "divergent", a, b);
    out << line;
  }
  out << "residual measure: " << r.residual_measure << "\n";
}

int run_clumps(const Run& run, const ClumpArgs& a) {
  const Signal f = load_signal(a.in);
  ClumpOptions o;
  o.depth = a.depth;
  o.cutoffs = parse_list(a.cutoffs, "--cutoffs");
  o.floor = a.floor;
  o.slope_threshold = run.tolerance_or(o.slope_threshold);
  const ClumpReport r = detect_clumps(f, o);
  if (a.format == "table") {
    print_clump_table(std::cout, r);
    return 0;
  }
  if (a.format != "json") fail(ErrorKind::invalid_argument, "--format must be json or table");
  run.emit(json{{"config", run.config(o.slope_threshold)}, {"clumps", clumps_to_json(r)}});
  return 0;
}

struct OuterArgs {
  std::string in, points, boundary_csv;
  double outside = 1.0;
};

int run_outer(const Run& run, const OuterArgs& a) {
  const RealSignal W = real_part(load_signal(a.in));
  const BoundaryModulus mod = boundary_modulus_from_weight(W, a.outside);
  json pts = json::array();
  if (!a.points.empty()) {
    for (const auto& item : split(a.points, ';')) {
      const auto v = parse_list(item, "--points");
      if (v.size() != 2) fail(ErrorKind::invalid_argument, "--points expects x,y pairs separated by ';'");
      const cplx h = outer_function(mod, make_point(v[0], v[1]));
      pts.push_back({{"x", v[0]}, {"y", v[1]}, {"re", h.real()}, {"im", h.imag()}, {"abs", std::abs(h)}});
    }
  }
  if (!a.boundary_csv.empty()) {
    Signal hb = sample<cplx>(W.grid, [&](double x) { return std::exp(outer_log(mod, x, 0.0)); });
    save_signal(a.boundary_csv, hb);
  }
  run.emit(json{{"config", run.config(nullptr)},
                {"outer",
                 {{"log_integral", mod.log_integral},
                  {"kernel_offset", mod.kernel_offset},
                  {"poisson_integrable", mod.flag == Integrability::poisson_integrable},
                  {"points", pts}}}});
  return 0;
}

struct OscillateArgs {
  std::string context = "cantor", n_list = "3,4,5,6,7,8";
  int levels = 8, grid_log2 = 16, density = 0;
  double gamma = 0.07, p = 2.5, c_exponent = 0.5, right = 0.5;
};

int run_oscillate(const Run& run, const OscillateArgs& a) {
  ResidualContext ctx;
  if (a.context == "cantor") ctx = cantor_residual_context(a.levels, a.gamma, a.p, a.grid_log2);
  else if (a.context == "interval") ctx = interval_residual_context(a.right, a.p);
  else fail(ErrorKind::invalid_argument, "--context must be cantor or interval");
  std::vector<int> ns;
  std::vector<double> cs;
  for (double v : parse_list(a.n_list, "--n")) {
    if (v < 1.0 || v != std::floor(v)) fail(ErrorKind::invalid_argument, "--n takes positive integers");
    ns.push_back(static_cast<int>(v));
    cs.push_back(std::exp2(-a.c_exponent * v));
  }
  const SplittingReport r = splitting_conditions_report(ctx, ns, cs);
  json out{{"config", run.config(nullptr)}, {"splitting", splitting_to_json(r)}};
  if (a.density > 0) out["density"] = density_to_json(build_oscillating_density(ctx, a.density, std::exp2(-a.c_exponent * a.density)));
  run.emit(out);
  return 0;
}

struct BuildEArgs {
  WeightArgs weight;
  double A = 1.0, C = 1.0, margin = 1.0;
  int depth = 8;
  std::string lengths;
};

int run_build_e(const Run& run, const BuildEArgs& a) {
  const ConcaveWeight M = a.weight.build();
  CantorSpec spec;
  if (a.lengths.empty()) {
    spec = build_cantor_set(a.A, M, a.C, a.depth, a.margin);
  } else {
    spec = build_cantor_set(a.A, parse_list(a.lengths, "--lengths"));
    record_clump_budget(spec, M, a.C);
  }
  json j = cantor_to_json(spec);
  j["weight"] = weight_to_json(M);
  j["C"] = a.C;
  j["checks"] = {{"length_sum_le_half", spec.length_sum <= spec.A / 2.0},
                 {"measure_ge_half", spec.measure >= spec.A / 2.0},
                 {"budget_finite", std::isfinite(spec.budget_sum)}};
  j["config"] = run.config(nullptr);
  run.emit(j);
  return 0;
}

struct ImBoundArgs {
  WeightArgs weight;
  std::string ys = "0.2,0.1,0.05,0.01";
  double delta = 0.5, X = 0x1p40;
};

int run_im_bound(const Run& run, const ImBoundArgs& a) {
  const ConcaveWeight M = a.weight.build();
  json rows = json::array();
  bool all = true;
  for (double y : parse_list(a.ys, "--ys")) {
    const LaplaceTail t = laplace_tail_integral(M, y);
    json row = laplace_tail_to_json(t);
    row["y"] = y;
    row["K"] = M.K(y);
    row["Mstar"] = M.Mstar(y);
    row["K_le_inverse_square"] = M.K(y) <= 1.0 / (y * y);
    rows.push_back(row);
    all = all && t.holds;
  }
  run.emit(json{{"config", run.config(nullptr)},
                {"weight", weight_to_json(M)},
                {"weight_check", weight_check_to_json(check_weight(M))},
                {"laplace_tail", rows},
                {"all_hold", all},
                {"dual_integrability", dual_integrability_to_json(dual_integrability_check(M, a.delta, a.X))}});
  return 0;
}

struct HmArgs {
  WeightArgs weight;
  std::string spec, z = "0.5,0.3", target = "whole", window, boundary_csv;
  double height = 0.5, C = 1.0;
  std::size_t paths = 100000, max_steps = 100000;
  bool khrushchev = false;
};

int run_hm(const Run& run, const HmArgs& a) {
  const json sj = read_json_file(a.spec);
  const CantorSpec spec = cantor_from_json(sj);
  const TentDomain dom = build_tent_domain(spec, a.height);
  const auto zv = parse_list(a.z, "--z");
  if (zv.size() != 2) fail(ErrorKind::invalid_argument, "--z expects x,y");
  const HalfPlanePoint z = make_point(zv[0], zv[1]);

  WalkOptions w;
  w.n_paths = a.paths;
  w.seed = run.g.seed;
  w.max_steps = a.max_steps;
  w.eps = run.tolerance_or(w.eps);

  HarmonicTarget target;
  if (a.target == "whole") {
    target = HarmonicTarget::whole_boundary();
  } else if (a.target == "tents") {
    target = HarmonicTarget::tagged({BoundaryTag::tent_side});
  } else if (a.target == "tent-window") {
    const Interval I = parse_interval(a.window, "--window");
    target = HarmonicTarget::tent_side_window(I.lo, I.hi);
  } else if (a.target == "base") {
    target = a.window.empty() ? HarmonicTarget::tagged({BoundaryTag::e_base})
                              : HarmonicTarget::base_subset(spec.E.intersect(parse_interval(a.window, "--window")));
  } else {
    fail(ErrorKind::invalid_argument, "--target must be whole, tents, tent-window or base");
  }

  json out{{"config", run.config(w.eps)},
           {"domain", tent_domain_to_json(dom)},
           {"z", {{"x", z.x}, {"y", z.y}}},
           {"harmonic_measure", harmonic_to_json(harmonic_measure_mc(dom, z, target, w))}};
  if (a.khrushchev) {
    const ConcaveWeight M = sj.contains("weight") && a.weight.family.empty() ? weight_from_json(sj["weight"]) : a.weight.build();
    out["weight"] = weight_to_json(M);
    out["khrushchev"] = khrushchev_to_json(khrushchev_budget_sum(dom, z, M, a.C, w));
  }
  if (!a.boundary_csv.empty()) write_boundary_csv(dom, a.boundary_csv);
  run.emit(out);
  return 0;
}

struct CondenseArgs {
  LatticeArgs lattice;
  std::string in, sizes = "8,16,32,64";
  double c = 1.0;
};

int run_condense(const Run& run, const CondenseArgs& a) {
  const Signal f = load_signal(a.in);
  const TrendReport r = condensation_experiment(f, a.c, parse_sizes(a.sizes), a.lattice.build());
  run.emit(json{{"config", run.config(nullptr)}, {"trend", trend_to_json(r)}});
  return 0;
}

struct SubSparseArgs {
  LatticeArgs lattice;
  WeightArgs weight;
  std::string spec, k = "exp", sizes = "8,16,32,64", x_grid, zeta_grid;
};

int run_subspace_sparse(const Run& run, const SubSparseArgs& a) {
  const json sj = read_json_file(a.spec);
  const CantorSpec spec = cantor_from_json(sj);
  // The weight recorded with the set wins unless --weight was given.
  const bool explicit_weight = a.weight.family != "";
  const ConcaveWeight M = explicit_weight || !sj.contains("weight") ? a.weight.build() : weight_from_json(sj["weight"]);
  ExperimentGrids grids;
  if (!a.x_grid.empty()) grids.x = parse_grid(a.x_grid, "--x-grid");
  if (!a.zeta_grid.empty()) grids.zeta = parse_grid(a.zeta_grid, "--zeta-grid");
  const TrendReport r = sparseness_experiment(spec, M, spectral_target(a.k), parse_sizes(a.sizes), a.lattice.build(), grids);
  run.emit(json{{"config", run.config(nullptr)},
                {"weight", weight_to_json(M)},
                {"grids", {{"x", grid_to_json(grids.x)}, {"zeta", grid_to_json(grids.zeta)}}},
                {"trend", trend_to_json(r)}});
  return 0;
}

struct CyclicArgs {
  std::string in, w, target, sizes = "8,16,32";
  double s_step = std::numbers::pi;
};

int run_cyclic(const Run& run, const CyclicArgs& a) {
  const Signal f = load_signal(a.in);
  const RealSignal w = real_part(load_signal(a.w));
  const Signal target = load_signal(a.target);
  const auto sizes = parse_sizes(a.sizes);
  std::vector<double> s_grid;
  for (std::size_t m = 1; m <= sizes.back(); ++m) s_grid.push_back(a.s_step * static_cast<double>(m));
  const TrendReport r = cyclicity_experiment(f, w, target, s_grid, sizes);
  run.emit(json{{"config", run.config(nullptr)}, {"trend", trend_to_json(r)}});
  return 0;
}

struct MultiplierArgs {
  std::string in, fhat, zeta_grid = "0,0.01,40001";
  int n = 2, probe_count = 64, depth = 8;
  double probe_start = 1.0, a_threshold = 0.45;
};

int run_multiplier(const Run& run, const MultiplierArgs& a) {
  TemperedInput input{load_signal(a.in), a.n, std::nullopt};
  if (!a.fhat.empty()) input.fhat = load_signal(a.fhat);
  DecayCheckOptions d;
  d.probe_start = a.probe_start;
  d.probe_count = a.probe_count;
  d.a_threshold = a.a_threshold;
  d.relative_floor = run.tolerance_or(d.relative_floor);
  ClumpOptions c;
  c.depth = a.depth;
  const PipelineReport r = distributional_clump_pipeline(input, parse_grid(a.zeta_grid, "--zeta-grid"), d, c);
  run.emit(json{{"config", run.config(d.relative_floor)}, {"pipeline", pipeline_to_json(r)}});
  return 0;
}

int exit_code(ErrorKind k) {
  return k == ErrorKind::hypothesis_not_met || k == ErrorKind::divergent_log_integral ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clumplab: Fourier-side experiments on clumps, sparse sets and Hardy subspaces"};
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  double tolerance = NAN;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", tolerance, "numerical tolerance of the command (see README)");
  app.add_option("--out", g.out, "output file (stdout when empty)");
  app.add_option("--config", g.config, "JSON config: {\"command\": ..., \"options\": {...}}");

  std::map<const CLI::App*, std::function<int(const Run&)>> handlers;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, auto& args, auto fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    handlers[sub] = [&args, fn](const Run& r) { return fn(r, args); };
    return sub;
  };

  TransformArgs ta;
  auto* t = leaf(&app, "transform", "forward or inverse Fourier transform of a signal file", ta, run_transform);
  opt(t, "--in", ta.in, "signal file (.csv or .json)")->required();
  opt(t, "--grid", ta.grid, "output grid start,step,count")->required();
  opt(t, "--method", ta.method, "auto | direct | chirp");
  t->add_flag("--inverse", ta.inverse, "inverse transform");

  DecayArgs da;
  auto* d = leaf(&app, "decay", "one-sided tail mass profile and stretched-exponential fit", da, run_decay);
  opt(d, "--in", da.in, "signal file")->required();
  opt(d, "--from", da.from, "first probe point");
  opt(d, "--to", da.to, "last probe point (0: grid end)");
  opt(d, "--count", da.count, "probe points");

  ClumpArgs ca;
  auto* c = leaf(&app, "clumps", "dyadic clump detection", ca, run_clumps);
  opt(c, "--in", ca.in, "signal file")->required();
  opt(c, "--depth", ca.depth, "dyadic depth");
  opt(c, "--cutoffs", ca.cutoffs, "truncation ladder");
  opt(c, "--floor", ca.floor, "relative floor");
  opt(c, "--format", ca.format, "json | table");

  OuterArgs oa;
  auto* o = leaf(&app, "outer", "outer function with the given boundary modulus", oa, run_outer);
  opt(o, "--in", oa.in, "modulus W as a signal file (real part used)")->required();
  opt(o, "--outside", oa.outside, "W beyond the grid");
  opt(o, "--points", oa.points, "evaluation points x,y;x,y;...");
  opt(o, "--boundary-csv", oa.boundary_csv, "write boundary values on W's grid");

  OscillateArgs osa;
  auto* os = leaf(&app, "oscillate", "oscillating-density construction and its splitting conditions", osa, run_oscillate);
  opt(os, "--context", osa.context, "cantor | interval");
  opt(os, "--levels", osa.levels, "fat Cantor levels");
  opt(os, "--gamma", osa.gamma, "relative gap length");
  opt(os, "--p", osa.p, "exponent p > 2");
  opt(os, "--grid-log2", osa.grid_log2, "grid step 2^-k");
  opt(os, "--right", osa.right, "interval context: F = [0, right]");
  opt(os, "--n", osa.n_list, "levels n");
  opt(os, "--c-exponent", osa.c_exponent, "c_n = 2^(-e n)");
  opt(os, "--density", osa.density, "also emit the density for this n");

  CLI::App* sparse = app.add_subcommand("sparse", "sparse sets, concave weights, harmonic measure");
  sparse->require_subcommand(1);

  BuildEArgs ba;
  auto* b = leaf(sparse, "build-e", "build a Cantor-type set under a clump budget", ba, run_build_e);
  ba.weight.attach(b);
  opt(b, "--A", ba.A, "set length");
  opt(b, "--depth", ba.depth, "stages");
  opt(b, "--C", ba.C, "energy constant");
  opt(b, "--margin", ba.margin, "budget margin");
  opt(b, "--lengths", ba.lengths, "explicit gap lengths L_1,...,L_depth");

  ImBoundArgs ia;
  auto* im = leaf(sparse, "im-bound", "Laplace tail bound and dual integrability of a weight", ia, run_im_bound);
  ia.weight.attach(im);
  opt(im, "--ys", ia.ys, "probe heights in (0,1)");
  opt(im, "--delta", ia.delta, "dual ladder start");
  opt(im, "--X", ia.X, "derivative ladder end");

  HmArgs ha;
  auto* hm = leaf(sparse, "hm", "walk-on-spheres harmonic measure on the tent domain", ha, run_hm);
  ha.weight.family = "";
  ha.weight.attach(hm);
  opt(hm, "--spec", ha.spec, "Cantor spec JSON from build-e")->required();
  opt(hm, "--height", ha.height, "domain height");
  opt(hm, "--z", ha.z, "start point x,y");
  opt(hm, "--target", ha.target, "whole | tents | tent-window | base");
  opt(hm, "--window", ha.window, "lo,hi for tent-window or base");
  opt(hm, "--paths", ha.paths, "walks");
  opt(hm, "--max-steps", ha.max_steps, "step cap per walk");
  opt(hm, "--C", ha.C, "energy constant for the budget sum");
  hm->add_flag("--khrushchev", ha.khrushchev, "also estimate the budget sum over the tents");
  opt(hm, "--boundary-csv", ha.boundary_csv, "write the boundary polyline");

  CLI::App* sub = app.add_subcommand("subspace", "distance trends in Hardy subspaces");
  sub->require_subcommand(1);

  CondenseArgs cda;
  auto* cd = leaf(sub, "condense", "distance from the residual indicator", cda, run_condense);
  cda.lattice.attach(cd);
  opt(cd, "--in", cda.in, "signal file")->required();
  opt(cd, "--c", cda.c, "rho = exp(-c sqrt(zeta))");
  opt(cd, "--sizes", cda.sizes, "basis sizes");

  SubSparseArgs ssa;
  auto* ss = leaf(sub, "sparse", "spectral target against w = 1_E, rho = exp(-M)", ssa, run_subspace_sparse);
  ssa.lattice.attach(ss);
  ssa.weight.family = "";
  ssa.weight.attach(ss);
  opt(ss, "--spec", ssa.spec, "Cantor spec JSON from build-e")->required();
  opt(ss, "--k", ssa.k, "exp | gauss | rational");
  opt(ss, "--sizes", ssa.sizes, "basis sizes");
  opt(ss, "--x-grid", ssa.x_grid, "x grid start,step,count");
  opt(ss, "--zeta-grid", ssa.zeta_grid, "zeta grid start,step,count");

  CyclicArgs cya;
  auto* cy = leaf(sub, "cyclic", "distance to modulations of f in L^2(w)", cya, run_cyclic);
  opt(cy, "--in", cya.in, "signal file f")->required();
  opt(cy, "--w", cya.w, "weight w as a signal file")->required();
  opt(cy, "--target", cya.target, "target signal file")->required();
  opt(cy, "--sizes", cya.sizes, "numbers of modulations");
  opt(cy, "--s-step", cya.s_step, "modulation step");

  MultiplierArgs ma;
  auto* mu = leaf(&app, "multiplier", "tempered multiplier, decay check and clumps of m f", ma, run_multiplier);
  opt(mu, "--in", ma.in, "signal file")->required();
  opt(mu, "--fhat", ma.fhat, "known transform on [0, inf)");
  opt(mu, "--n", ma.n, "growth order");
  opt(mu, "--zeta-grid", ma.zeta_grid, "spectral grid starting at 0");
  opt(mu, "--probe-start", ma.probe_start, "first decay probe");
  opt(mu, "--probe-count", ma.probe_count, "decay probes");
  opt(mu, "--a-threshold", ma.a_threshold, "required stretched exponent");
  opt(mu, "--depth", ma.depth, "clump depth");

  // Pull the config file in ahead of the command-line arguments so the latter override it.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      std::size_t drop = 0;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        drop = 2;
      } else if (args[i].starts_with("--config=")) {
        path = args[i].substr(9);
        drop = 1;
      }
      if (drop == 0) continue;
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + drop));
      auto expanded = expand_config(read_json_file(path));
      expanded.insert(expanded.end(), args.begin(), args.end());
      args = std::move(expanded);
      break;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (std::isfinite(tolerance)) {
      if (!(tolerance > 0.0)) fail(ErrorKind::invalid_argument, "--tolerance must be positive");
      g.tolerance = tolerance;
    }
    set_thread_count(g.threads);

    Run run;
    run.app = &app;
    run.g = g;
    const CLI::App* node = &app;
    while (!node->get_subcommands().empty()) {
      node = node->get_subcommands().front();
      run.command += (run.command.empty() ? "" : " ") + node->get_name();
    }
    run.leaf = node;
    const auto it = handlers.find(node);
    if (it == handlers.end()) fail(ErrorKind::invalid_argument, "incomplete command '" + run.command + "'");
    return it->second(run);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
