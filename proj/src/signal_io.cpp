#include "clumplab/signal_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "clumplab/error.hpp"

namespace clumplab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json cplx_json(cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }
cplx cplx_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_signal_csv(std::ostream& out, const Signal& s) {
  out << "x,re,im\n";
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    out << fmt(s.x(j)) << ',' << fmt(s.values[j].real()) << ',' << fmt(s.values[j].imag()) << '\n';
  }
}

Signal read_signal_csv(std::istream& in) {
  std::string line;
  std::vector<double> xs;
  std::vector<cplx> vs;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_of("0123456789") != 0 && line[0] != '-' && line[0] != '.') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cols;
    while (std::getline(ss, cell, ',')) {
      try {
        cols.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::invalid_input, "csv line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
      }
    }
    if (cols.size() < 2) fail(ErrorKind::invalid_input, "csv line " + std::to_string(lineno) + ": expected x,re[,im]");
    xs.push_back(cols[0]);
    vs.emplace_back(cols[1], cols.size() > 2 ? cols[2] : 0.0);
  }
  if (xs.size() < 2) fail(ErrorKind::invalid_input, "csv signal needs at least 2 rows");
  const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double expect = xs.front() + static_cast<double>(j) * step;
    if (std::abs(xs[j] - expect) > 1e-6 * std::max(1.0, std::abs(step))) {
      fail(ErrorKind::invalid_input, "csv x column is not uniformly spaced near row " + std::to_string(j + 1));
    }
  }
  const Grid g = make_grid(xs.front(), step, static_cast<Eigen::Index>(xs.size()));
  Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  return {g, v, {}};
}

nlohmann::json grid_to_json(const Grid& g) { return {{"start", g.start}, {"step", g.step}, {"count", g.count}}; }

Grid grid_from_json(const nlohmann::json& j) {
  return make_grid(j.at("start").get<double>(), j.at("step").get<double>(), j.at("count").get<Eigen::Index>());
}

nlohmann::json tail_to_json(const TailModel& t) {
  switch (t.kind) {
    case TailModel::Kind::none:
      return "none";
    case TailModel::Kind::exponential:
      return {{"kind", "exponential"}, {"rate_left", t.rate_left}, {"rate_right", t.rate_right}};
    case TailModel::Kind::rational_power: {
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& r : t.terms) {
        terms.push_back({{"coefficient", cplx_json(r.coefficient)},
                         {"pole", cplx_json(r.pole)},
                         {"exponent", r.exponent},
                         {"frequency", r.frequency}});
      }
      return {{"kind", "rational-power"}, {"terms", terms}};
    }
  }
  return "none";
}

TailModel tail_from_json(const nlohmann::json& j) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "none")) return {};
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return {};
  if (kind == "exponential") {
    if (j.contains("rate")) return TailModel::exponential(j.at("rate").get<double>());
    return TailModel::exponential(j.value("rate_left", 0.0), j.value("rate_right", 0.0));
  }
  if (kind == "rational-power") {
    std::vector<RationalTerm> terms;
    for (const auto& r : j.at("terms")) {
      terms.push_back({cplx_from(r.at("coefficient")), cplx_from(r.at("pole")), r.at("exponent").get<int>(),
                       r.value("frequency", 0.0)});
    }
    return TailModel::rational(std::move(terms));
  }
  fail(ErrorKind::invalid_input, "unknown tail model kind '" + kind + "'");
}

nlohmann::json signal_to_json(const Signal& s) {
  nlohmann::json values = nlohmann::json::array();
  for (Eigen::Index j = 0; j < s.size(); ++j) values.push_back(cplx_json(s.values[j]));
  return {{"grid", grid_to_json(s.grid)}, {"values", values}, {"tail_model", tail_to_json(s.tail)}};
}

Signal signal_from_json(const nlohmann::json& j) {
  const Grid g = grid_from_json(j.at("grid"));
  const auto& vals = j.at("values");
  if (static_cast<Eigen::Index>(vals.size()) != g.count) {
    fail(ErrorKind::invalid_input, "values length " + std::to_string(vals.size()) + " does not match grid count " +
                                       std::to_string(g.count));
  }
  Eigen::VectorXcd v(g.count);
  for (Eigen::Index k = 0; k < g.count; ++k) {
    const auto& e = vals.at(static_cast<std::size_t>(k));
    v[k] = e.is_array() ? cplx_from(e) : cplx(e.get<double>(), 0.0);
  }
  return {g, v, tail_from_json(j.value("tail_model", nlohmann::json("none")))};
}

Signal load_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_input, "cannot open signal file '" + path + "'");
  if (ends_with(path, ".json")) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::invalid_input, "'" + path + "' is not valid JSON: " + e.what());
    }
    return signal_from_json(j);
  }
  return read_signal_csv(in);
}

void save_signal(const std::string& path, const Signal& s) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::invalid_input, "cannot write '" + path + "'");
  if (ends_with(path, ".json")) {
    out << signal_to_json(s).dump(2) << '\n';
  } else {
    write_signal_csv(out, s);
  }
}

}  // namespace clumplab
