#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"

#include "clumplab/error.hpp"
#include "clumplab/report_json.hpp"

using namespace clumplab;

TEST_CASE("Cantor spec survives a JSON round trip") {
  const CantorSpec spec = build_cantor_set(1.0, fixtures::geometric_lengths(3));
  const auto j = cantor_to_json(spec);
  CHECK(j["budget_sum"].is_null());  // NaN without a weight
  const CantorSpec back = cantor_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.L == spec.L);
  CHECK(back.E.intervals() == spec.E.intervals());
  CHECK(back.measure == spec.measure);
  CHECK_THROWS_AS(cantor_from_json(nlohmann::json{{"A", 1.0}}), Error);
}

TEST_CASE("weights survive a JSON round trip") {
  WeightParams p;
  p.exponent = 0.25;
  p.scale = 0.5;
  const ConcaveWeight w = make_concave_weight(WeightFamily::power, p);
  const ConcaveWeight back = weight_from_json(nlohmann::json::parse(weight_to_json(w).dump()));
  CHECK(back.family() == WeightFamily::power);
  for (double x : {0.5, 10.0, 1e6}) CHECK(back.M(x) == w.M(x));

  const ConcaveWeight sol = weight_from_json(nlohmann::json{{"family", "sqrt-over-log"}});
  CHECK(sol.params().splice == doctest::Approx(std::exp(3.0)));
  CHECK_THROWS_AS(weight_from_json(nlohmann::json{{"family", "cubic"}}), Error);
  CHECK_THROWS_AS(weight_from_json(nlohmann::json{{"family", "sqrt-over-log"}, {"splice", std::exp(2.0)}}), Error);
}

TEST_CASE("interval lists and trend reports") {
  const IntervalCollection c{{0.0, 1.0}, {2.0, 3.0}};
  CHECK(intervals_from_json(intervals_to_json(c)).intervals() == c.intervals());
  CHECK_THROWS_AS(intervals_from_json(nlohmann::json{{1.0, 2.0, 3.0}}), Error);

  TrendReport r;
  r.sizes = {4, 8};
  r.distances = {0.5, NAN};
  const auto j = trend_to_json(r);
  CHECK(j["basis_size"] == nlohmann::json{4, 8});
  CHECK(j["distance"][1].is_null());
}
