#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "corpus.hpp"
#include "doctest.h"
#include "fixtures.hpp"

#include "clumplab/error.hpp"
#include "clumplab/subspace.hpp"
#include "clumplab/transform.hpp"

using namespace clumplab;

namespace {

using fixtures::fat_cantor;

ProductSpace unit_space(const std::function<double(double)>& rho, const Grid& zeta = make_grid(0.0, 0.01, 4001)) {
  const Grid x = make_grid(0.0, 1.0 / 2048, 2049);
  return make_product_space(x, indicator_weights(x, IntervalCollection{{0.0, 1.0}}), zeta, spectral_weights(zeta, rho));
}

double max_diff(const Signal& a, const Signal& b) { return (a.values - b.values).cwiseAbs().maxCoeff(); }

CantorSpec geometric_spec(int depth) {
  std::vector<double> L;
  for (int n = 1; n <= depth; ++n) L.push_back(std::pow(8.0, -n));
  return build_cantor_set(1.0, L);
}

const auto exp_k = [](double z) { return cplx(std::exp(-z)); };

}  // namespace

TEST_CASE("indicator weights keep sub-cell measure") {
  const Grid x = make_grid(0.0, 0.25, 5);
  const Eigen::VectorXd w = indicator_weights(x, IntervalCollection{{0.1, 0.2}, {0.3, 0.9}});
  CHECK(std::abs(w.sum() - 0.7) < 1e-15);
  CHECK(std::abs(w[0] - 0.025) < 1e-15);  // cell [0, 0.125]
  CHECK(std::abs(w[1] - 0.15) < 1e-15);   // [0.125, 0.2] and [0.3, 0.375]
}

TEST_CASE("embedding psi_i") {
  const Grid g = corpus::cauchy_grid();
  const Signal f = sample<cplx>(g, corpus::psi_i, corpus::psi_i_tail());
  const Grid x = make_grid(-1.0, 0.01, 201);  // nodes of the Cauchy grid, so no interpolation
  const Grid zeta = make_grid(0.0, 0.01, 1001);
  const auto space = make_product_space(x, x.trapezoid_weights(), zeta, zeta.trapezoid_weights());
  const ProductTuple t = embed(space, f);
  for (Eigen::Index j = 0; j < x.count; ++j) CHECK(std::abs(t.h.values[j] - corpus::psi_i(x.point(j))) < 1e-12);
  // node 0 holds the right limit of the jump
  CHECK(std::abs(t.k.values[0] - 1.0) < 1e-3);
  for (Eigen::Index j = 1; j < zeta.count; ++j) CHECK(std::abs(t.k.values[j] - std::exp(-zeta.point(j))) < 1e-3);

  // the closed-form element at i agrees with the numerical embedding
  BasisSpec b;
  b.nodes = {{0.0, 1.0}};
  const ProductTuple e = embed(space, b.element(0));
  CHECK(max_diff(e.h, t.h) < 1e-12);
  CHECK(std::abs(e.k.values[0] - 1.0) < 1e-15);
  for (Eigen::Index j = 0; j < zeta.count; ++j) CHECK(std::abs(e.k.values[j] - t.k.values[j]) < 1e-3);
}

TEST_CASE("embedding is linear and zero maps to zero") {
  const Grid g = corpus::corpus_grid();
  const auto space = unit_space([](double z) { return std::exp(-std::sqrt(z)); });
  const auto corpus_signals = corpus::schwartz_corpus();
  const Signal f = sample<cplx>(g, corpus_signals[0].f), h = sample<cplx>(g, corpus_signals[1].f);
  const cplx a{0.3, -1.7};
  const Signal combo(g, a * f.values + h.values);
  const ProductTuple tf = embed(space, f), th = embed(space, h), tc = embed(space, combo);
  CHECK(max_diff(tc.h, Signal(space.x, a * tf.h.values + th.h.values)) < 1e-12);
  CHECK(max_diff(tc.k, Signal(space.zeta, a * tf.k.values + th.k.values)) < 1e-12);

  const ProductTuple z = embed(space, Signal(g, Signal::Vector::Zero(g.count)));
  CHECK(norm(space, z) == 0.0);
  CHECK(norm(space, zero_tuple(space)) == 0.0);
}

TEST_CASE("shift is a contraction for decreasing rho") {
  const auto space = unit_space([](double z) { return std::exp(-std::sqrt(z)); });
  ProductTuple t = zero_tuple(space);
  t.h = sample<cplx>(space.x, corpus::psi_i);
  t.k = sample<cplx>(space.zeta, exp_k);
  for (double s : {0.01, 0.37, 1.0, 5.0}) {
    const ProductTuple u = shift_tuple(space, t, s);
    CHECK(norm(space, u) <= norm(space, t));
    // the x part only changes phase
    CHECK(std::abs(u.h.values.norm() - t.h.values.norm()) < 1e-12);
  }
  const ProductTuple u = shift_tuple(space, t, 1.0);
  CHECK(u.k.values[99] == 0.0);
  CHECK(std::abs(u.k.values[150] - std::exp(-0.5)) < 1e-12);
}

TEST_CASE("shift intertwines with modulation") {
  const auto space = unit_space([](double z) { return std::exp(-z); });
  BasisSpec plain;
  plain.nodes = {{0.0, 1.0}, {0.5, 0.25}, {0.2, 0.05}};
  BasisSpec mollified = plain;
  mollified.epsilon = 0.3;
  for (const BasisSpec* b : {&plain, &mollified}) {
    for (std::size_t j = 0; j < b->size(); ++j) {
      for (double s : {0.5, 1.0, 3.0}) {
        BasisElement e = b->element(j);
        const ProductTuple shifted = shift_tuple(space, embed(space, e), s);
        e.s = s;
        const ProductTuple direct = embed(space, e);
        CHECK(max_diff(shifted.h, direct.h) < 1e-6);
        CHECK(max_diff(shifted.k, direct.k) < 1e-6);
      }
    }
  }
}

TEST_CASE("shift tends to the identity as s goes to 0") {
  const auto space = unit_space([](double z) { return std::exp(-std::sqrt(z)); });
  BasisSpec b;
  b.nodes = {{0.3, 0.2}};
  const ProductTuple t = embed(space, b.element(0));
  // below one grid step node 0 falls left of the jump and is zeroed; the rest converges
  double prev = INFINITY;
  for (double s : {1e-1, 1e-2, 1e-4, 1e-8}) {
    const ProductTuple u = shift_tuple(space, t, s);
    ProductTuple d = u;
    d.h.values -= t.h.values;
    d.k.values -= t.k.values;
    d.k.values[0] = 0.0;
    const double gap = norm(space, d);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-6);
  CHECK(shift_tuple(space, t, 1e-8).k.values[0] == 0.0);
  CHECK_THROWS_AS(shift_tuple(space, t, 0.0), Error);
  CHECK_THROWS_AS(shift_tuple(space, t, -1.0), Error);
}

TEST_CASE("Plancherel consistency of the embedding") {
  const Grid g = corpus::corpus_grid();
  const Grid x = make_grid(-20.0, 0.02, 2001);
  const Grid zeta = make_grid(0.0, 0.01, 2001);
  const auto space = make_product_space(x, x.trapezoid_weights(), zeta, zeta.trapezoid_weights());
  for (const auto& s : corpus::schwartz_corpus()) {
    CAPTURE(s.name);
    const Signal f = sample<cplx>(g, s.f);
    const Signal reflected = sample<cplx>(g, [&](double t) { return s.f(-t); });
    const ProductTuple pos = embed(space, f), neg = embed(space, reflected);
    const double hx = (pos.h.values.cwiseAbs2().array() * space.wx.array()).sum();
    const double kpos = (pos.k.values.cwiseAbs2().array() * space.wz.array()).sum();
    const double kneg = (neg.k.values.cwiseAbs2().array() * space.wz.array()).sum();
    CHECK(std::abs(hx - (kpos + kneg)) < 1e-6 * hx);
  }
}

TEST_CASE("member of the span has distance zero") {
  const auto space = unit_space([](double z) { return std::exp(-std::sqrt(z)); });
  const BasisSpec basis = lattice_basis(8);
  const ProductTuple target = embed(space, basis.element(0));
  const DistanceResult r = subspace_distance(space, target, basis);
  CHECK(r.distance < 1e-8);
  CHECK(std::abs(r.target_norm - norm(space, target)) < 1e-12);

  const DistanceResult z = subspace_distance(space, zero_tuple(space), basis);
  CHECK(z.distance == 0.0);
  CHECK(z.target_norm == 0.0);
}

TEST_CASE("one-element projection matches the oracle") {
  // a smooth rho keeps the trapezoid error of the spectral half at O(step^2)
  const auto space = unit_space([](double z) { return std::exp(-z); }, make_grid(0.0, 0.005, 80001));
  ProductTuple target = zero_tuple(space);
  target.h = sample<cplx>(space.x, corpus::psi_i);
  target.k = sample<cplx>(space.zeta, exp_k);
  BasisSpec b;
  b.nodes = {{0.5, 0.25}};
  const DistanceResult r = subspace_distance(space, target, b);
  // mpmath with exact integrals; the gap is the trapezoid error of the two grids
  CHECK(std::abs(r.target_norm - 0.677003200386330030) < 1e-5);
  CHECK(std::abs(r.distance - 0.403484971989827583) < 1e-5);

  // the same number from the Gram system
  const GramSystem g = gram_system(space, target, b);
  const double n2 = r.target_norm * r.target_norm;
  CHECK(std::abs(std::sqrt(n2 - std::norm(g.rhs[0]) / g.gram(0, 0).real()) - r.distance) < 1e-10);
}

TEST_CASE("Gram matrix is Hermitian PSD and distances do not grow") {
  const auto space = unit_space([](double z) { return std::exp(-std::sqrt(z)); });
  const BasisSpec basis = lattice_basis(24);
  ProductTuple target = zero_tuple(space);
  target.k = sample<cplx>(space.zeta, exp_k);
  const GramSystem g = gram_system(space, target, basis);
  CHECK((g.gram - g.gram.adjoint()).norm() < 1e-12 * g.gram.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g.gram, Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues().minCoeff() > -1e-12 * eig.eigenvalues().maxCoeff());

  const auto trend = distance_trend(space, target, basis, {1, 2, 4, 8, 16, 24});
  for (std::size_t i = 0; i < trend.size(); ++i) {
    CHECK(trend[i].distance >= 0.0);
    CHECK(trend[i].distance <= trend[i].target_norm * (1 + 1e-12));
    if (i > 0) CHECK(trend[i].distance <= trend[i - 1].distance * (1 + 1e-9));
  }
}

TEST_CASE("lattice basis layout") {
  LatticeOptions o;
  o.window = {2.0, 4.0};
  const BasisSpec b = lattice_basis(6, o);
  REQUIRE(b.size() == 6);
  CHECK(b.kind == BasisKind::modulated_cauchy);
  CHECK(b.nodes[0].x == 2.0);
  CHECK(b.nodes[0].y == 2.0);
  CHECK(b.modulations[0] == 0.0);
  CHECK(b.nodes[1].x == 2.125);
  CHECK(b.nodes[1].y == 0.25);
  CHECK(b.nodes[2].x == 3.0);
  CHECK(b.nodes[2].y == 1.0);
  CHECK(std::abs(b.modulations[2] - std::numbers::pi) < 1e-15);
  CHECK(std::abs(b.modulations[4] - 2 * std::numbers::pi) < 1e-15);
  // prefixes are nested
  const BasisSpec p = b.prefix(3);
  CHECK(p.size() == 3);
  CHECK(p.modulations.size() == 3);
  CHECK(p.nodes[2].x == b.nodes[2].x);
}

TEST_CASE("subspace errors") {
  const auto space = unit_space([](double z) { return std::exp(-z); });
  BasisSpec empty;
  CHECK_THROWS_AS(subspace_distance(space, zero_tuple(space), empty), Error);
  BasisSpec bad;
  bad.nodes = {{0.0, 0.0}};
  CHECK_THROWS_AS(validate_basis(bad), Error);
  BasisSpec mismatch;
  mismatch.kind = BasisKind::modulated_cauchy;
  mismatch.nodes = {{0.0, 1.0}};
  CHECK_THROWS_AS(validate_basis(mismatch), Error);

  // a space that sees nothing leaves only the zero tuple
  const Grid x = make_grid(0.0, 0.5, 3), zeta = make_grid(0.0, 1.0, 3);
  const auto blind = make_product_space(x, Eigen::VectorXd::Zero(3), zeta, Eigen::VectorXd::Zero(3));
  BasisSpec one;
  one.nodes = {{0.0, 1.0}};
  try {
    subspace_distance(blind, zero_tuple(blind), one);
    FAIL("expected degenerate input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_input);
  }
  CHECK_THROWS_AS(make_product_space(x, Eigen::VectorXd::Zero(3), make_grid(1.0, 1.0, 3), Eigen::VectorXd::Zero(3)), Error);
  CHECK_THROWS_AS(distance_trend(space, zero_tuple(space), lattice_basis(4), {4, 2}), Error);
  CHECK_THROWS_AS(distance_trend(space, zero_tuple(space), lattice_basis(4), {8}), Error);
}

TEST_CASE("condensation on a fat Cantor set") {
  const IntervalCollection E = fat_cantor(8, 0.07);
  const Grid g = make_grid(0.0, std::ldexp(1.0, -16), (1 << 16) + 1);
  const Signal f = sample<cplx>(g, [&](double x) { return E.contains(x) ? 1.0 : 0.0; });
  const TrendReport r = condensation_experiment(f, 1.0, {4, 8, 16, 32, 64});
  CHECK_FALSE(r.vacuous);
  CHECK(r.strictly_decreasing);
  CHECK(r.final_ratio < r.distances.front() / r.target_norm);

  const Grid b = make_grid(-0.5, 1.0 / 1024, 2049);
  const Signal box = sample<cplx>(b, [](double x) { return x >= 0 && x <= 1 ? 1.0 : 0.0; });
  const TrendReport v = condensation_experiment(box, 1.0, {4, 8});
  CHECK(v.vacuous);
  CHECK(v.distances == std::vector<double>{0.0, 0.0});
}

TEST_CASE("sparse spectral target keeps its distance") {
  const CantorSpec spec = geometric_spec(6);
  const ConcaveWeight M = make_concave_weight(WeightFamily::sqrt_over_log);
  const TrendReport r = sparseness_experiment(spec, M, exp_k, {8, 16, 32, 64});
  CHECK_FALSE(r.vacuous);
  CHECK(r.floor_ratio > 0.1);
  CHECK(r.floor == r.distances.back());

  const TrendReport z = sparseness_experiment(spec, M, [](double) { return cplx(0.0); }, {8, 16});
  CHECK(z.vacuous);
  CHECK(z.distances == std::vector<double>{0.0, 0.0});
}

TEST_CASE("cyclicity on a fat Cantor set") {
  const IntervalCollection E = fat_cantor(6, 0.1);
  const Grid g = make_grid(0.0, std::ldexp(1.0, -12), (1 << 12) + 1);
  const RealSignal w = sample<double>(g, [&](double x) { return E.contains(x) ? 1.0 : 0.0; });
  const Signal f = to_complex(w);
  // +1 on the left half of E, -1 on the right
  const Signal target = sample<cplx>(g, [&](double x) { return E.contains(x) ? (x < 0.5 ? 1.0 : -1.0) : 0.0; });
  std::vector<double> s_grid;
  for (int m = 1; m <= 32; ++m) s_grid.push_back(std::numbers::pi * m);
  const TrendReport r = cyclicity_experiment(f, w, target, s_grid, {4, 8, 16, 32});
  CHECK_FALSE(r.vacuous);
  CHECK(r.strictly_decreasing);

  const TrendReport self = cyclicity_experiment(f, w, f, s_grid, {4});
  CHECK(self.distances.front() < 1e-10);

  const RealSignal one = sample<double>(g, [](double) { return 1.0; });
  const TrendReport guard = cyclicity_experiment(f, one, target, s_grid, {4});
  CHECK(guard.vacuous);
}
