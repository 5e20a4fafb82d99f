#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "clumplab/error.hpp"
#include "clumplab/signal_io.hpp"
#include "clumplab/special.hpp"
#include "clumplab/transform.hpp"
#include "corpus.hpp"

using namespace clumplab;
using corpus::I;

namespace {

double max_abs_diff(const Signal& s, const std::function<cplx(double)>& expect) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) m = std::max(m, std::abs(s.values[k] - expect(s.x(k))));
  return m;
}

Signal gaussian(const Grid& g) {
  return sample<cplx>(g, [](double x) { return std::exp(-x * x / 2); });
}

}  // namespace

TEST_CASE("make_grid") {
  const Grid g = make_grid(-10, 0.01, 2001);
  CHECK(g.point(0) == -10.0);
  CHECK(g.end() == doctest::Approx(10.0).epsilon(1e-14));
  const Grid two = make_grid(0, 1, 2);
  CHECK(two.point(0) == 0.0);
  CHECK(two.point(1) == 1.0);
  CHECK_THROWS_AS(make_grid(0, -1, 10), Error);
  CHECK_THROWS_AS(make_grid(0, 1, 1), Error);
}

TEST_CASE("E1 against reference values") {
  // Reference values from a 30-digit mpmath evaluation.
  CHECK(std::abs(expint_e1(1.0) - 0.21938393439552027368) < 1e-15);
  CHECK(std::abs(expint_e1(cplx(0.0, 5.0)) - cplx(0.19002974965664387862, -0.020865081850222481957)) < 1e-14);
  CHECK(std::abs(expint_e1(cplx(-1.0, 30.0)) - cplx(0.089425427753416946695, -0.013967727776170245729)) < 1e-14);
  CHECK(std::abs(expint_e1(cplx(0.3, -0.2)) - cplx(0.73000921617311625346, 0.41556984070966733500)) < 1e-14);
  CHECK(std::abs(expint_e1(cplx(2.0, 100.0)) - cplx(0.00071957363607011089469, -0.0011453238613051038367)) < 1e-16);
}

TEST_CASE("Gaussian is a fixed point of the transform") {
  const Signal f = gaussian(make_grid(-20, 0.005, 8001));
  const Signal F = forward_transform(f, make_grid(-5, 0.01, 1001));
  CHECK(max_abs_diff(F, [](double z) { return std::exp(-z * z / 2); }) < 1e-8);
}

TEST_CASE("direct and chirp summation agree") {
  const Signal f = sample<cplx>(make_grid(-7.3, 0.013, 1200), [](double x) { return std::exp(-x * x / 3) * std::polar(1.0, 0.7 * x); });
  const Grid out = make_grid(-4.1, 0.037, 333);
  const Signal a = forward_transform(f, out, TransformMethod::direct);
  const Signal b = forward_transform(f, out, TransformMethod::chirp);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-12);
  const Signal c = inverse_transform(f, out, TransformMethod::direct);
  const Signal d = inverse_transform(f, out, TransformMethod::chirp);
  CHECK((c.values - d.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Cauchy kernel transforms with rational tails") {
  const Grid x = corpus::cauchy_grid();
  // Output grid avoids zeta = 0, where the symmetric truncation returns the midpoint of the jump.
  const Grid zeta = make_grid(-9.995, 0.01, 2000);
  const Signal psi = sample<cplx>(x, corpus::psi_i, corpus::psi_i_tail());
  const double err = max_abs_diff(forward_transform(psi, zeta), [](double z) { return z > 0 ? std::exp(-z) : 0.0; });
  CHECK(err < 1e-5);
  const Signal psic = sample<cplx>(x, corpus::psi_i_conj, corpus::psi_i_conj_tail());
  const double errc = max_abs_diff(forward_transform(psic, zeta), [](double z) { return z < 0 ? std::exp(z) : 0.0; });
  CHECK(errc < 1e-5);

  SUBCASE("midpoint value at the jump") {
    const Signal at0 = forward_transform(psi, make_grid(0.0, 1.0, 2));
    CHECK(std::abs(at0.values[0] - 0.5) < 1e-5);
  }
  SUBCASE("tail correction matters") {
    Signal bare = psi;
    bare.tail = TailModel::none();
    const double raw = max_abs_diff(forward_transform(bare, zeta), [](double z) { return z > 0 ? std::exp(-z) : 0.0; });
    CHECK(raw > 1e-3);
  }
}

TEST_CASE("box transform") {
  const Signal box = sample<cplx>(make_grid(-1, 0.001, 2001), [](double) { return 1.0; });
  const Signal F = forward_transform(box, make_grid(-10, 0.05, 401));
  CHECK(max_abs_diff(F, [](double z) {
          return z == 0 ? std::sqrt(2 / std::numbers::pi) : std::sqrt(2 / std::numbers::pi) * std::sin(z) / z;
        }) < 1e-5);
}

TEST_CASE("inverse transform") {
  SUBCASE("Gaussian round trip") {
    const Signal f = gaussian(make_grid(-20, 0.01, 4001));
    const Grid zeta = make_grid(-20, 0.01, 4001);
    const Signal back = inverse_transform(forward_transform(f, zeta), f.grid);
    CHECK((back.values - f.values).cwiseAbs().maxCoeff() < 1e-7);
  }
  SUBCASE("one-sided exponentials give the Cauchy kernels") {
    const Grid xs = make_grid(-10, 0.05, 401);
    const Signal right = sample<cplx>(make_grid(0, 0.005, 12001), [](double z) { return std::exp(-z); }, TailModel::exponential(0.0, 1.0));
    CHECK(max_abs_diff(inverse_transform(right, xs), corpus::psi_i) < 1e-4);
    const Signal left = sample<cplx>(make_grid(-60, 0.005, 12001), [](double z) { return std::exp(z); }, TailModel::exponential(1.0, 0.0));
    CHECK(max_abs_diff(inverse_transform(left, xs), corpus::psi_i_conj) < 1e-4);
  }
}

TEST_CASE("exponential tail closes a truncated one-sided signal") {
  const Signal cut = sample<cplx>(make_grid(0, 0.005, 801), [](double z) { return std::exp(-z); }, TailModel::exponential(0.0, 1.0));
  const Grid xs = make_grid(-3, 0.5, 13);
  CHECK(max_abs_diff(inverse_transform(cut, xs), corpus::psi_i) < 1e-4);
}

TEST_CASE("inner products") {
  const Signal g = gaussian(make_grid(-20, 0.005, 8001));
  CHECK(std::abs(inner_product(g, g) - std::sqrt(std::numbers::pi)) < 1e-8);

  const Signal h = sample<cplx>(g.grid, [](double x) { return std::sin(3 * x) * std::exp(-std::abs(x)) * cplx(1, 2); });
  CHECK(inner_product(h, h).real() >= 0.0);
  CHECK(std::abs(inner_product(h, h).imag()) < 1e-14);

  SUBCASE("Plancherel for a Gaussian and a box") {
    const Grid x = make_grid(-20, 0.005, 8001);
    const Signal f = gaussian(x);
    const Signal box = sample<cplx>(x, [](double t) {
      const double a = std::abs(t);
      return a < 1 ? 1.0 : (a == 1 ? 0.5 : 0.0);
    });
    const Grid zeta = make_grid(-60, 0.005, 24001);
    const cplx lhs = inner_product(f, box);
    const cplx rhs = inner_product(forward_transform(f, zeta), forward_transform(box, zeta));
    CHECK(std::abs(lhs - rhs) < 1e-6);
  }

  SUBCASE("weighted") {
    const RealSignal w = sample<double>(g.grid, [](double x) { return x > 0 ? 1.0 : (x == 0 ? 0.5 : 0.0); });
    const cplx half = inner_product(g, g, WeightedNorms::weighted(w));
    CHECK(std::abs(half.real() - std::sqrt(std::numbers::pi) / 2) < 1e-8);
    CHECK_THROWS_AS(WeightedNorms::weighted(sample<double>(g.grid, [](double) { return -1.0; })), Error);
  }
  SUBCASE("grid mismatch") {
    const Signal other = gaussian(make_grid(-20, 0.01, 4001));
    CHECK_THROWS_AS(inner_product(g, other), Error);
  }
}

TEST_CASE("linearity and conjugation") {
  const Grid x = corpus::corpus_grid();
  const Grid zeta = make_grid(-10, 0.05, 401);
  const auto sigs = corpus::schwartz_corpus();
  const Signal f = sample<cplx>(x, sigs[1].f);
  const Signal g = sample<cplx>(x, sigs[8].f);
  const cplx a(0.3, -1.2), b(2.0, 0.5);
  Signal combo{x, a * f.values + b * g.values, {}};
  const Signal lhs = forward_transform(combo, zeta);
  const Eigen::VectorXcd rhs = a * forward_transform(f, zeta).values + b * forward_transform(g, zeta).values;
  CHECK((lhs.values - rhs).cwiseAbs().maxCoeff() < 1e-13);

  const Signal Fc = forward_transform(conj(f), zeta);
  const Signal F = forward_transform(f, zeta);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < zeta.count; ++k) {
    worst = std::max(worst, std::abs(Fc.values[k] - std::conj(F.values[zeta.count - 1 - k])));
  }
  CHECK(worst < 1e-13);

  SUBCASE("conjugation keeps rational tails consistent") {
    const Signal psi = sample<cplx>(corpus::cauchy_grid(), corpus::psi_i, corpus::psi_i_tail());
    const Grid z = make_grid(-2.005, 0.5, 9);
    const Signal Pc = forward_transform(conj(psi), z);
    const Signal P = forward_transform(psi, z);
    for (Eigen::Index k = 0; k < z.count; ++k) {
      const double zeta_k = z.point(k);
      const cplx expect = zeta_k < 0 ? std::exp(zeta_k) : 0.0;
      CHECK(std::abs(Pc.values[k] - expect) < 1e-5);
      CHECK(std::abs(P.values[k] - (zeta_k > 0 ? std::exp(-zeta_k) : 0.0)) < 1e-5);
    }
  }
}

TEST_CASE("Plancherel and round trip on the corpus") {
  const Grid x = corpus::corpus_grid();
  const Grid zeta = corpus::corpus_grid();
  for (const auto& named : corpus::schwartz_corpus()) {
    CAPTURE(named.name);
    const Signal f = sample<cplx>(x, named.f);
    const Signal F = forward_transform(f, zeta);
    const double nf = l2_norm(f);
    CHECK(std::abs(nf - l2_norm(F)) < 1e-6 * nf);
    const Signal back = inverse_transform(F, x);
    CHECK(l2_norm(Signal{x, back.values - f.values, {}}) < 1e-6 * nf);
  }
}

TEST_CASE("non-finite input is rejected") {
  Signal f = gaussian(make_grid(-1, 0.5, 5));
  f.values[2] = cplx(std::nan(""), 0);
  CHECK_THROWS_AS(forward_transform(f, make_grid(0, 1, 3)), Error);
  try {
    forward_transform(f, make_grid(0, 1, 3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
}

TEST_CASE("signal serialization round trips") {
  const Signal f = sample<cplx>(make_grid(-1.5, 0.25, 13), [](double x) { return cplx(x * x, -x); }, corpus::psi_i_tail());
  std::stringstream csv;
  write_signal_csv(csv, f);
  const Signal g = read_signal_csv(csv);
  CHECK(g.grid.count == f.grid.count);
  CHECK(g.grid.start == f.grid.start);
  CHECK(std::abs(g.grid.step - f.grid.step) < 1e-15);
  CHECK((g.values - f.values).cwiseAbs().maxCoeff() == 0.0);

  const Signal h = signal_from_json(signal_to_json(f));
  CHECK(h.grid == f.grid);
  CHECK((h.values - f.values).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(h.tail.kind == TailModel::Kind::rational_power);
  CHECK(h.tail.terms[0].pole == f.tail.terms[0].pole);

  std::stringstream bad("x,re,im\n0,1,0\n1,1,0\n3,1,0\n");
  CHECK_THROWS_AS(read_signal_csv(bad), Error);
}
