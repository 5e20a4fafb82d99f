#include <cmath>
#include <numbers>

#include "corpus.hpp"
#include "doctest.h"

#include "clumplab/error.hpp"
#include "clumplab/multiplier.hpp"
#include "clumplab/transform.hpp"

using namespace clumplab;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::invalid_argument;
}

// C-infinity bump on [0, 1] with value 1 at 1/2.
double bump(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double u = 2.0 * x - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

const Grid kZeta = make_grid(0.0, 0.01, 30001);

}  // namespace

TEST_CASE("kernel transform") {
  // mpmath oscillatory quadrature of the kernel
  const double n2[] = {0.29872241020718366, 0.73575888234288464, 0.38940039153570243};
  const double n3[] = {1.3442508459323265, 1.103638323514327, 0.14602514682588841};
  const double zs[] = {-3.0, -1.0, -0.25};
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(phi_kernel(2).transform(zs[k]) - n2[k]) < 1e-14);
    CHECK(std::abs(phi_kernel(3).transform(zs[k]) - n3[k]) < 1e-14);
  }
  CHECK(phi_kernel(1).transform(-2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(phi_kernel(1).transform(0.0) == 0.5);
  CHECK(phi_kernel(2).transform(0.5) == 0.0);

  // n = 1 is conj(psi_i)
  for (double x : {-3.0, 0.0, 0.7}) CHECK(std::abs(phi_kernel(1)(x) - corpus::psi_i_conj(x)) < 1e-15);

  const Grid g = corpus::cauchy_grid();
  const Grid z = make_grid(-10.0, 0.01, 2001);
  for (int n : {1, 2, 3, 4}) {
    CAPTURE(n);
    const PhiKernel phi = phi_kernel(n);
    const Signal F = forward_transform(phi.sample(g), z);
    double err = 0.0, tail = 0.0;
    for (Eigen::Index j = 0; j < z.count; ++j) {
      err = std::max(err, std::abs(F.values[j] - phi.transform(z.point(j))));
      if (z.point(j) > 0.1) tail = std::max(tail, std::abs(F.values[j]));
    }
    CHECK(err < 1e-4);
    CHECK(tail < 1e-4 * F.values.cwiseAbs().maxCoeff());
  }
  CHECK(kind_of([] { phi_kernel(0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("kernel L1 norm") {
  CHECK(std::isinf(phi_kernel(1).l1_norm()));
  // 2 / sqrt(2 pi) * pi and 6 / sqrt(2 pi) * 2
  CHECK(phi_kernel(2).l1_norm() == doctest::Approx(2.0 * std::numbers::pi / std::sqrt(2 * std::numbers::pi)).epsilon(1e-13));
  CHECK(phi_kernel(3).l1_norm() == doctest::Approx(12.0 / std::sqrt(2 * std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("taming outer function") {
  const Grid g = make_grid(-20.0, 0.01, 4001);
  const Signal small = sample<cplx>(g, [](double x) { return cplx(std::exp(-x * x)); });
  const TamingOuter one = taming_outer(small);
  CHECK(one.trivial);
  CHECK(one({0.3, 0.2}) == cplx(1.0));
  CHECK(one.boundary(1.0) == cplx(1.0));

  // log|h(i)| = -(1/pi) int_0^1 dt / (1 + t^2) = -1/4
  const Grid u = make_grid(-1.0, 1.0 / 1024, 3073);
  // sqrt(e) on the two jump nodes puts log W at its midpoint there
  const Signal step = sample<cplx>(u, [](double x) {
    return x == 0 || x == 1 ? cplx(std::sqrt(std::numbers::e)) : x > 0 && x < 1 ? cplx(std::numbers::e) : cplx(1.0);
  });
  const TamingOuter hs = taming_outer(step);
  CHECK_FALSE(hs.trivial);
  CHECK(std::abs(std::abs(hs({0.0, 1.0})) - std::exp(-0.25)) < 1e-6);

  const Signal quad = sample<cplx>(g, [](double x) { return cplx(1.0 + x * x); });
  const TamingOuter hq = taming_outer(quad);
  for (double x : {-5.0, -1.0, 0.0, 0.5, 2.0, 7.0}) {
    CAPTURE(x);
    CHECK(std::abs(std::abs(hq({x, 1e-3})) * (1 + x * x) - 1.0) < 0.01);
    CHECK(std::abs(std::abs(hq.boundary(x)) * (1 + x * x) - 1.0) < 1e-9);
  }
  // |h| <= 1 on the half-plane
  for (double x : {-30.0, -3.0, 0.0, 4.0}) {
    for (double y : {0.01, 1.0, 10.0}) CHECK(std::abs(hq({x, y})) <= 1.0 + 1e-12);
  }

  Signal bad = quad;
  bad.values[17] = cplx(INFINITY, 0.0);
  CHECK(kind_of([&] { taming_outer(bad); }) == ErrorKind::invalid_input);
}

TEST_CASE("tempered check") {
  const Grid g = make_grid(-50.0, 0.01, 10001);
  const TemperedInput gauss{sample<cplx>(g, [](double x) { return cplx(std::exp(-x * x / 2)); }), 1, std::nullopt};
  const TemperedCheck c = tempered_check(gauss);
  CHECK(c.convergent);
  CHECK(c.radii.back() == doctest::Approx(50.0));
  for (std::size_t k = 1; k < c.partial.size(); ++k) CHECK(c.partial[k] >= c.partial[k - 1]);

  // growth of order 3 needs n > 4 to settle
  const Signal cubic = sample<cplx>(g, [](double x) { return cplx(1.0 + std::abs(x * x * x)); });
  CHECK_FALSE(tempered_check({cubic, 2, std::nullopt}).convergent);
  CHECK(tempered_check({cubic, 6, std::nullopt}).convergent);
  CHECK(kind_of([&] { build_multiplier({cubic, 2, std::nullopt}); }) == ErrorKind::invalid_input);
}

TEST_CASE("multiplier bundle properties") {
  const Grid g = make_grid(-40.0, 0.01, 8001);
  // (1 + x^2) e^{-x^2/2} peaks at 2/sqrt(e) > 1, so h is not trivial
  const Signal f = sample<cplx>(g, [](double x) { return cplx((1 + x * x) * std::exp(-x * x / 2)); });
  const MultiplierBundle b = build_multiplier({f, 3, std::nullopt});
  CHECK_FALSE(b.h.trivial);
  CHECK_FALSE(b.trivial);
  CHECK(b.m_nonzero);
  CHECK(b.log_m_neutral);
  CHECK(b.max_m <= b.sup_phi * (1 + 1e-12));
  CHECK(b.max_envelope_excess <= 1e-15);
  CHECK(b.sup_phi == doctest::Approx(6.0 / std::sqrt(2 * std::numbers::pi)));
  for (Eigen::Index j = 0; j < g.count; ++j) {
    const double x = g.point(j), af = std::abs(f.values[j]);
    CHECK(std::abs(b.h_boundary.values[j]) <= 1.0 + 1e-12);
    // |m f| <= |Phi| min(|f|, 1) / |x + i|^2
    CHECK(std::abs(b.mf.values[j]) <= std::abs(b.phi_samples.values[j]) * std::min(af, 1.0) / (1 + x * x) * (1 + 1e-9) + 1e-300);
  }
  CHECK(std::isfinite(b.l1_mf));
  CHECK(b.max_mf <= b.sup_phi * (1 + 1e-12));  // equality at x = 0, where f = 1

  // the input's transform, Hermite form, as a sanity check on the grid
  const Signal F = forward_transform(f, make_grid(-5.0, 0.05, 201));
  for (Eigen::Index j = 0; j < F.grid.count; ++j) {
    const double z = F.grid.point(j);
    CHECK(std::abs(F.values[j] - (2 - z * z) * std::exp(-z * z / 2)) < 1e-10);
  }

  const Signal zero(g, Signal::Vector::Zero(g.count));
  const MultiplierBundle bz = build_multiplier({zero, 2, std::nullopt});
  CHECK(bz.trivial);
  CHECK(bz.max_mf == 0.0);
  CHECK(bz.h.trivial);

  const MultiplierBundle b1 = build_multiplier({f, 1, std::nullopt});
  CHECK(b1.note.find("n = 1") != std::string::npos);
}

TEST_CASE("decay is preserved for a stretched-exponential spectrum") {
  const Grid zg = make_grid(0.0, 0.01, 40001);
  const Signal fhat = sample<cplx>(zg, [](double z) { return cplx(corpus::smooth_step(z) * std::exp(-2 * std::sqrt(z))); });
  const Signal f = inverse_transform(fhat, make_grid(-100.0, 0.01, 20001));
  const TemperedInput in{f, 2, fhat};
  const MultiplierBundle b = build_multiplier(in);
  const MultiplierDecayReport r = multiplier_decay_check(in, b, kZeta);
  REQUIRE(r.input_fit);
  REQUIRE(r.output_fit);
  CHECK(r.passes);
  CHECK(r.output_fit->a >= 0.45);
  CHECK(std::abs(r.output_fit->a - r.input_fit->a) <= 0.05);
  CHECK(r.output_fit->r2 > 0.999);
  for (std::size_t k = 1; k < r.output_profile.size(); ++k) CHECK(r.output_profile[k].rho <= r.output_profile[k - 1].rho);
}

TEST_CASE("compact spectrum passes at once") {
  const Grid zg = make_grid(0.0, 0.01, 2001);
  const Signal fhat = sample<cplx>(zg, [](double z) { return cplx(bump(z / 4)); });
  const Signal f = inverse_transform(fhat, make_grid(-60.0, 0.01, 12001));
  const TemperedInput in{f, 2, fhat};
  const MultiplierDecayReport r = multiplier_decay_check(in, build_multiplier(in), make_grid(0.0, 0.01, 3001));
  CHECK(r.input_compact);
  CHECK(r.passes);
}

TEST_CASE("hypothesis guard") {
  // sqrt(pi/2) e^{-|x|} has transform 1 / (1 + zeta^2)
  const Signal f = sample<cplx>(make_grid(-60.0, 0.01, 12001),
                                [](double x) { return cplx(std::sqrt(std::numbers::pi / 2) * std::exp(-std::abs(x))); });
  const TemperedInput in{f, 1, std::nullopt};
  const MultiplierBundle b = build_multiplier(in);
  CHECK(kind_of([&] { multiplier_decay_check(in, b, kZeta); }) == ErrorKind::hypothesis_not_met);
  CHECK(kind_of([&] { distributional_clump_pipeline(in, kZeta); }) == ErrorKind::hypothesis_not_met);
  CHECK(kind_of([&] { multiplier_decay_check(in, b, make_grid(-1.0, 0.01, 301)); }) == ErrorKind::invalid_argument);
}

TEST_CASE("clump pipeline recovers a smooth window") {
  // half amplitude keeps |f| <= 1, so h = 1 and m is smooth
  const Grid g = make_grid(-2.0, 1.0 / 512, 2049);
  const Signal f = sample<cplx>(g, [](double x) { return cplx(0.5 * (1 + x * x) * std::exp(-x * x / 2) * bump(x)); });
  // the bump's spectrum decays slowly, so the probe needs a long spectral grid
  const PipelineReport r = distributional_clump_pipeline({f, 2, std::nullopt}, make_grid(0.0, 0.1, 16001));
  CHECK(r.bundle.h.trivial);
  CHECK(r.decay.passes);
  CHECK(r.decay.output_fit->a >= 0.45);
  CHECK(r.bundle.log_m_neutral);
  // log|f| ~ -1/(4x) at the ends is not integrable, so the two end cells (width 4/256) stay residual
  const double cell = 4.0 / 256;
  REQUIRE(r.clumps.clumps.intervals().size() == 1);
  CHECK(r.clumps.clumps.intervals().front().lo == doctest::Approx(cell));
  CHECK(r.clumps.clumps.intervals().front().hi == doctest::Approx(1.0 - cell));
  for (const auto& iv : r.clumps.residual.intervals()) CHECK((iv.hi <= cell + 1e-12 || iv.lo >= 1.0 - cell - 1e-12));
  CHECK(r.clumps.residual_measure < 2 * cell);

  const Signal zero(g, Signal::Vector::Zero(g.count));
  const PipelineReport z = distributional_clump_pipeline({zero, 2, std::nullopt}, kZeta);
  CHECK(z.clumps.clumps.empty());
  CHECK(z.clumps.residual.empty());
}

TEST_CASE("kinked taming modulus leaves a floor that shrinks with the step") {
  // |f| peaks above 1, so W = min(1, 1/|f|) has kinks and conj(h_*) decays only algebraically on the
  // negative half-line; sampling aliases that into the positive spectrum
  auto floor_at = [](double step) {
    const Grid g = make_grid(-2.0, step, static_cast<Eigen::Index>(std::lround(4.0 / step)) + 1);
    const Signal f = sample<cplx>(g, [](double x) { return cplx((1 + x * x) * std::exp(-x * x / 2) * bump(x)); });
    const MultiplierBundle b = build_multiplier({f, 2, std::nullopt});
    CHECK_FALSE(b.h.trivial);
    return tail_mass(forward_transform(b.mf, make_grid(0.0, 0.05, 20001)), 600.0);
  };
  const double coarse = floor_at(1.0 / 512), fine = floor_at(1.0 / 2048);
  CHECK(fine < coarse / 10);
}

TEST_CASE("fat Cantor input fails the hypothesis") {
  std::vector<Interval> gaps;
  for (int n = 1; n <= 8; ++n) {
    const double cell = std::ldexp(1.0, -n);
    for (long j = 0; j < (1L << n); ++j) {
      const double c = (static_cast<double>(j) + 0.5) * cell;
      gaps.push_back({c - 0.035 * cell, c + 0.035 * cell});
    }
  }
  const IntervalCollection E = IntervalCollection{{0.0, 1.0}}.subtract(IntervalCollection(gaps));
  const Grid g = make_grid(-1.0, std::ldexp(1.0, -12), 3 * 4096 + 1);
  const Signal f = sample<cplx>(g, [&](double x) { return E.contains(x) ? cplx(1 + x * x) : cplx(0.0); });
  CHECK(kind_of([&] { distributional_clump_pipeline({f, 2, std::nullopt}, kZeta); }) == ErrorKind::hypothesis_not_met);
}
