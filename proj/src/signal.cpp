#include "clumplab/signal.hpp"

#include <cmath>

#include "clumplab/error.hpp"

namespace clumplab {

TailModel TailModel::rational(std::vector<RationalTerm> terms) {
  TailModel t;
  t.kind = Kind::rational_power;
  for (const auto& term : terms) {
    if (term.exponent < 1) fail(ErrorKind::invalid_argument, "rational tail exponent must be >= 1");
  }
  t.terms = std::move(terms);
  return t;
}

TailModel TailModel::rational(cplx coefficient, cplx pole, int exponent, double frequency) {
  return rational(std::vector<RationalTerm>{{coefficient, pole, exponent, frequency}});
}

TailModel TailModel::exponential(double rate_left, double rate_right) {
  if (rate_left < 0.0 || rate_right < 0.0 || !(rate_left + rate_right > 0.0)) {
    fail(ErrorKind::invalid_argument, "exponential tail rates must be non-negative and not both zero");
  }
  TailModel t;
  t.kind = Kind::exponential;
  t.rate_left = rate_left;
  t.rate_right = rate_right;
  return t;
}

cplx TailModel::eval_rational(double x) const {
  cplx sum = 0.0;
  for (const auto& t : terms) {
    sum += t.coefficient * std::polar(1.0, t.frequency * x) * std::pow(cplx(x) - t.pole, -t.exponent);
  }
  return sum;
}

RealSignal abs(const Signal& s) { return {s.grid, s.values.cwiseAbs(), {}}; }

Signal conj(const Signal& s) {
  Signal out{s.grid, s.values.conjugate(), s.tail};
  for (auto& t : out.tail.terms) {
    t.coefficient = std::conj(t.coefficient);
    t.pole = std::conj(t.pole);
    t.frequency = -t.frequency;
  }
  return out;
}

Signal multiply(const Signal& a, const Signal& b, TailModel tail) {
  if (!(a.grid == b.grid)) fail(ErrorKind::invalid_argument, "multiply: grids differ");
  return {a.grid, a.values.cwiseProduct(b.values), std::move(tail)};
}

WeightedNorms WeightedNorms::weighted(RealSignal w) {
  if ((w.values.array() < 0.0).any()) fail(ErrorKind::invalid_argument, "norm weight must be non-negative");
  WeightedNorms n;
  n.kind = Kind::weighted;
  n.weight = std::move(w);
  return n;
}

cplx inner_product(const Signal& f, const Signal& g, const WeightedNorms& norms) {
  if (!(f.grid == g.grid)) fail(ErrorKind::invalid_argument, "inner_product: grids differ");
  Eigen::VectorXd w = f.grid.trapezoid_weights();
  if (norms.kind == WeightedNorms::Kind::weighted) {
    if (!(norms.weight.grid == f.grid)) fail(ErrorKind::invalid_argument, "inner_product: weight grid differs");
    w = w.cwiseProduct(norms.weight.values);
  }
  return (f.values.array() * g.values.conjugate().array() * w.array()).sum();
}

double l2_norm(const Signal& f, const WeightedNorms& norms) {
  return std::sqrt(std::max(0.0, inner_product(f, f, norms).real()));
}

}  // namespace clumplab
