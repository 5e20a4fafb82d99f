#pragma once

#include <string>
#include <vector>

namespace clumplab {

enum class WeightFamily { sqrt, sqrt_over_log, power, tabulated };

struct WeightParams {
  double splice = 20.085536923187668;  // e^3, for sqrt_over_log
  double exponent = 1.0 / 3.0;         // power family: scale * x^exponent
  double scale = 1.0;
  std::vector<double> xs;      // tabulated nodes, xs[0] = 0
  std::vector<double> values;  // tabulated M at the nodes
};

// Concave M on [0, inf) with M(0) = 0, plus K = (M')^{-1} and M_*(y) = M(K(y)).
//   sqrt_over_log: sqrt(x)/log(x) for x >= splice, a sqrt(x) + b x below it with M and M' continuous.
//   tabulated: piecewise linear through the nodes, continued past the last node by c sqrt(x) + d
//              with matching slope; K is the generalized inverse of the piecewise-constant M'.
class ConcaveWeight {
 public:
  ConcaveWeight() = default;
  ConcaveWeight(WeightFamily family, WeightParams params);

  WeightFamily family() const { return family_; }
  const WeightParams& params() const { return params_; }
  std::string name() const;

  double M(double x) const;
  double dM(double x) const;
  double K(double y) const;
  double Mstar(double y) const { return M(K(y)); }

 private:
  WeightFamily family_ = WeightFamily::sqrt;
  WeightParams params_;
  double lo_a_ = 0.0, lo_b_ = 0.0;  // splice coefficients
  std::vector<double> slopes_;      // tabulated cell slopes
};

struct WeightCheckReport {
  bool increasing = true;
  bool derivative_decreasing = true;
  bool below_sqrt = true;
  bool derivative_below_ratio = true;  // M'(x) <= M(x)/x
  bool inverse_consistent = true;      // K(M'(x)) = x; not checked for tabulated weights
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// 200 log-spaced points on [1, 1e8].
std::vector<double> weight_check_grid();

WeightCheckReport check_weight(const ConcaveWeight& M);

// Builds the weight and runs check_weight; throws invalid-weight on any failure.
ConcaveWeight make_concave_weight(WeightFamily family, const WeightParams& params = {});

WeightFamily parse_weight_family(const std::string& name);

}  // namespace clumplab
