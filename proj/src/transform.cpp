#include "clumplab/transform.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "clumplab/error.hpp"
#include "clumplab/parallel.hpp"
#include "clumplab/special.hpp"

namespace clumplab {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void require_finite(const Signal& f) {
  if (!f.values.allFinite()) fail(ErrorKind::invalid_input, "signal has non-finite samples");
}

// out[k] = sum_j a_j e^{-i x_j s_k}, direct summation with a re-anchored phase recurrence.
Eigen::VectorXcd direct_sum(const Eigen::VectorXcd& a, const Grid& in, const Grid& out) {
  Eigen::VectorXcd result(out.count);
  const Eigen::Index n = a.size();
  parallel_for(static_cast<std::size_t>(out.count), [&](std::size_t k) {
    const double s = out.point(static_cast<Eigen::Index>(k));
    const cplx rot = std::polar(1.0, -in.step * s);
    cplx acc = 0.0;
    for (Eigen::Index j0 = 0; j0 < n; j0 += 512) {
      cplx phase = std::polar(1.0, -in.point(j0) * s);
      const Eigen::Index j1 = std::min(n, j0 + 512);
      for (Eigen::Index j = j0; j < j1; ++j) {
        acc += a[j] * phase;
        phase *= rot;
      }
    }
    result[static_cast<Eigen::Index>(k)] = acc;
  });
  return result;
}

// Same sum through the chirp-z identity jk = (j^2 + k^2 - (k-j)^2)/2 and one FFT convolution.
Eigen::VectorXcd chirp_sum(const Eigen::VectorXcd& a, const Grid& in, const Grid& out) {
  const Eigen::Index n = a.size(), m = out.count;
  const double alpha = in.step * out.step;
  auto chirp = [alpha](Eigen::Index j) {
    const double jj = static_cast<double>(j);
    return std::polar(1.0, std::fmod(0.5 * alpha * jj * jj, 2.0 * std::numbers::pi));
  };
  std::size_t len = 1;
  while (len < static_cast<std::size_t>(n + m - 1)) len <<= 1;

  std::vector<cplx> u(len, 0.0), v(len, 0.0);
  const double s0 = out.start;
  for (Eigen::Index j = 0; j < n; ++j) {
    u[static_cast<std::size_t>(j)] = a[j] * std::polar(1.0, -static_cast<double>(j) * in.step * s0) * std::conj(chirp(j));
  }
  for (Eigen::Index q = 0; q < m; ++q) v[static_cast<std::size_t>(q)] = chirp(q);
  for (Eigen::Index q = 1; q < n; ++q) v[len - static_cast<std::size_t>(q)] = chirp(q);

  Eigen::FFT<double> fft;
  std::vector<cplx> uf, vf, conv;
  fft.fwd(uf, u);
  fft.fwd(vf, v);
  for (std::size_t i = 0; i < len; ++i) uf[i] *= vf[i];
  fft.inv(conv, uf);

  Eigen::VectorXcd result(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    result[k] = conv[static_cast<std::size_t>(k)] * std::conj(chirp(k)) * std::polar(1.0, -in.start * out.point(k));
  }
  return result;
}

// int f(x) e^{-i x s} dx / sqrt(2 pi) over the grid plus tails, for all s on `out`.
Signal oscillatory_transform(const Signal& f, const Grid& out, bool inverse, TransformMethod method) {
  require_finite(f);
  Eigen::VectorXcd a = f.values.cwiseProduct(f.grid.trapezoid_weights().cast<cplx>());
  // The inverse kernel e^{+i x s} is the forward kernel at -s.
  const Grid eval = inverse ? Grid{-out.start, -out.step, out.count} : out;
  Grid eval_pos = eval;
  bool reversed = false;
  if (eval.step < 0) {
    eval_pos = Grid{eval.end(), -eval.step, eval.count};
    reversed = true;
  }
  if (method == TransformMethod::automatic) {
    method = static_cast<double>(a.size()) * static_cast<double>(out.count) > 4e6 ? TransformMethod::chirp
                                                                                  : TransformMethod::direct;
  }
  Eigen::VectorXcd sums = method == TransformMethod::chirp ? chirp_sum(a, f.grid, eval_pos) : direct_sum(a, f.grid, eval_pos);
  if (reversed) sums.reverseInPlace();

  Signal result{out, sums * kInvSqrt2Pi, {}};
  if (!f.tail.is_none()) {
    for (Eigen::Index k = 0; k < out.count; ++k) {
      const double s = inverse ? -out.point(k) : out.point(k);
      result.values[k] += tail_transform(f, s);
    }
  }
  return result;
}

}  // namespace

cplx tail_transform(const Signal& f, double s) {
  const double xl = f.grid.start, xr = f.grid.end();
  cplx total = 0.0;
  switch (f.tail.kind) {
    case TailModel::Kind::none:
      return 0.0;
    case TailModel::Kind::exponential: {
      if (f.tail.rate_right > 0.0) {
        total += f.values[f.grid.count - 1] * std::polar(1.0, -xr * s) / cplx(f.tail.rate_right, s);
      }
      if (f.tail.rate_left > 0.0) total += f.values[0] * std::polar(1.0, -xl * s) / cplx(f.tail.rate_left, -s);
      break;
    }
    case TailModel::Kind::rational_power:
      for (const auto& t : f.tail.terms) {
        const double kappa = s - t.frequency;
        const cplx right = std::polar(1.0, -kappa * xr) * power_ray_integral(xr - t.pole, t.exponent, kappa);
        const double sgn = (t.exponent % 2 == 0) ? 1.0 : -1.0;
        const cplx left = sgn * std::polar(1.0, -kappa * xl) * power_ray_integral(-xl + t.pole, t.exponent, -kappa);
        total += t.coefficient * (right + left);
      }
      break;
  }
  return total * kInvSqrt2Pi;
}

Signal forward_transform(const Signal& f, const Grid& out, TransformMethod method) {
  return oscillatory_transform(f, out, false, method);
}

Signal forward_transform(const RealSignal& f, const Grid& out, TransformMethod method) {
  return forward_transform(to_complex(f), out, method);
}

Signal inverse_transform(const Signal& F, const Grid& out, TransformMethod method) {
  return oscillatory_transform(F, out, true, method);
}

Signal inverse_transform(const RealSignal& F, const Grid& out, TransformMethod method) {
  return inverse_transform(to_complex(F), out, method);
}

}  // namespace clumplab
