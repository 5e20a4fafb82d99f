#pragma once

#include "clumplab/signal.hpp"

namespace clumplab {

enum class TransformMethod { automatic, direct, chirp };

// zeta -> sum_j f(x_j) e^{-i x_j zeta} w_j / sqrt(2 pi) plus the closed-form tail, w_j trapezoid weights.
Signal forward_transform(const Signal& f, const Grid& out, TransformMethod method = TransformMethod::automatic);
Signal forward_transform(const RealSignal& f, const Grid& out, TransformMethod method = TransformMethod::automatic);

// Same with e^{+i zeta x}.
Signal inverse_transform(const Signal& F, const Grid& out, TransformMethod method = TransformMethod::automatic);
Signal inverse_transform(const RealSignal& F, const Grid& out, TransformMethod method = TransformMethod::automatic);

// int_{outside grid} f(x) e^{-i x s} dx / sqrt(2 pi) from the tail model.
cplx tail_transform(const Signal& f, double s);

}  // namespace clumplab
