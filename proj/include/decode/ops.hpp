#pragma once

#include "decode/tensor.hpp"

#include <vector>

namespace decode::ad {

// Elementwise binary ops require identical shapes and throw naming both
// shapes otherwise. All ops record on the active tape when any input
// requires gradients; without an active tape they are plain evaluations.

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

Tensor add_scalar(const Tensor& a, double s);
Tensor mul_scalar(const Tensor& a, double s);
Tensor neg(const Tensor& a);

// [m x k] * [k x n] -> [m x n]; rank-1 inputs are rejected (reshape first).
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

// Rowwise scaling: m is [r x c], v is length-r; result[i, j] = m[i, j] * v[i].
Tensor scale_rows(const Tensor& m, const Tensor& v);

Tensor concat(const std::vector<Tensor>& parts, int axis);
inline Tensor concat(const Tensor& a, const Tensor& b, int axis) { return concat({a, b}, axis); }
std::vector<Tensor> split(const Tensor& t, int axis, const std::vector<Index>& sizes);
Tensor slice(const Tensor& t, int axis, Index start, Index len);
Tensor reshape(const Tensor& t, Shape shape);

Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor square(const Tensor& a);
Tensor cos(const Tensor& a);
Tensor sin(const Tensor& a);
// Hard clamp; gradient passes inside [lo, hi] and is zero outside.
Tensor clamp(const Tensor& a, double lo, double hi);

// Differentiable digamma / log-gamma, elementwise, inputs must be positive.
Tensor digamma(const Tensor& a);
Tensor lgamma(const Tensor& a);

// Reductions. axis = 0 reduces over rows (result has one entry per column),
// axis = 1 over columns (one entry per row). The no-axis forms are scalars.
Tensor sum(const Tensor& a);
Tensor sum(const Tensor& a, int axis);
Tensor mean(const Tensor& a);
Tensor mean(const Tensor& a, int axis);

// Rank-1: over the whole vector. Rank-2: per-row for axis = 1 (the only
// supported axis); outputs keep the input shape.
Tensor softmax(const Tensor& a);
Tensor softmax(const Tensor& a, int axis);
Tensor log_sum_exp(const Tensor& a);
Tensor log_sum_exp(const Tensor& a, int axis);

}  // namespace decode::ad
