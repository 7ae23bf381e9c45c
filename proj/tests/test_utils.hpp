#pragma once

#include "decode/ops.hpp"
#include "decode/rng.hpp"
#include "decode/tensor.hpp"

#include <cmath>
#include <functional>

namespace decode::testutil {

// Central finite differences of a scalar function of one leaf tensor,
// compared against tape gradients. Returns the largest relative error over
// all coordinates (relative to max(|fd|, |ad|, floor)).
inline double max_grad_rel_err(ad::Tensor& x,
                               const std::function<ad::Tensor()>& f,
                               double step = 1e-5, double floor_ = 1e-6) {
  ad::Array ad_grad;
  {
    ad::Tape tape;
    ad::Tensor loss = f();
    tape.backward(loss);
    ad_grad = x.grad();
  }
  double worst = 0.0;
  for (ad::Index i = 0; i < x.size(); ++i) {
    const double orig = x.values()[i];
    x.values_mut()[i] = orig + step;
    const double hi = f().value();
    x.values_mut()[i] = orig - step;
    const double lo = f().value();
    x.values_mut()[i] = orig;
    const double fd = (hi - lo) / (2.0 * step);
    const double denom = std::max({std::abs(fd), std::abs(ad_grad[i]), floor_});
    worst = std::max(worst, std::abs(fd - ad_grad[i]) / denom);
  }
  return worst;
}

inline ad::Tensor random_tensor(ad::Shape shape, Rng& rng, double scale = 1.0,
                                bool requires_grad = true) {
  ad::Array v(ad::shape_size(shape));
  for (ad::Index i = 0; i < v.size(); ++i) v[i] = scale * rng.normal();
  return ad::Tensor::from_values(std::move(shape), std::move(v), requires_grad);
}

}  // namespace decode::testutil
