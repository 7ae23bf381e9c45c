#pragma once

#include "decode/tensor.hpp"

#include <vector>

namespace decode::ad {

// Learning-rate schedule: constant through `warm_epochs`, then halved every
// `halve_every` epochs. lr(epoch) = base * 0.5^floor(max(0, epoch - warm) / halve).
struct LrSchedule {
  double base_lr = 1e-4;
  int warm_epochs = 20;
  int halve_every = 2;

  double at(int epoch) const;
};

// AdamW: Adam moments plus decoupled weight decay (decay applied directly to
// the parameter, not through the moment estimates).
class AdamW {
 public:
  struct Options {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-2;
  };

  explicit AdamW(std::vector<Tensor> params);
  AdamW(std::vector<Tensor> params, Options opts);

  // Applies one update from the gradients currently held by the parameters,
  // then advances the step counter. Deterministic given identical state.
  void step();

  void set_lr(double lr) { opts_.lr = lr; }
  double lr() const { return opts_.lr; }
  int step_count() const { return step_; }
  const Options& options() const { return opts_; }

  // Serialization access for checkpoints.
  const std::vector<Array>& first_moments() const { return m_; }
  const std::vector<Array>& second_moments() const { return v_; }

 private:
  std::vector<Tensor> params_;
  std::vector<Array> m_, v_;
  Options opts_;
  int step_ = 0;
};

}  // namespace decode::ad
