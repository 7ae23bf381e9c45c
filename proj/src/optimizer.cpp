#include "decode/optimizer.hpp"

#include <cmath>

namespace decode::ad {

double LrSchedule::at(int epoch) const {
  const int past_warm = epoch > warm_epochs ? epoch - warm_epochs : 0;
  const int halvings = halve_every > 0 ? past_warm / halve_every : 0;
  return base_lr * std::pow(0.5, halvings);
}

AdamW::AdamW(std::vector<Tensor> params) : AdamW(std::move(params), Options()) {}

AdamW::AdamW(std::vector<Tensor> params, Options opts)
    : params_(std::move(params)), opts_(opts) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.push_back(Array::Zero(p.size()));
    v_.push_back(Array::Zero(p.size()));
  }
}

void AdamW::step() {
  ++step_;
  const double bc1 = 1.0 - std::pow(opts_.beta1, step_);
  const double bc2 = 1.0 - std::pow(opts_.beta2, step_);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    const Array& g = p.grad();
    m_[i] = opts_.beta1 * m_[i] + (1.0 - opts_.beta1) * g;
    v_[i] = opts_.beta2 * v_[i] + (1.0 - opts_.beta2) * g * g;
    const Array m_hat = m_[i] / bc1;
    const Array v_hat = v_[i] / bc2;
    Array& x = p.values_mut();
    x -= opts_.lr * opts_.weight_decay * x;  // decoupled decay
    x -= opts_.lr * m_hat / (v_hat.sqrt() + opts_.eps);
  }
}

}  // namespace decode::ad
