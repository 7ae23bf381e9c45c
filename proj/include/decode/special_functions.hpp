#pragma once

namespace decode::math {

// Digamma, trigamma and log-gamma for x > 0, accurate to better than 1e-10
// over [1e-3, 1e3]. Upward recurrence shifts the argument above a threshold
// where a Bernoulli-number asymptotic series converges fast. All three throw
// on x <= 0.
double digamma(double x);
double trigamma(double x);
double log_gamma(double x);

}  // namespace decode::math
