#include "decode/special_functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace decode::math {

namespace {

constexpr double kShiftThreshold = 8.0;

void require_positive(double x, const char* fn) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << fn << ": domain error, require x > 0, got x = " << x;
    throw std::domain_error(os.str());
  }
}

}  // namespace

double digamma(double x) {
  require_positive(x, "digamma");
  // psi(x) = psi(x + 1) - 1/x
  double acc = 0.0;
  while (x < kShiftThreshold) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ ln x - 1/(2x) - sum B_{2n} / (2n x^{2n})
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0 -
                  inv2 * (1.0 / 12.0)))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  // psi'(x) = psi'(x + 1) + 1/x^2
  double acc = 0.0;
  while (x < kShiftThreshold) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  // psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2n} / x^{2n+1}
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv * inv2 * (1.0 / 6.0 -
                  inv2 * (1.0 / 30.0 -
                  inv2 * (1.0 / 42.0 -
                  inv2 * (1.0 / 30.0 -
                  inv2 * (5.0 / 66.0 -
                  inv2 * (691.0 / 2730.0 -
                  inv2 * (7.0 / 6.0)))))));
  return acc + inv + 0.5 * inv2 + series;
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  // ln G(x) = ln G(x + n) - sum_{k=0}^{n-1} ln(x + k)
  double acc = 0.0;
  while (x < kShiftThreshold) {
    acc -= std::log(x);
    x += 1.0;
  }
  // Stirling: (x - 1/2) ln x - x + ln(2 pi)/2 + sum B_{2n} / (2n(2n-1) x^{2n-1})
  constexpr double kHalfLogTwoPi = 0.91893853320467274178032973640562;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = inv * (1.0 / 12.0 -
                  inv2 * (1.0 / 360.0 -
                  inv2 * (1.0 / 1260.0 -
                  inv2 * (1.0 / 1680.0 -
                  inv2 * (1.0 / 1188.0 -
                  inv2 * (691.0 / 360360.0))))));
  return acc + (x - 0.5) * std::log(x) - x + kHalfLogTwoPi + series;
}

}  // namespace decode::math
