#include "decode/metrics.hpp"
#include "decode/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace decode;
using namespace decode::metrics;

namespace {

Eigen::MatrixX2d line(int steps, double dx, double dy, double x0 = 0, double y0 = 0) {
  Eigen::MatrixX2d m(steps, 2);
  for (int t = 0; t < steps; ++t) {
    m(t, 0) = x0 + dx * (t + 1);
    m(t, 1) = y0 + dy * (t + 1);
  }
  return m;
}

}  // namespace

TEST_CASE("min_ade/min_fde exact component") {
  Eigen::MatrixX2d gt = line(10, 1.0, 0.0);
  CHECK(min_ade({gt}, gt) == 0.0);
  CHECK(min_fde({gt}, gt) == 0.0);
}

TEST_CASE("min picks the matching component") {
  Eigen::MatrixX2d gt = line(10, 1.0, 0.0);
  Eigen::MatrixX2d shifted = gt;
  shifted.col(0).array() += 1.0;
  CHECK(min_ade({gt, shifted}, gt) == 0.0);
  CHECK(min_fde({gt, shifted}, gt) == 0.0);
}

TEST_CASE("uniform 1 m shift gives 1 m errors") {
  Eigen::MatrixX2d gt = line(10, 1.0, 0.0);
  Eigen::MatrixX2d shifted = gt;
  shifted.col(0).array() += 1.0;
  CHECK(min_ade({shifted}, gt) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_fde({shifted}, gt) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("horizon mismatch rejected") {
  CHECK_THROWS_AS(min_ade({line(5, 1, 0)}, line(6, 1, 0)), std::invalid_argument);
}

TEST_CASE("aer/fgt hand staircase") {
  ResultMatrix r(3);
  r.set(0, 0, 1);
  r.set(0, 1, 2);
  r.set(0, 2, 3);
  r.set(1, 1, 1);
  r.set(1, 2, 2);
  r.set(2, 2, 1);
  CHECK(aer(r) == doctest::Approx(10.0 / 6.0).epsilon(1e-12));
  CHECK(fgt(r) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("constant staircase: aer = c, fgt = 0") {
  ResultMatrix r(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) r.set(i, j, 2.5);
  CHECK(aer(r) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fgt(r) == doctest::Approx(0.0));
}

TEST_CASE("single-domain fgt is zero by convention") {
  ResultMatrix r(1);
  r.set(0, 0, 7.0);
  CHECK(fgt(r) == 0.0);
  CHECK(aer(r) == doctest::Approx(7.0));
}

TEST_CASE("missing staircase entries rejected") {
  ResultMatrix r(2);
  r.set(0, 0, 1.0);
  CHECK_THROWS_AS(aer(r), std::invalid_argument);
  CHECK_THROWS_AS(r.set(1, 0, 1.0), std::invalid_argument);
}

TEST_CASE("aer/fgt agree with a brute-force double loop") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 6);
    ResultMatrix r(n);
    std::vector<std::vector<double>> raw(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        raw[i][j] = rng.uniform(0.0, 10.0);
        r.set(i, j, raw[i][j]);
      }
    double sum_all = 0.0, sum_fgt = 0.0;
    int count_all = 0, count_fgt = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j >= i) {
          sum_all += raw[i][j];
          ++count_all;
        }
        if (j > i) {
          sum_fgt += raw[i][j] - raw[i][i];
          ++count_fgt;
        }
      }
    CHECK(aer(r) == doctest::Approx(sum_all / count_all).epsilon(1e-12));
    if (n > 1) CHECK(fgt(r) == doctest::Approx(sum_fgt / count_fgt).epsilon(1e-12));
  }
}

TEST_CASE("auroc basics") {
  CHECK(auroc({1, 2, 3, 4}, {0, 0, 1, 1}) == doctest::Approx(1.0));
  CHECK(auroc({5, 5, 5, 5}, {0, 1, 0, 1}) == doctest::Approx(0.5));
  CHECK(auroc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(auroc({1, 2}, {1, 1}), std::invalid_argument);
}

TEST_CASE("auroc invariant under strictly monotone transforms") {
  Rng rng(17);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    scores.push_back(rng.normal());
    labels.push_back(rng.uniform() < 0.4 ? 1 : 0);
  }
  labels[0] = 0;
  labels[1] = 1;
  const double base = auroc(scores, labels);
  std::vector<double> warped = scores;
  for (auto& s : warped) s = std::exp(0.5 * s) + 3.0;
  CHECK(auroc(warped, labels) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("auroc rank path matches pair counting") {
  Rng rng(18);
  std::vector<double> scores;
  std::vector<int> labels;
  // Includes ties via rounding.
  for (int i = 0; i < 500; ++i) {
    scores.push_back(std::round(rng.normal() * 4.0) / 4.0);
    labels.push_back(rng.uniform() < 0.3 ? 1 : 0);
  }
  labels[0] = 0;
  labels[1] = 1;
  const double exact = auroc(scores, labels);
  // Stretch the same data above the exact-mode threshold by tiling; AUROC of
  // tiled data equals AUROC of the base data when each copy is identical.
  std::vector<double> big_scores;
  std::vector<int> big_labels;
  for (int rep = 0; rep < 25; ++rep) {
    big_scores.insert(big_scores.end(), scores.begin(), scores.end());
    big_labels.insert(big_labels.end(), labels.begin(), labels.end());
  }
  CHECK(auroc(big_scores, big_labels) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("confusion identity") {
  std::vector<int> a{1, 2, 3, 1, 2, 3};
  auto c = confusion(a, a);
  CHECK(c.accuracy == 1.0);
  CHECK(c.precision == doctest::Approx(1.0));
  CHECK(c.recall == doctest::Approx(1.0));
  CHECK(c.matrix[0][0] == 2);
  CHECK(c.matrix[0][1] == 0);
}

TEST_CASE("binary confusion from known counts") {
  // Actual normal: 1951 predicted normal, 25 predicted conflict.
  // Actual conflict: 9 predicted normal, 504 predicted conflict.
  std::vector<int> truth, pred;
  auto push = [&](int t, int p, int count) {
    for (int i = 0; i < count; ++i) {
      truth.push_back(t);
      pred.push_back(p);
    }
  };
  push(0, 0, 1951);
  push(0, 1, 25);
  push(1, 0, 9);
  push(1, 1, 504);
  auto c = confusion(pred, truth);
  CHECK(c.accuracy == doctest::Approx((1951.0 + 504.0) / 2489.0).epsilon(1e-12));
  CHECK(std::abs(c.accuracy - 0.986) < 5e-4);
  CHECK(c.precision == doctest::Approx(1951.0 / 1960.0).epsilon(1e-12));
  CHECK(c.recall == doctest::Approx(1951.0 / 1976.0).epsilon(1e-12));
}

TEST_CASE("single misclassification accuracy") {
  std::vector<int> truth(100, 1), pred(100, 1);
  pred[13] = 2;
  CHECK(confusion(pred, truth).accuracy == doctest::Approx(0.99).epsilon(1e-12));
}

TEST_CASE("confusion length mismatch rejected") {
  CHECK_THROWS_AS(confusion({1, 2}, {1}), std::invalid_argument);
}
