#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace decode::metrics {

// Staircase of evaluation results: entry (domain i, phase j) exists for
// j >= i, indices 0-based internally.
class ResultMatrix {
 public:
  explicit ResultMatrix(int n_domains);

  int domains() const { return n_; }
  void set(int domain, int phase, double value);
  double at(int domain, int phase) const;
  bool complete() const;

 private:
  int n_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<bool>> present_;
};

// Minimum displacement errors over a set of predicted components.
double min_ade(const std::vector<Eigen::MatrixX2d>& components, const Eigen::MatrixX2d& gt);
double min_fde(const std::vector<Eigen::MatrixX2d>& components, const Eigen::MatrixX2d& gt);

// Mean of the staircase; the per-domain average error after the full cycle.
double aer(const ResultMatrix& r);
// Mean increase of a domain's error after later phases; 0 for a single domain.
double fgt(const ResultMatrix& r);

// Rank-based AUROC with ties counting one half. Exact pair counting for
// n <= 10000, tie-corrected rank statistic above (both give the same value;
// the rank form avoids the quadratic loop).
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

struct ConfusionResult {
  std::vector<int> class_ids;               // sorted distinct labels
  std::vector<std::vector<long>> matrix;    // [actual][predicted]
  double accuracy = 0.0;
  double precision = 0.0;  // binary for 2 classes (positive = smaller id), macro otherwise
  double recall = 0.0;
};

ConfusionResult confusion(const std::vector<int>& selected, const std::vector<int>& truth);

std::string result_matrix_csv(const ResultMatrix& ade, const ResultMatrix& fde,
                              const std::vector<std::string>& domain_names);

}  // namespace decode::metrics
