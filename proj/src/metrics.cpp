#include "decode/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace decode::metrics {

ResultMatrix::ResultMatrix(int n_domains) : n_(n_domains) {
  if (n_ <= 0) throw std::invalid_argument("ResultMatrix: need at least one domain");
  rows_.resize(n_);
  present_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    rows_[i].resize(n_ - i, 0.0);
    present_[i].resize(n_ - i, false);
  }
}

void ResultMatrix::set(int domain, int phase, double value) {
  if (domain < 0 || domain >= n_ || phase < domain || phase >= n_)
    throw std::invalid_argument("ResultMatrix::set: entry (" + std::to_string(domain) + ", " +
                                std::to_string(phase) + ") outside the staircase");
  if (value < 0.0) throw std::invalid_argument("ResultMatrix::set: negative error value");
  rows_[domain][phase - domain] = value;
  present_[domain][phase - domain] = true;
}

double ResultMatrix::at(int domain, int phase) const {
  if (domain < 0 || domain >= n_ || phase < domain || phase >= n_)
    throw std::invalid_argument("ResultMatrix::at: entry (" + std::to_string(domain) + ", " +
                                std::to_string(phase) + ") outside the staircase");
  if (!present_[domain][phase - domain])
    throw std::invalid_argument("ResultMatrix::at: entry (" + std::to_string(domain) + ", " +
                                std::to_string(phase) + ") missing");
  return rows_[domain][phase - domain];
}

bool ResultMatrix::complete() const {
  for (const auto& row : present_)
    for (bool p : row)
      if (!p) return false;
  return true;
}

namespace {

void check_horizon(const std::vector<Eigen::MatrixX2d>& components, const Eigen::MatrixX2d& gt) {
  if (components.empty()) throw std::invalid_argument("min_ade/min_fde: no components");
  for (const auto& c : components)
    if (c.rows() != gt.rows())
      throw std::invalid_argument("min_ade/min_fde: horizon mismatch, component has " +
                                  std::to_string(c.rows()) + " steps, ground truth has " +
                                  std::to_string(gt.rows()));
}

}  // namespace

double min_ade(const std::vector<Eigen::MatrixX2d>& components, const Eigen::MatrixX2d& gt) {
  check_horizon(components, gt);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : components)
    best = std::min(best, (c - gt).rowwise().norm().mean());
  return best;
}

double min_fde(const std::vector<Eigen::MatrixX2d>& components, const Eigen::MatrixX2d& gt) {
  check_horizon(components, gt);
  const Eigen::Index last = gt.rows() - 1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : components)
    best = std::min(best, (c.row(last) - gt.row(last)).norm());
  return best;
}

double aer(const ResultMatrix& r) {
  if (!r.complete()) throw std::invalid_argument("aer: incomplete staircase");
  const int n = r.domains();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) total += r.at(i, j);
  return total / (n * (n + 1) / 2.0);
}

double fgt(const ResultMatrix& r) {
  if (!r.complete()) throw std::invalid_argument("fgt: incomplete staircase");
  const int n = r.domains();
  if (n == 1) return 0.0;  // the formula's denominator vanishes; defined as no forgetting
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) total += r.at(i, j) - r.at(i, i);
  return total / (n * (n - 1) / 2.0);
}

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auroc: scores and labels length mismatch");
  long n_pos = 0, n_neg = 0;
  for (int l : labels) (l ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("auroc: both classes must be present");

  const std::size_t n = scores.size();
  if (n <= 10000) {
    double wins = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!labels[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[j]) continue;
        if (scores[i] > scores[j]) wins += 1.0;
        else if (scores[i] == scores[j]) wins += 0.5;
      }
    }
    return wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
  }

  // Tie-corrected rank statistic.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = 0.5 * (i + j) + 1.0;  // average 1-based rank of the tie group
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double rank_sum_pos = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (labels[k]) rank_sum_pos += rank[k];
  const double u = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

ConfusionResult confusion(const std::vector<int>& selected, const std::vector<int>& truth) {
  if (selected.size() != truth.size())
    throw std::invalid_argument("confusion: length mismatch, " + std::to_string(selected.size()) +
                                " predictions vs " + std::to_string(truth.size()) + " labels");
  if (selected.empty()) throw std::invalid_argument("confusion: empty input");

  std::map<int, int> idx;
  for (int v : truth) idx.emplace(v, 0);
  for (int v : selected) idx.emplace(v, 0);
  int k = 0;
  for (auto& [id, slot] : idx) slot = k++;

  ConfusionResult out;
  for (const auto& [id, slot] : idx) out.class_ids.push_back(id);
  out.matrix.assign(k, std::vector<long>(k, 0));
  long correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out.matrix[idx[truth[i]]][idx[selected[i]]]++;
    if (truth[i] == selected[i]) ++correct;
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

  auto column_sum = [&](int c) {
    long s = 0;
    for (int r = 0; r < k; ++r) s += out.matrix[r][c];
    return s;
  };
  auto row_sum = [&](int r) {
    long s = 0;
    for (int c = 0; c < k; ++c) s += out.matrix[r][c];
    return s;
  };

  if (k == 2) {
    // Binary: positive class is the smaller id (slot 0).
    const double tp = static_cast<double>(out.matrix[0][0]);
    out.precision = column_sum(0) ? tp / column_sum(0) : 0.0;
    out.recall = row_sum(0) ? tp / row_sum(0) : 0.0;
  } else {
    double p = 0.0, r = 0.0;
    for (int c = 0; c < k; ++c) {
      const double tp = static_cast<double>(out.matrix[c][c]);
      p += column_sum(c) ? tp / column_sum(c) : 0.0;
      r += row_sum(c) ? tp / row_sum(c) : 0.0;
    }
    out.precision = p / k;
    out.recall = r / k;
  }
  return out;
}

std::string result_matrix_csv(const ResultMatrix& ade, const ResultMatrix& fde,
                              const std::vector<std::string>& domain_names) {
  std::ostringstream os;
  os << "domain,phase,min_ade_m,min_fde_m\n";
  os.precision(17);
  for (int i = 0; i < ade.domains(); ++i)
    for (int j = i; j < ade.domains(); ++j) {
      os << (i < static_cast<int>(domain_names.size()) ? domain_names[i] : std::to_string(i + 1));
      os << "," << (j + 1) << "," << ade.at(i, j) << "," << fde.at(i, j) << "\n";
    }
  return os.str();
}

}  // namespace decode::metrics
