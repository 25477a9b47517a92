// SPDX-License-Identifier: Apache-2.0
#include "ftgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ftgc {

namespace {

int n_classes(const std::vector<int>& labels) {
  int m = 0;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("negative label");
    m = std::max(m, l + 1);
  }
  return m;
}

Matrix contingency(const std::vector<int>& pred,
                   const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("label vectors must be non-empty, same length");
  }
  Matrix c = Matrix::Zero(n_classes(pred), n_classes(truth));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    c(pred[i], truth[i]) += 1.0;
  }
  return c;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

std::vector<int> max_assignment(const Matrix& weights) {
  const int R = static_cast<int>(weights.rows());
  const int C = static_cast<int>(weights.cols());
  const int n = std::max(R, C);
  // Hungarian algorithm (Jonker-style potentials) on the negated, padded
  // square matrix.
  Matrix cost = Matrix::Zero(n, n);
  cost.topLeftCorner(R, C) = -weights;

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(R, -1);
  for (int j = 1; j <= n; ++j) {
    const int i = p[j];
    if (i >= 1 && i <= R && j <= C) row_to_col[i - 1] = j - 1;
  }
  return row_to_col;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Matrix c = contingency(pred, truth);
  const auto mapping = max_assignment(c);
  double matched = 0.0;
  for (std::size_t r = 0; r < mapping.size(); ++r) {
    if (mapping[r] >= 0) matched += c(static_cast<int>(r), mapping[r]);
  }
  return matched / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Matrix c = contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  const Vector row = c.rowwise().sum();
  const Vector col = c.colwise().sum();
  double hu = 0.0, hv = 0.0, mi = 0.0;
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (row[i] > 0) hu -= row[i] / n * std::log(row[i] / n);
  }
  for (Eigen::Index j = 0; j < col.size(); ++j) {
    if (col[j] > 0) hv -= col[j] / n * std::log(col[j] / n);
  }
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (c(i, j) > 0) {
        mi += c(i, j) / n * std::log(n * c(i, j) / (row[i] * col[j]));
      }
    }
  }
  if (hu == 0.0 && hv == 0.0) return 1.0;  // both single-cluster
  if (hu == 0.0 || hv == 0.0) return 0.0;
  return mi / ((hu + hv) / 2.0);
}

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() < 2) throw std::invalid_argument("ari: need length >= 2");
  const Matrix c = contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  double sum_ij = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) sum_ij += choose2(c(i, j));
  }
  double sum_a = 0.0, sum_b = 0.0;
  const Vector row = c.rowwise().sum();
  const Vector col = c.colwise().sum();
  for (Eigen::Index i = 0; i < row.size(); ++i) sum_a += choose2(row[i]);
  for (Eigen::Index j = 0; j < col.size(); ++j) sum_b += choose2(col[j]);
  const double expected = sum_a * sum_b / choose2(n);
  const double max_index = (sum_a + sum_b) / 2.0;
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (sum_ij - expected) / (max_index - expected);
}

double f1(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Matrix c = contingency(pred, truth);
  const Vector rows = c.rowwise().sum();
  const Vector cols = c.colwise().sum();
  // Matched count decides the mapping; a secondary per-pair F1 objective
  // picks canonically among count-optimal assignments, which keeps the
  // score invariant under relabeling.
  const double big = static_cast<double>(c.cols()) + 1.0;
  Matrix weights(c.rows(), c.cols());
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    for (Eigen::Index cls = 0; cls < c.cols(); ++cls) {
      const double tp = c(r, cls);
      const double pair_f1 =
          tp > 0.0 ? 2.0 * tp / (rows[r] + cols[cls]) : 0.0;
      weights(r, cls) = c(r, cls) * big + pair_f1;
    }
  }
  const auto mapping = max_assignment(weights);
  const int n_true = static_cast<int>(c.cols());
  // Invert: class -> predicted cluster mapped onto it (-1 if none).
  std::vector<int> cls_to_cluster(n_true, -1);
  for (std::size_t r = 0; r < mapping.size(); ++r) {
    if (mapping[r] >= 0) cls_to_cluster[mapping[r]] = static_cast<int>(r);
  }
  const Vector row = c.rowwise().sum();
  const Vector col = c.colwise().sum();
  double total = 0.0;
  for (int cls = 0; cls < n_true; ++cls) {
    const int clu = cls_to_cluster[cls];
    if (clu < 0) continue;  // no predicted cluster maps here: F1 = 0
    const double tp = c(clu, cls);
    if (tp == 0.0) continue;
    const double precision = tp / row[clu];
    const double recall = tp / col[cls];
    total += 2.0 * precision * recall / (precision + recall);
  }
  return total / static_cast<double>(n_true);
}

double modularity(const Snapshot& s, const std::vector<int>& labels) {
  if (static_cast<std::int64_t>(labels.size()) != s.n_nodes()) {
    throw std::invalid_argument("modularity: label length mismatch");
  }
  const double two_m = 2.0 * s.edge_mass();
  if (two_m == 0.0) return 0.0;
  const Vector d = s.degrees();
  double q = 0.0;
  // A term over the sparse structure.
  const SparseMat& a = s.adjacency();
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(a, k); it; ++it) {
      if (labels[it.row()] == labels[it.col()]) q += it.value();
    }
  }
  // Degree term grouped by cluster: sum over same-cluster ordered pairs
  // (including i = j) of d_i d_j / 2m equals sum_c vol(c)^2 / 2m.
  const int nc = n_classes(labels);
  std::vector<double> vol(nc, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) vol[labels[i]] += d[i];
  for (double vc : vol) q -= vc * vc / two_m;
  return q / two_m;
}

double normalized_cut(const Snapshot& s, const std::vector<int>& labels) {
  if (static_cast<std::int64_t>(labels.size()) != s.n_nodes()) {
    throw std::invalid_argument("ncut: label length mismatch");
  }
  const int nc = n_classes(labels);
  const Vector d = s.degrees();
  std::vector<double> vol(nc, 0.0), cut(nc, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) vol[labels[i]] += d[i];
  const SparseMat& a = s.adjacency();
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(a, k); it; ++it) {
      if (it.row() < it.col() && labels[it.row()] != labels[it.col()]) {
        cut[labels[it.row()]] += it.value();
        cut[labels[it.col()]] += it.value();
      }
    }
  }
  double total = 0.0;
  for (int c = 0; c < nc; ++c) {
    if (vol[c] > 0.0) total += cut[c] / vol[c];
  }
  return total;
}

double temporal_modularity(const TemporalGraph& g,
                           const std::vector<std::vector<int>>& labels_per_t,
                           double beta) {
  const auto T = g.n_snapshots();
  if (static_cast<std::int64_t>(labels_per_t.size()) != T) {
    throw std::invalid_argument("temporal_modularity: length mismatch");
  }
  double qbar = 0.0;
  for (std::int64_t t = 0; t < T; ++t) {
    qbar += modularity(g.snapshot(t), labels_per_t[t]);
  }
  qbar /= static_cast<double>(T);
  if (T == 1) return qbar;
  // Persistence fraction: same-cluster (node, t) pairs across steps.
  double same = 0.0;
  for (std::int64_t t = 0; t + 1 < T; ++t) {
    for (std::size_t i = 0; i < labels_per_t[t].size(); ++i) {
      if (labels_per_t[t][i] == labels_per_t[t + 1][i]) same += 1.0;
    }
  }
  const double norm = static_cast<double>(g.n_nodes()) *
                      static_cast<double>(T - 1);
  return qbar + beta * same / norm;
}

std::string MetricReport::to_json() const {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(6);
  ss << "{";
  bool first = true;
  auto emit = [&](const char* key, double value) {
    if (!first) ss << ", ";
    first = false;
    ss << "\"" << key << "\": " << value;
  };
  if (acc) emit("acc", *acc);
  if (nmi) emit("nmi", *nmi);
  if (ari) emit("ari", *ari);
  if (f1) emit("f1", *f1);
  emit("modularity", modularity);
  emit("ncut", ncut);
  emit("temporal_modularity", temporal_modularity);
  ss << "}";
  return ss.str();
}

}  // namespace ftgc
