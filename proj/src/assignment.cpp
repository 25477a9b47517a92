// SPDX-License-Identifier: Apache-2.0
#include "ftgc/assignment.hpp"

#include <stdexcept>

namespace ftgc {

Matrix ClusterAssignment::one_hot(std::int64_t t) const {
  const auto& labels = per_snapshot.at(t);
  Matrix F = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    F(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return F;
}

ClusterAssignment ClusterAssignment::from_matrices(
    const std::vector<Matrix>& F, std::vector<int> consensus) {
  if (F.empty()) throw std::invalid_argument("empty assignment sequence");
  ClusterAssignment out;
  out.k = F.front().cols();
  for (const auto& Ft : F) {
    if (Ft.cols() != out.k) {
      throw std::invalid_argument("assignment matrices disagree on k");
    }
    std::vector<int> labels(Ft.rows());
    for (Eigen::Index i = 0; i < Ft.rows(); ++i) {
      int ones = 0;
      int which = -1;
      for (Eigen::Index j = 0; j < Ft.cols(); ++j) {
        const double v = Ft(i, j);
        if (v == 1.0) {
          ++ones;
          which = static_cast<int>(j);
        } else if (v != 0.0) {
          throw std::invalid_argument("assignment row is not one-hot");
        }
      }
      if (ones != 1) {
        throw std::invalid_argument("assignment row is not one-hot");
      }
      labels[i] = which;
    }
    out.per_snapshot.push_back(std::move(labels));
  }
  out.consensus = std::move(consensus);
  out.validate();
  return out;
}

void ClusterAssignment::validate() const {
  if (k < 1) throw std::invalid_argument("cluster count must be >= 1");
  if (per_snapshot.empty()) {
    throw std::invalid_argument("empty assignment sequence");
  }
  const auto n = per_snapshot.front().size();
  for (const auto& labels : per_snapshot) {
    if (labels.size() != n) {
      throw std::invalid_argument("assignment length mismatch");
    }
    for (int c : labels) {
      if (c < 0 || c >= k) {
        throw std::invalid_argument("assignment label out of range");
      }
    }
  }
  if (!consensus.empty() && consensus.size() != n) {
    throw std::invalid_argument("consensus length mismatch");
  }
  for (int c : consensus) {
    if (c < 0 || c >= k) {
      throw std::invalid_argument("consensus label out of range");
    }
  }
}

}  // namespace ftgc
