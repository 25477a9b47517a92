// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ftgc/graph.hpp"

namespace ftgc {

/// Per-snapshot hard assignments plus a consensus static labeling.
/// Stored as label vectors; F_t one-hot matrices are materialized on demand.
struct ClusterAssignment {
  std::vector<std::vector<int>> per_snapshot;  // T vectors of length n
  std::vector<int> consensus;                  // length n
  std::int64_t k = 0;

  /// One-hot n x k matrix F_t.
  Matrix one_hot(std::int64_t t) const;

  /// Validating constructor from dense one-hot matrices.
  /// Throws std::invalid_argument on a non-one-hot row.
  static ClusterAssignment from_matrices(const std::vector<Matrix>& F,
                                         std::vector<int> consensus);

  void validate() const;
};

}  // namespace ftgc
