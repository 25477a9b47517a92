// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftgc/graph.hpp"

namespace ftgc {

struct MetricReport {
  std::optional<double> acc;
  std::optional<double> nmi;
  std::optional<double> ari;
  std::optional<double> f1;
  double modularity = 0.0;
  double ncut = 0.0;
  double temporal_modularity = 0.0;

  /// Single JSON object, lowercase keys, 6-decimal values. Label-based
  /// metrics are omitted when no ground truth was available.
  std::string to_json() const;
};

/// Optimal cluster-to-class mapping (maximum-weight assignment on the
/// confusion matrix), then matched fraction.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// I(U;V) normalized by the arithmetic mean of the entropies.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

/// Pair-counting adjusted Rand index.
double ari(const std::vector<int>& pred, const std::vector<int>& truth);

/// Macro-averaged F1 over true classes under the optimal mapping.
double f1(const std::vector<int>& pred, const std::vector<int>& truth);

/// Newman modularity of a hard partition, empty snapshot -> 0.
double modularity(const Snapshot& s, const std::vector<int>& labels);

/// Sum over clusters of cut/volume; zero-volume clusters contribute 0.
double normalized_cut(const Snapshot& s, const std::vector<int>& labels);

/// Mean per-snapshot modularity plus beta times the cluster-persistence
/// fraction across consecutive snapshots.
double temporal_modularity(const TemporalGraph& g,
                           const std::vector<std::vector<int>>& labels_per_t,
                           double beta);

/// Maximum-weight assignment on a rectangular nonnegative matrix, padded
/// square with zeros. Returns row -> column (-1 for padded rows).
std::vector<int> max_assignment(const Matrix& weights);

}  // namespace ftgc
