// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftgc/graph.hpp"

namespace ftgc {

struct EdgeEvent {
  NodeId src;
  NodeId dst;
  double timestamp;
};

struct DsbmConfig {
  std::int64_t n_nodes = 0;
  std::int64_t n_blocks = 0;
  std::int64_t n_snapshots = 0;
  Matrix pi;             // n_blocks x n_blocks, symmetric, entries in [0,1]
  double persistence = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FederationSplit {
  std::vector<std::vector<NodeId>> client_node_sets;
  std::vector<TemporalGraph> client_graphs;
  std::int64_t n_nodes_total = 0;
};

/// Parse "src dst timestamp" lines; '#' starts a comment.
/// Throws std::runtime_error with the line number on malformed input.
std::vector<EdgeEvent> load_edge_list(const std::string& path);

/// Parse "node label" lines covering [0, n) exactly once; labels are
/// remapped to contiguous 0..C-1 in first-appearance order.
std::vector<int> load_labels(const std::string& path, std::int64_t n_nodes);

/// Split [min_ts, max_ts] into T equal-width bins (last bin closed) and
/// aggregate each bin's events into a snapshot. Zero time range puts
/// everything in the final bin.
TemporalGraph bucket_snapshots(const std::vector<EdgeEvent>& events,
                               std::int64_t n_nodes, std::int64_t T);

struct DsbmSample {
  TemporalGraph graph;
  std::vector<std::vector<int>> memberships;  // per snapshot, length n
};

/// Dynamic stochastic block model draw. Memberships start uniform and
/// persist with probability `persistence` per step; each unordered pair
/// is an independent Bernoulli(pi[g_i][g_j]) at each snapshot.
DsbmSample generate_dsbm(const DsbmConfig& cfg);

/// Seeded uniform permutation split into K near-equal node chunks;
/// client graphs are induced subgraphs.
FederationSplit partition_random(const TemporalGraph& g, std::int64_t K,
                                 std::uint64_t seed);

void write_edge_list(const std::string& path, const TemporalGraph& g);
void write_labels(const std::string& path, const std::vector<int>& labels);

}  // namespace ftgc
