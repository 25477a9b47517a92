// SPDX-License-Identifier: Apache-2.0
#include "ftgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace ftgc {

Snapshot::Snapshot(SparseMat adjacency, std::int64_t edge_count, double t_lo,
                   double t_hi)
    : adj_(std::move(adjacency)), m_(edge_count), t_lo_(t_lo), t_hi_(t_hi) {
  if (adj_.rows() != adj_.cols()) {
    throw std::invalid_argument("snapshot adjacency must be square");
  }
}

Vector Snapshot::degrees() const {
  Vector d = Vector::Zero(adj_.rows());
  for (int k = 0; k < adj_.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(adj_, k); it; ++it) {
      d[it.row()] += it.value();
    }
  }
  return d;
}

double Snapshot::edge_mass() const {
  double total = 0.0;
  for (int k = 0; k < adj_.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(adj_, k); it; ++it) {
      if (it.row() < it.col()) total += it.value();
    }
  }
  return total;
}

TemporalGraph::TemporalGraph(std::int64_t n_nodes,
                             std::vector<Snapshot> snapshots,
                             std::optional<std::vector<int>> labels)
    : n_nodes_(n_nodes),
      snapshots_(std::move(snapshots)),
      labels_(std::move(labels)) {
  if (n_nodes_ < 1) throw std::invalid_argument("n_nodes must be >= 1");
  if (snapshots_.empty()) {
    throw std::invalid_argument("temporal graph needs at least one snapshot");
  }
  for (const auto& s : snapshots_) {
    if (s.n_nodes() != n_nodes_) {
      throw std::invalid_argument("snapshot node count mismatch");
    }
  }
  if (labels_) {
    if (static_cast<std::int64_t>(labels_->size()) != n_nodes_) {
      throw std::invalid_argument("label vector length mismatch");
    }
    for (int lab : *labels_) {
      if (lab < 0) throw std::invalid_argument("labels must be nonnegative");
    }
  }
}

Snapshot build_snapshot(const std::vector<WeightedEdge>& edges,
                        std::int64_t n_nodes, double t_lo, double t_hi) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be >= 1");
  // Accumulate on canonical (min,max) keys so (i,j) and (j,i) merge.
  std::map<std::pair<NodeId, NodeId>, double> acc;
  for (const auto& e : edges) {
    if (e.src < 0 || e.src >= n_nodes || e.dst < 0 || e.dst >= n_nodes) {
      throw std::invalid_argument("edge endpoint out of node range");
    }
    if (e.weight <= 0.0) {
      throw std::invalid_argument("edge weight must be positive");
    }
    if (e.src == e.dst) continue;  // self-loops dropped
    auto key = std::minmax(e.src, e.dst);
    acc[{key.first, key.second}] += e.weight;
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * acc.size());
  for (const auto& [key, w] : acc) {
    trips.emplace_back(static_cast<int>(key.first),
                       static_cast<int>(key.second), w);
    trips.emplace_back(static_cast<int>(key.second),
                       static_cast<int>(key.first), w);
  }
  SparseMat adj(static_cast<int>(n_nodes), static_cast<int>(n_nodes));
  adj.setFromTriplets(trips.begin(), trips.end());
  adj.makeCompressed();
  return Snapshot(std::move(adj), static_cast<std::int64_t>(acc.size()), t_lo,
                  t_hi);
}

SparseMat laplacian(const Snapshot& s, LaplacianKind kind) {
  const SparseMat& a = s.adjacency();
  const auto n = a.rows();
  Vector d = s.degrees();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nonZeros() + n);
  if (kind == LaplacianKind::Combinatorial) {
    for (int i = 0; i < n; ++i) {
      if (d[i] != 0.0) trips.emplace_back(i, i, d[i]);
    }
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(a, k); it; ++it) {
        trips.emplace_back(static_cast<int>(it.row()),
                           static_cast<int>(it.col()), -it.value());
      }
    }
  } else {
    // Isolated nodes get zero rows rather than the identity diagonal.
    Vector dinv_sqrt(n);
    for (int i = 0; i < n; ++i) {
      dinv_sqrt[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
    }
    for (int i = 0; i < n; ++i) {
      if (d[i] > 0.0) trips.emplace_back(i, i, 1.0);
    }
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(a, k); it; ++it) {
        const auto i = it.row();
        const auto j = it.col();
        trips.emplace_back(static_cast<int>(i), static_cast<int>(j),
                           -dinv_sqrt[i] * it.value() * dinv_sqrt[j]);
      }
    }
  }
  SparseMat lap(static_cast<int>(n), static_cast<int>(n));
  lap.setFromTriplets(trips.begin(), trips.end());
  lap.makeCompressed();
  return lap;
}

TemporalGraph restrict_subgraph(const TemporalGraph& g,
                                const std::vector<NodeId>& nodes) {
  if (nodes.empty()) throw std::invalid_argument("empty node set");
  std::vector<NodeId> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::unordered_map<NodeId, NodeId> remap;
  remap.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= g.n_nodes()) {
      throw std::invalid_argument("subgraph node id out of range");
    }
    remap[sorted[i]] = static_cast<NodeId>(i);
  }
  const auto sub_n = static_cast<std::int64_t>(sorted.size());
  std::vector<Snapshot> subs;
  subs.reserve(g.n_snapshots());
  for (const auto& s : g.snapshots()) {
    std::vector<WeightedEdge> kept;
    const SparseMat& a = s.adjacency();
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(a, k); it; ++it) {
        if (it.row() >= it.col()) continue;
        auto ri = remap.find(it.row());
        auto rj = remap.find(it.col());
        if (ri != remap.end() && rj != remap.end()) {
          kept.push_back({ri->second, rj->second, it.value()});
        }
      }
    }
    subs.push_back(build_snapshot(kept, sub_n, s.t_lo(), s.t_hi()));
  }
  std::optional<std::vector<int>> sub_labels;
  if (g.labels()) {
    std::vector<int> sliced;
    sliced.reserve(sorted.size());
    for (NodeId v : sorted) sliced.push_back((*g.labels())[v]);
    sub_labels = std::move(sliced);
  }
  return TemporalGraph(sub_n, std::move(subs), std::move(sub_labels));
}

}  // namespace ftgc
