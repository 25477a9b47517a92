// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ftgc {

using SparseMat = Eigen::SparseMatrix<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using NodeId = std::int64_t;

enum class LaplacianKind { Combinatorial, Normalized };

struct WeightedEdge {
  NodeId src;
  NodeId dst;
  double weight;
};

/// One time bin of a temporal graph: a symmetric weighted adjacency with
/// zero diagonal over the full node universe.
class Snapshot {
 public:
  Snapshot() = default;
  Snapshot(SparseMat adjacency, std::int64_t edge_count, double t_lo,
           double t_hi);

  const SparseMat& adjacency() const { return adj_; }
  std::int64_t n_nodes() const { return adj_.rows(); }
  std::int64_t edge_count() const { return m_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }

  /// Weighted degree vector d_i = sum_j A_ij.
  Vector degrees() const;
  /// Total weighted edge mass, sum of A_ij over unordered pairs.
  double edge_mass() const;

 private:
  SparseMat adj_;
  std::int64_t m_ = 0;
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
};

/// Fixed node universe with T snapshot adjacencies and optional static labels.
/// Immutable after construction.
class TemporalGraph {
 public:
  TemporalGraph(std::int64_t n_nodes, std::vector<Snapshot> snapshots,
                std::optional<std::vector<int>> labels = std::nullopt);

  std::int64_t n_nodes() const { return n_nodes_; }
  std::int64_t n_snapshots() const {
    return static_cast<std::int64_t>(snapshots_.size());
  }
  const Snapshot& snapshot(std::int64_t t) const { return snapshots_.at(t); }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }

 private:
  std::int64_t n_nodes_;
  std::vector<Snapshot> snapshots_;
  std::optional<std::vector<int>> labels_;
};

/// Merge duplicate and reversed edges, drop self-loops, symmetrize.
/// Throws std::invalid_argument on out-of-range node ids.
Snapshot build_snapshot(const std::vector<WeightedEdge>& edges,
                        std::int64_t n_nodes, double t_lo = 0.0,
                        double t_hi = 0.0);

/// L = D - A, or L_norm = I - D^{-1/2} A D^{-1/2}. Isolated nodes get a
/// zero row and column in both kinds.
SparseMat laplacian(const Snapshot& s, LaplacianKind kind);

/// Induced subgraph on `nodes`, relabeled to [0, |nodes|) by ascending
/// original id. Labels are sliced when present.
TemporalGraph restrict_subgraph(const TemporalGraph& g,
                                const std::vector<NodeId>& nodes);

}  // namespace ftgc
