// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ftgc/assignment.hpp"
#include "ftgc/embedding.hpp"
#include "ftgc/graph.hpp"

namespace ftgc {

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;  // k x d
  double inertia = 0.0;
  std::int64_t iterations = 0;
};

/// k-means++ seeding then Lloyd iterations to an assignment fixpoint.
/// Ties in nearest-centroid break toward the lowest centroid index; an
/// empty cluster is re-seeded with the point farthest from its centroid.
KMeansResult kmeans(const Matrix& points, std::int64_t k, std::uint64_t seed,
                    std::int64_t max_iter = 100);

/// k-means on the time-averaged embedding (1/T) sum_t H_t.
std::vector<int> consensus_labels(const EmbeddingSequence& H, std::int64_t k,
                                  std::uint64_t seed);

/// Orthonormal eigenvectors of the k smallest Laplacian eigenvalues,
/// eigenvalues ascending, first nonzero entry of each column positive.
/// Dense eigensolver; intended for tests and small graphs.
Matrix spectral_embed(const Snapshot& s, std::int64_t k, LaplacianKind kind);

/// Greedy single-node relocation against the clustering objective; scans
/// (t, node) in fixed order and stops when a full pass makes no move.
ClusterAssignment refine_assignments(const TemporalGraph& g,
                                     const ClusterAssignment& F, double beta,
                                     std::int64_t max_passes = 20);

}  // namespace ftgc
