// SPDX-License-Identifier: Apache-2.0
#include "ftgc/clustering.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <stdexcept>

#include "ftgc/objective.hpp"
#include "ftgc/rng.hpp"

namespace ftgc {

namespace {

std::vector<int> assign_nearest(const Matrix& points, const Matrix& centroids) {
  std::vector<int> labels(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {  // strict: ties keep the lower index
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[i] = arg;
  }
  return labels;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::int64_t k, std::uint64_t seed,
                    std::int64_t max_iter) {
  const auto n = points.rows();
  const auto d = points.cols();
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");
  if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");

  Rng rng(seed);
  Matrix centroids(k, d);

  // k-means++ seeding.
  centroids.row(0) = points.row(
      static_cast<Eigen::Index>(rng.uniform_int(static_cast<std::uint64_t>(n))));
  Vector dist2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist2[i] = (points.row(i) - centroids.row(0)).squaredNorm();
  }
  for (std::int64_t c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += dist2[i];
        if (cum >= target) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = static_cast<Eigen::Index>(
          rng.uniform_int(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i],
                          (points.row(i) - centroids.row(c)).squaredNorm());
    }
  }

  std::vector<int> labels = assign_nearest(points, centroids);
  std::int64_t iters = 0;
  for (; iters < max_iter; ++iters) {
    // Update step.
    Matrix sums = Matrix::Zero(k, d);
    std::vector<std::int64_t> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (std::int64_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
      }
    }
    // Re-seed empty clusters with the globally farthest point.
    for (std::int64_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        Eigen::Index far = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double dd =
              (points.row(i) - centroids.row(labels[i])).squaredNorm();
          if (dd > best) {
            best = dd;
            far = i;
          }
        }
        centroids.row(c) = points.row(far);
      }
    }
    std::vector<int> next = assign_nearest(points, centroids);
    if (next == labels) break;
    labels = std::move(next);
  }

  KMeansResult res;
  res.labels = std::move(labels);
  res.centroids = std::move(centroids);
  res.iterations = iters;
  for (Eigen::Index i = 0; i < n; ++i) {
    res.inertia += (points.row(i) - res.centroids.row(res.labels[i])).squaredNorm();
  }
  return res;
}

std::vector<int> consensus_labels(const EmbeddingSequence& H, std::int64_t k,
                                  std::uint64_t seed) {
  if (H.H.empty()) throw std::invalid_argument("empty embedding sequence");
  Matrix mean = H.H.front();
  for (std::size_t t = 1; t < H.H.size(); ++t) mean += H.H[t];
  mean /= static_cast<double>(H.H.size());
  return kmeans(mean, k, seed).labels;
}

Matrix spectral_embed(const Snapshot& s, std::int64_t k, LaplacianKind kind) {
  const auto n = s.n_nodes();
  if (k < 1 || k > n) throw std::invalid_argument("spectral_embed: bad k");
  Matrix L = Matrix(laplacian(s, kind));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(L);
  Matrix out = solver.eigenvectors().leftCols(k);
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      if (std::abs(out(i, c)) > 1e-12) {
        if (out(i, c) < 0.0) out.col(c) *= -1.0;
        break;
      }
    }
  }
  return out;
}

ClusterAssignment refine_assignments(const TemporalGraph& g,
                                     const ClusterAssignment& F, double beta,
                                     std::int64_t max_passes) {
  F.validate();
  ClusterAssignment cur = F;
  const auto T = g.n_snapshots();
  const auto n = g.n_nodes();
  const auto k = cur.k;

  for (std::int64_t pass = 0; pass < max_passes; ++pass) {
    bool moved = false;
    for (std::int64_t t = 0; t < T; ++t) {
      const SparseMat& a = g.snapshot(t).adjacency();
      for (std::int64_t i = 0; i < n; ++i) {
        const int from = cur.per_snapshot[t][i];
        // Cut weight toward each cluster from node i at time t.
        std::vector<double> link(k, 0.0);
        double deg = 0.0;
        for (SparseMat::InnerIterator it(a, static_cast<int>(i)); it; ++it) {
          link[cur.per_snapshot[t][it.row()]] += it.value();
          deg += it.value();
        }
        double best_delta = 0.0;
        int best_to = from;
        for (int to = 0; to < k; ++to) {
          if (to == from) continue;
          // Trace change: 2 * (cut(to) - cut(from)).
          double delta = 2.0 * ((deg - link[to]) - (deg - link[from]));
          if (beta > 0.0) {
            if (t > 0) {
              const int prev = cur.per_snapshot[t - 1][i];
              delta += 2.0 * beta *
                       ((to != prev ? 1.0 : 0.0) - (from != prev ? 1.0 : 0.0));
            }
            if (t + 1 < T) {
              const int next = cur.per_snapshot[t + 1][i];
              delta += 2.0 * beta *
                       ((to != next ? 1.0 : 0.0) - (from != next ? 1.0 : 0.0));
            }
          }
          if (delta < best_delta - 1e-12) {
            best_delta = delta;
            best_to = to;
          }
        }
        if (best_to != from) {
          cur.per_snapshot[t][i] = best_to;
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  return cur;
}

}  // namespace ftgc
