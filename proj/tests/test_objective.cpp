// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "ftgc/objective.hpp"

using namespace ftgc;

namespace {

TemporalGraph random_temporal(std::mt19937_64& gen, std::int64_t n,
                              std::int64_t T, double p) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Snapshot> snaps;
  for (std::int64_t t = 0; t < T; ++t) {
    std::vector<WeightedEdge> edges;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (unif(gen) < p) edges.push_back({i, j, 1.0 + unif(gen)});
      }
    }
    snaps.push_back(build_snapshot(edges, n));
  }
  return TemporalGraph(n, std::move(snaps));
}

Matrix random_matrix(std::mt19937_64& gen, std::int64_t r, std::int64_t c) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(r, c);
  for (std::int64_t i = 0; i < r; ++i) {
    for (std::int64_t j = 0; j < c; ++j) m(i, j) = normal(gen);
  }
  return m;
}

// Loss as a plain function of a flattened parameter vector, for the
// finite-difference oracle. Mutates a copy of the params.
struct FlatParams {
  std::vector<double*> slots;

  explicit FlatParams(ModelParams& p) {
    auto add = [&](double* data, std::int64_t count) {
      for (std::int64_t i = 0; i < count; ++i) slots.push_back(data + i);
    };
    add(p.w1.data(), p.w1.size());
    for (auto& w : p.w_past) add(w.data(), w.size());
    for (auto& w : p.w_future) add(w.data(), w.size());
    if (p.mode == TemporalMode::Attention) {
      add(p.attn_logits.data(), p.attn_logits.size());
    }
  }
};

std::vector<double> flatten_gradient(const ParamGradient& g,
                                     const ModelParams& p) {
  std::vector<double> out;
  auto add = [&](const double* data, std::int64_t count) {
    out.insert(out.end(), data, data + count);
  };
  add(g.w1.data(), g.w1.size());
  for (const auto& w : g.w_past) add(w.data(), w.size());
  for (const auto& w : g.w_future) add(w.data(), w.size());
  if (p.mode == TemporalMode::Attention) {
    add(g.attn_logits.data(), g.attn_logits.size());
  }
  return out;
}

// Central finite differences, step 1e-5.
std::vector<double> fd_gradient(const TemporalGraph& g, const FeatureSet& X,
                                ModelParams p, double alpha,
                                double h = 1e-5) {
  FlatParams flat(p);
  std::vector<double> out(flat.slots.size());
  for (std::size_t i = 0; i < flat.slots.size(); ++i) {
    const double saved = *flat.slots[i];
    *flat.slots[i] = saved + h;
    const double up = local_loss(g, forward_all(g, X, p), alpha).total;
    *flat.slots[i] = saved - h;
    const double down = local_loss(g, forward_all(g, X, p), alpha).total;
    *flat.slots[i] = saved;
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

double max_rel_error(const std::vector<double>& analytic,
                     const std::vector<double>& numeric) {
  REQUIRE(analytic.size() == numeric.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double scale = std::max({std::abs(analytic[i]),
                                   std::abs(numeric[i]), 1e-8});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("spectral_trace: equal rows give zero") {
  auto s = build_snapshot({{0, 1, 1.0}, {1, 2, 2.0}}, 3);
  Matrix H = Matrix::Ones(3, 4) * 3.7;
  CHECK(spectral_trace(H, s, LaplacianKind::Combinatorial) ==
        doctest::Approx(0.0));
}

TEST_CASE("spectral_trace on the triangle cut indicator") {
  auto s = build_snapshot({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}, 3);
  Matrix H(3, 2);
  H << 1, 0, 0, 1, 0, 1;  // {0} vs {1,2}: two cut edges
  CHECK(spectral_trace(H, s, LaplacianKind::Combinatorial) ==
        doctest::Approx(4.0));
}

TEST_CASE("spectral_trace on the empty graph is zero") {
  auto s = build_snapshot({}, 4);
  std::mt19937_64 gen(1);
  CHECK(spectral_trace(random_matrix(gen, 4, 3), s,
                       LaplacianKind::Combinatorial) == doctest::Approx(0.0));
}

TEST_CASE("spectral_trace matches the pairwise-difference identity") {
  std::mt19937_64 gen(2);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = random_temporal(gen, 8, 1, 0.4);
    const auto& s = g.snapshot(0);
    Matrix H = random_matrix(gen, 8, 3);
    double direct = 0.0;
    const Matrix A(s.adjacency());
    for (int i = 0; i < 8; ++i) {
      for (int j = i + 1; j < 8; ++j) {
        direct += A(i, j) * (H.row(i) - H.row(j)).squaredNorm();
      }
    }
    CHECK(spectral_trace(H, s, LaplacianKind::Combinatorial) ==
          doctest::Approx(direct).epsilon(1e-10));
    CHECK(spectral_trace(H, s, LaplacianKind::Combinatorial) >= -1e-9);
  }
}

TEST_CASE("local_loss: constant-in-time embeddings have zero smoothness") {
  std::mt19937_64 gen(3);
  auto g = random_temporal(gen, 6, 3, 0.4);
  Matrix h = random_matrix(gen, 6, 2);
  EmbeddingSequence H{{h, h, h}};
  auto loss = local_loss(g, H, 2.0);
  CHECK(loss.smooth_term == 0.0);
  CHECK(loss.total == doctest::Approx(loss.trace_term));
}

TEST_CASE("local_loss with T=1 has no smoothness term") {
  std::mt19937_64 gen(4);
  auto g = random_temporal(gen, 5, 1, 0.5);
  EmbeddingSequence H{{random_matrix(gen, 5, 2)}};
  auto loss = local_loss(g, H, 5.0);
  CHECK(loss.smooth_term == 0.0);
  CHECK(loss.total == doctest::Approx(loss.trace_term));
}

TEST_CASE("local_loss matches a direct elementwise evaluation") {
  std::mt19937_64 gen(5);
  auto g = random_temporal(gen, 7, 4, 0.4);
  EmbeddingSequence H;
  for (int t = 0; t < 4; ++t) H.H.push_back(random_matrix(gen, 7, 3));
  const double alpha = 0.7;
  auto loss = local_loss(g, H, alpha);
  double direct = 0.0;
  for (int t = 0; t < 4; ++t) {
    direct += spectral_trace(H.H[t], g.snapshot(t),
                             LaplacianKind::Combinatorial);
  }
  for (int t = 1; t < 4; ++t) {
    direct += alpha * (H.H[t] - H.H[t - 1]).squaredNorm();
  }
  CHECK(loss.total == doctest::Approx(direct).epsilon(1e-10));
  CHECK(loss.total ==
        doctest::Approx(loss.trace_term + alpha * loss.smooth_term)
            .epsilon(1e-12));
}

TEST_CASE("local_loss is invariant under column permutation") {
  std::mt19937_64 gen(6);
  auto g = random_temporal(gen, 6, 3, 0.5);
  EmbeddingSequence H, P;
  for (int t = 0; t < 3; ++t) {
    Matrix h = random_matrix(gen, 6, 3);
    Matrix perm(6, 3);
    perm.col(0) = h.col(2);
    perm.col(1) = h.col(0);
    perm.col(2) = h.col(1);
    H.H.push_back(h);
    P.H.push_back(perm);
  }
  CHECK(local_loss(g, H, 0.3).total ==
        doctest::Approx(local_loss(g, P, 0.3).total).epsilon(1e-12));
}

TEST_CASE("gradient: all-zero weights with ReLU is a dead fixed point") {
  std::mt19937_64 gen(7);
  auto g = random_temporal(gen, 5, 2, 0.5);
  FeatureSet X{random_matrix(gen, 5, 3)};
  auto p = init_params(3, 2, 1, 0, Activation::ReLU);
  p.w1.setZero();
  for (auto& w : p.w_past) w.setZero();
  for (auto& w : p.w_future) w.setZero();
  auto grad = loss_gradient(g, X, p, 0.5);
  CHECK(grad.w1.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& w : grad.w_past) CHECK(w.cwiseAbs().maxCoeff() == 0.0);
}

// Closed form for the simplest case: identity activation, k=0, T=1.
TEST_CASE("gradient closed form: dW1 = 2 X'A' L (A X W1)") {
  std::mt19937_64 gen(8);
  auto g = random_temporal(gen, 6, 1, 0.5);
  FeatureSet X{random_matrix(gen, 6, 4)};
  auto p = init_params(4, 3, 0, 3, Activation::Identity);
  auto grad = loss_gradient(g, X, p, 0.0);
  const Matrix A(g.snapshot(0).adjacency());
  const Matrix L(laplacian(g.snapshot(0), LaplacianKind::Combinatorial));
  Matrix expect =
      2.0 * X.X.transpose() * A.transpose() * L * (A * X.X * p.w1);
  CHECK((grad.w1 - expect).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 gen(9);
  for (auto mode : {TemporalMode::Sum, TemporalMode::Attention}) {
    for (auto act : {Activation::ReLU, Activation::Identity}) {
      for (int rep = 0; rep < 3; ++rep) {
        auto g = random_temporal(gen, 12, 4, 0.35);
        FeatureSet X{random_matrix(gen, 12, 5)};
        auto p = init_params(5, 3, 1, 100 + rep, act, mode);
        // Non-trivial logits so the softmax path is exercised.
        if (mode == TemporalMode::Attention) {
          for (int i = 0; i < 3; ++i) p.attn_logits[i] = 0.3 * (i - 1);
        }
        const double alpha = 0.4;
        auto analytic = flatten_gradient(loss_gradient(g, X, p, alpha), p);
        auto numeric = fd_gradient(g, X, p, alpha);
        CHECK(max_rel_error(analytic, numeric) < 1e-5);
      }
    }
  }
}

TEST_CASE("clustering_objective: component partition with no churn is zero") {
  auto s = build_snapshot({{0, 1, 1.0}, {2, 3, 1.0}}, 4);
  TemporalGraph g(4, {s, s});
  ClusterAssignment F;
  F.k = 2;
  F.per_snapshot = {{0, 0, 1, 1}, {0, 0, 1, 1}};
  CHECK(clustering_objective(g, F, 3.0) == doctest::Approx(0.0));
}

TEST_CASE("clustering_objective: one switch costs 2 beta") {
  auto s = build_snapshot({{0, 1, 1.0}}, 4);
  TemporalGraph g(4, {s, s});
  ClusterAssignment F;
  F.k = 2;
  F.per_snapshot = {{0, 0, 1, 1}, {0, 0, 1, 0}};
  CHECK(clustering_objective(g, F, 3.0) == doctest::Approx(6.0));
}

TEST_CASE("clustering_objective matches brute-force evaluation") {
  std::mt19937_64 gen(10);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = random_temporal(gen, 8, 3, 0.4);
    ClusterAssignment F;
    F.k = 3;
    for (int t = 0; t < 3; ++t) {
      std::vector<int> labels(8);
      for (auto& l : labels) l = static_cast<int>(gen() % 3);
      F.per_snapshot.push_back(labels);
    }
    const double beta = 0.9;
    double direct = 0.0;
    for (int t = 0; t < 3; ++t) {
      Matrix Ft = F.one_hot(t);
      const Matrix L(laplacian(g.snapshot(t), LaplacianKind::Combinatorial));
      direct += (Ft.transpose() * L * Ft).trace();
    }
    for (int t = 1; t < 3; ++t) {
      direct += beta * (F.one_hot(t) - F.one_hot(t - 1)).squaredNorm();
    }
    CHECK(clustering_objective(g, F, beta) ==
          doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("clustering_objective with beta=0 is additive over snapshots") {
  std::mt19937_64 gen(11);
  auto g = random_temporal(gen, 6, 3, 0.5);
  ClusterAssignment F;
  F.k = 2;
  for (int t = 0; t < 3; ++t) {
    std::vector<int> labels(6);
    for (auto& l : labels) l = static_cast<int>(gen() % 2);
    F.per_snapshot.push_back(labels);
  }
  double total = clustering_objective(g, F, 0.0);
  double parts = 0.0;
  for (int t = 0; t < 3; ++t) {
    TemporalGraph one(6, {g.snapshot(t)});
    ClusterAssignment Ft;
    Ft.k = 2;
    Ft.per_snapshot = {F.per_snapshot[t]};
    parts += clustering_objective(one, Ft, 0.0);
  }
  CHECK(total == doctest::Approx(parts).epsilon(1e-12));
}

TEST_CASE("assignment validation rejects non-one-hot rows") {
  Matrix bad(2, 2);
  bad << 1, 1, 0, 1;
  CHECK_THROWS_AS(ClusterAssignment::from_matrices({bad}, {}),
                  std::invalid_argument);
  Matrix good(2, 2);
  good << 1, 0, 0, 1;
  auto a = ClusterAssignment::from_matrices({good}, {0, 1});
  CHECK(a.per_snapshot[0] == std::vector<int>{0, 1});
}
