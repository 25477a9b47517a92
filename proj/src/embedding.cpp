// SPDX-License-Identifier: Apache-2.0
#include "ftgc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ftgc/rng.hpp"

namespace ftgc {

const Matrix& ModelParams::weight(std::int64_t offset) const {
  if (offset == 0) return w1;
  if (offset < 0) return w_past.at(-offset - 1);
  return w_future.at(offset - 1);
}

Matrix& ModelParams::weight(std::int64_t offset) {
  if (offset == 0) return w1;
  if (offset < 0) return w_past.at(-offset - 1);
  return w_future.at(offset - 1);
}

std::int64_t ModelParams::element_count() const {
  std::int64_t total = w1.size();
  for (const auto& w : w_past) total += w.size();
  for (const auto& w : w_future) total += w.size();
  if (mode == TemporalMode::Attention) total += attn_logits.size();
  return total;
}

FeatureSet default_features(const TemporalGraph& g, std::int64_t d_in,
                            std::uint64_t seed) {
  if (d_in < 2) throw std::invalid_argument("d_in must be >= 2");
  const auto n = g.n_nodes();
  Matrix X(n, d_in);

  Vector mean_deg = Vector::Zero(n);
  for (const auto& s : g.snapshots()) mean_deg += s.degrees();
  mean_deg /= static_cast<double>(g.n_snapshots());
  const double lo = mean_deg.minCoeff();
  const double hi = mean_deg.maxCoeff();
  if (hi > lo) {
    X.col(0) = (mean_deg.array() - lo) / (hi - lo);
  } else {
    X.col(0).setZero();
  }

  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_in - 1));
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 1; j < d_in; ++j) {
      X(i, j) = scale * rng.gaussian();
    }
  }
  return {std::move(X)};
}

ModelParams init_params(std::int64_t d_in, std::int64_t d_out, std::int64_t k,
                        std::uint64_t seed, Activation act, TemporalMode mode) {
  if (k < 0) throw std::invalid_argument("window k must be >= 0");
  Rng rng(seed);
  const double bound = std::sqrt(6.0 / static_cast<double>(d_in + d_out));
  auto draw = [&] {
    Matrix w(d_in, d_out);
    for (std::int64_t i = 0; i < d_in; ++i) {
      for (std::int64_t j = 0; j < d_out; ++j) {
        w(i, j) = rng.uniform(-bound, bound);
      }
    }
    return w;
  };
  ModelParams p;
  p.w1 = draw();
  for (std::int64_t i = 0; i < k; ++i) p.w_past.push_back(draw());
  for (std::int64_t j = 0; j < k; ++j) p.w_future.push_back(draw());
  p.attn_logits = Vector::Zero(2 * k + 1);
  p.activation = act;
  p.mode = mode;
  return p;
}

Matrix spatial_aggregate(const Snapshot& s, const Matrix& X, const Matrix& W) {
  if (s.n_nodes() != X.rows() || X.cols() != W.rows()) {
    throw std::invalid_argument("spatial_aggregate: shape mismatch");
  }
  return s.adjacency() * (X * W);
}

std::vector<std::int64_t> valid_offsets(std::int64_t t_1based, std::int64_t T,
                                        std::int64_t k) {
  std::vector<std::int64_t> out;
  for (std::int64_t o = -k; o <= k; ++o) {
    const std::int64_t tt = t_1based + o;
    if (tt >= 1 && tt <= T) out.push_back(o);
  }
  return out;
}

std::vector<double> attention_weights(
    const ModelParams& p, const std::vector<std::int64_t>& offsets) {
  if (offsets.empty()) {
    throw std::invalid_argument("attention over empty offset set");
  }
  const std::int64_t k = p.window();
  double max_logit = -std::numeric_limits<double>::infinity();
  for (auto o : offsets) max_logit = std::max(max_logit, p.attn_logits[k + o]);
  std::vector<double> w(offsets.size());
  double z = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    w[i] = std::exp(p.attn_logits[k + offsets[i]] - max_logit);
    z += w[i];
  }
  for (auto& wi : w) wi /= z;
  return w;
}

double apply_activation(Activation act, double z) {
  switch (act) {
    case Activation::ReLU:
      return z > 0.0 ? z : 0.0;
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::Identity:
      return z;
  }
  return z;
}

double activation_derivative(Activation act, double z) {
  switch (act) {
    case Activation::ReLU:
      return z > 0.0 ? 1.0 : 0.0;  // sigma'(0) := 0
    case Activation::Tanh: {
      const double th = std::tanh(z);
      return 1.0 - th * th;
    }
    case Activation::Identity:
      return 1.0;
  }
  return 1.0;
}

EmbeddingSequence forward_all(const TemporalGraph& g, const FeatureSet& X,
                              const ModelParams& p) {
  const auto T = g.n_snapshots();
  const auto k = p.window();
  EmbeddingSequence seq;
  seq.H.reserve(T);
  for (std::int64_t t = 1; t <= T; ++t) {
    const auto offs = valid_offsets(t, T, k);
    std::vector<double> w(offs.size(), 1.0);
    if (p.mode == TemporalMode::Attention) w = attention_weights(p, offs);
    Matrix Z = Matrix::Zero(g.n_nodes(), p.d_out());
    for (std::size_t i = 0; i < offs.size(); ++i) {
      Z.noalias() +=
          w[i] * spatial_aggregate(g.snapshot(t + offs[i] - 1), X.X,
                                   p.weight(offs[i]));
    }
    seq.H.push_back(Z.unaryExpr(
        [&](double z) { return apply_activation(p.activation, z); }));
  }
  return seq;
}

}  // namespace ftgc
