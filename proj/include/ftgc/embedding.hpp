// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ftgc/graph.hpp"

namespace ftgc {

enum class Activation { ReLU, Tanh, Identity };
enum class TemporalMode { Sum, Attention };

/// Learnable weights of the temporal encoder. Offsets run -k..k:
/// W_past[i-1] pairs with A_{t-i}, W_future[j-1] with A_{t+j}, w1 with A_t.
struct ModelParams {
  Matrix w1;
  std::vector<Matrix> w_past;
  std::vector<Matrix> w_future;
  Vector attn_logits;  // length 2k+1, index k + offset
  Activation activation = Activation::ReLU;
  TemporalMode mode = TemporalMode::Sum;

  std::int64_t window() const {
    return static_cast<std::int64_t>(w_past.size());
  }
  std::int64_t d_in() const { return w1.rows(); }
  std::int64_t d_out() const { return w1.cols(); }

  /// Weight matrix for offset o in [-k, k].
  const Matrix& weight(std::int64_t offset) const;
  Matrix& weight(std::int64_t offset);

  /// Total scalar parameter count (weights plus logits in Attention mode).
  std::int64_t element_count() const;
};

struct FeatureSet {
  Matrix X;  // n x d_in, shared across snapshots
};

struct EmbeddingSequence {
  std::vector<Matrix> H;  // T matrices, each n x d_out
};

/// Column 0: mean degree over snapshots, min-max normalized; remaining
/// columns: seeded Gaussians scaled by 1/sqrt(d_in - 1).
FeatureSet default_features(const TemporalGraph& g, std::int64_t d_in,
                            std::uint64_t seed);

/// Glorot-uniform weights, zero attention logits.
ModelParams init_params(std::int64_t d_in, std::int64_t d_out, std::int64_t k,
                        std::uint64_t seed, Activation act = Activation::ReLU,
                        TemporalMode mode = TemporalMode::Sum);

/// Pre-activation spatial aggregation A * X * W.
Matrix spatial_aggregate(const Snapshot& s, const Matrix& X, const Matrix& W);

/// Softmax of attn_logits restricted to the valid offsets (renormalized at
/// sequence boundaries). Offsets are values in [-k, k]; returned weights
/// align with the input order.
std::vector<double> attention_weights(const ModelParams& p,
                                      const std::vector<std::int64_t>& offsets);

/// Offsets o with 1 <= t + o <= T, for 1-based snapshot index t.
std::vector<std::int64_t> valid_offsets(std::int64_t t_1based, std::int64_t T,
                                        std::int64_t k);

double apply_activation(Activation act, double z);
double activation_derivative(Activation act, double z);

/// Windowed forward pass over all snapshots.
EmbeddingSequence forward_all(const TemporalGraph& g, const FeatureSet& X,
                              const ModelParams& p);

}  // namespace ftgc
