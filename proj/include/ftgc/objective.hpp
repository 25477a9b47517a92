// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ftgc/assignment.hpp"
#include "ftgc/embedding.hpp"
#include "ftgc/graph.hpp"

namespace ftgc {

struct LossBreakdown {
  double trace_term = 0.0;
  double smooth_term = 0.0;
  double total = 0.0;
  double alpha = 0.0;
};

/// Gradient with the same shape catalogue as ModelParams.
struct ParamGradient {
  Matrix w1;
  std::vector<Matrix> w_past;
  std::vector<Matrix> w_future;
  Vector attn_logits;

  static ParamGradient zeros_like(const ModelParams& p);
  const Matrix& weight(std::int64_t offset) const;
  Matrix& weight(std::int64_t offset);
};

/// Tr(H^T L H); for the combinatorial Laplacian this equals
/// sum_{i<j} A_ij ||h_i - h_j||^2.
double spectral_trace(const Matrix& H, const Snapshot& s, LaplacianKind kind);

/// sum_t Tr(H_t^T L_t H_t) + alpha * sum_{t>=2} ||H_t - H_{t-1}||_F^2.
LossBreakdown local_loss(const TemporalGraph& g, const EmbeddingSequence& H,
                         double alpha,
                         LaplacianKind kind = LaplacianKind::Combinatorial);

/// Analytic gradient of local_loss(forward_all(...)) in every parameter.
ParamGradient loss_gradient(const TemporalGraph& g, const FeatureSet& X,
                            const ModelParams& p, double alpha,
                            LaplacianKind kind = LaplacianKind::Combinatorial);

/// sum_t Tr(F_t^T L_t F_t) + beta * sum_{t>=2} ||F_t - F_{t-1}||_F^2,
/// evaluated on hard assignments.
double clustering_objective(const TemporalGraph& g, const ClusterAssignment& F,
                            double beta);

}  // namespace ftgc
