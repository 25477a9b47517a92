// SPDX-License-Identifier: Apache-2.0
#include "ftgc/objective.hpp"

#include <stdexcept>

namespace ftgc {

ParamGradient ParamGradient::zeros_like(const ModelParams& p) {
  ParamGradient g;
  g.w1 = Matrix::Zero(p.w1.rows(), p.w1.cols());
  for (const auto& w : p.w_past) {
    g.w_past.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  for (const auto& w : p.w_future) {
    g.w_future.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  g.attn_logits = Vector::Zero(p.attn_logits.size());
  return g;
}

const Matrix& ParamGradient::weight(std::int64_t offset) const {
  if (offset == 0) return w1;
  if (offset < 0) return w_past.at(-offset - 1);
  return w_future.at(offset - 1);
}

Matrix& ParamGradient::weight(std::int64_t offset) {
  if (offset == 0) return w1;
  if (offset < 0) return w_past.at(-offset - 1);
  return w_future.at(offset - 1);
}

double spectral_trace(const Matrix& H, const Snapshot& s, LaplacianKind kind) {
  if (H.rows() != s.n_nodes()) {
    throw std::invalid_argument("spectral_trace: shape mismatch");
  }
  const SparseMat L = laplacian(s, kind);
  return (H.transpose() * (L * H)).trace();
}

LossBreakdown local_loss(const TemporalGraph& g, const EmbeddingSequence& H,
                         double alpha, LaplacianKind kind) {
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (static_cast<std::int64_t>(H.H.size()) != g.n_snapshots()) {
    throw std::invalid_argument("embedding sequence length mismatch");
  }
  LossBreakdown out;
  out.alpha = alpha;
  for (std::int64_t t = 0; t < g.n_snapshots(); ++t) {
    out.trace_term += spectral_trace(H.H[t], g.snapshot(t), kind);
  }
  for (std::size_t t = 1; t < H.H.size(); ++t) {
    out.smooth_term += (H.H[t] - H.H[t - 1]).squaredNorm();
  }
  out.total = out.trace_term + alpha * out.smooth_term;
  return out;
}

ParamGradient loss_gradient(const TemporalGraph& g, const FeatureSet& X,
                            const ModelParams& p, double alpha,
                            LaplacianKind kind) {
  const auto T = g.n_snapshots();
  const auto k = p.window();

  // Shared per-snapshot products A_s * X.
  std::vector<Matrix> AX(T);
  std::vector<SparseMat> L(T);
  for (std::int64_t s = 0; s < T; ++s) {
    AX[s] = g.snapshot(s).adjacency() * X.X;
    L[s] = laplacian(g.snapshot(s), kind);
  }

  // Forward pass, keeping pre-activations.
  std::vector<std::vector<std::int64_t>> offs(T);
  std::vector<std::vector<double>> wts(T);
  std::vector<Matrix> Z(T), H(T);
  for (std::int64_t t = 0; t < T; ++t) {
    offs[t] = valid_offsets(t + 1, T, k);
    wts[t] = p.mode == TemporalMode::Attention
                 ? attention_weights(p, offs[t])
                 : std::vector<double>(offs[t].size(), 1.0);
    Matrix z = Matrix::Zero(g.n_nodes(), p.d_out());
    for (std::size_t i = 0; i < offs[t].size(); ++i) {
      z.noalias() += wts[t][i] * AX[t + offs[t][i]] * p.weight(offs[t][i]);
    }
    Z[t] = std::move(z);
    H[t] = Z[t].unaryExpr(
        [&](double v) { return apply_activation(p.activation, v); });
  }

  ParamGradient grad = ParamGradient::zeros_like(p);
  for (std::int64_t t = 0; t < T; ++t) {
    Matrix dH = 2.0 * (L[t] * H[t]);
    if (t >= 1) dH.noalias() += 2.0 * alpha * (H[t] - H[t - 1]);
    if (t + 1 < T) dH.noalias() -= 2.0 * alpha * (H[t + 1] - H[t]);
    const Matrix G = dH.cwiseProduct(Z[t].unaryExpr(
        [&](double v) { return activation_derivative(p.activation, v); }));

    std::vector<double> dw(offs[t].size(), 0.0);
    for (std::size_t i = 0; i < offs[t].size(); ++i) {
      const auto o = offs[t][i];
      grad.weight(o).noalias() += wts[t][i] * AX[t + o].transpose() * G;
      if (p.mode == TemporalMode::Attention) {
        dw[i] = (AX[t + o] * p.weight(o)).cwiseProduct(G).sum();
      }
    }
    if (p.mode == TemporalMode::Attention) {
      double dot = 0.0;
      for (std::size_t i = 0; i < dw.size(); ++i) dot += wts[t][i] * dw[i];
      for (std::size_t i = 0; i < offs[t].size(); ++i) {
        grad.attn_logits[k + offs[t][i]] += wts[t][i] * (dw[i] - dot);
      }
    }
  }
  return grad;
}

double clustering_objective(const TemporalGraph& g, const ClusterAssignment& F,
                            double beta) {
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  F.validate();
  if (static_cast<std::int64_t>(F.per_snapshot.size()) != g.n_snapshots()) {
    throw std::invalid_argument("assignment sequence length mismatch");
  }
  double total = 0.0;
  for (std::int64_t t = 0; t < g.n_snapshots(); ++t) {
    // Tr(F^T L F) = 2 * cut weight for one-hot F.
    const auto& labels = F.per_snapshot[t];
    const SparseMat& a = g.snapshot(t).adjacency();
    for (int c = 0; c < a.outerSize(); ++c) {
      for (SparseMat::InnerIterator it(a, c); it; ++it) {
        if (it.row() < it.col() && labels[it.row()] != labels[it.col()]) {
          total += 2.0 * it.value();
        }
      }
    }
  }
  for (std::size_t t = 1; t < F.per_snapshot.size(); ++t) {
    std::int64_t changed = 0;
    for (std::size_t i = 0; i < F.per_snapshot[t].size(); ++i) {
      if (F.per_snapshot[t][i] != F.per_snapshot[t - 1][i]) ++changed;
    }
    total += beta * 2.0 * static_cast<double>(changed);
  }
  return total;
}

}  // namespace ftgc
