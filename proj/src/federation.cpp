// SPDX-License-Identifier: Apache-2.0
#include "ftgc/federation.hpp"

#include <stdexcept>

#include "ftgc/rng.hpp"

namespace ftgc {

namespace {

// Canonical tensor ordering for transport: w1, past window, future window,
// then the attention logits when they are trained.
std::vector<Matrix*> delta_tensors(ParamDelta& d) {
  std::vector<Matrix*> out{&d.w1};
  for (auto& w : d.w_past) out.push_back(&w);
  for (auto& w : d.w_future) out.push_back(&w);
  return out;
}

std::vector<const Matrix*> delta_tensors(const ParamDelta& d) {
  std::vector<const Matrix*> out{&d.w1};
  for (const auto& w : d.w_past) out.push_back(&w);
  for (const auto& w : d.w_future) out.push_back(&w);
  return out;
}

void apply_step(ModelParams& p, const ParamGradient& g, double lr) {
  p.w1 -= lr * g.w1;
  for (std::size_t i = 0; i < p.w_past.size(); ++i) {
    p.w_past[i] -= lr * g.w_past[i];
  }
  for (std::size_t i = 0; i < p.w_future.size(); ++i) {
    p.w_future[i] -= lr * g.w_future[i];
  }
  if (p.mode == TemporalMode::Attention) {
    p.attn_logits -= lr * g.attn_logits;
  }
}

}  // namespace

void FedConfig::validate() const {
  if (clients < 1) throw std::invalid_argument("clients must be >= 1");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (lr < 0.0) throw std::invalid_argument("lr must be >= 0");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (window < 0) throw std::invalid_argument("window must be >= 0");
  if (d_in < 2) throw std::invalid_argument("d_in must be >= 2");
  if (d_out < 1) throw std::invalid_argument("d_out must be >= 1");
  if (compression.enabled) compression.validate();
}

ParamDelta ParamDelta::zeros_like(const ModelParams& p) {
  ParamDelta d;
  d.w1 = Matrix::Zero(p.w1.rows(), p.w1.cols());
  for (const auto& w : p.w_past) {
    d.w_past.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  for (const auto& w : p.w_future) {
    d.w_future.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  d.attn_logits = Vector::Zero(p.attn_logits.size());
  return d;
}

std::uint64_t raw_byte_size(const ModelParams& p) {
  return static_cast<std::uint64_t>(p.element_count()) * sizeof(double);
}

ParamDelta compress_delta(const ParamDelta& delta, const ModelParams& shapes,
                          const CompressionConfig& cc,
                          std::uint64_t* bytes_out) {
  cc.validate();
  CompressedUpdate upd;
  upd.bits = cc.bits;

  auto tensors = delta_tensors(delta);
  std::vector<std::vector<double>> flats;
  for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
    const Matrix& m = *tensors[ti];
    std::vector<double> flat(m.data(), m.data() + m.size());
    flats.push_back(std::move(flat));
  }
  if (shapes.mode == TemporalMode::Attention) {
    flats.emplace_back(delta.attn_logits.data(),
                       delta.attn_logits.data() + delta.attn_logits.size());
  }

  for (std::size_t ti = 0; ti < flats.size(); ++ti) {
    SparseTensor st;
    st.tensor_id = static_cast<std::uint16_t>(ti);
    if (ti < tensors.size()) {
      st.shape = {static_cast<std::uint32_t>(tensors[ti]->rows()),
                  static_cast<std::uint32_t>(tensors[ti]->cols())};
    } else {
      st.shape = {static_cast<std::uint32_t>(delta.attn_logits.size())};
    }
    std::vector<double> kept;
    sparsify_top_s(flats[ti], cc.s, st.indices, kept);
    quantize(kept, cc.bits, st.levels, st.min_val, st.max_val);
    upd.tensors.push_back(std::move(st));
  }

  const auto bytes = encode_update(upd);
  if (bytes_out) *bytes_out = bytes.size();
  const CompressedUpdate decoded = decode_update(bytes);

  ParamDelta lossy = ParamDelta::zeros_like(shapes);
  auto lossy_tensors = delta_tensors(lossy);
  for (const auto& st : decoded.tensors) {
    const auto vals =
        dequantize(st.levels, st.min_val, st.max_val, decoded.bits);
    if (st.tensor_id < lossy_tensors.size()) {
      Matrix& m = *lossy_tensors[st.tensor_id];
      for (std::size_t i = 0; i < st.indices.size(); ++i) {
        m.data()[st.indices[i]] = vals[i];
      }
    } else {
      for (std::size_t i = 0; i < st.indices.size(); ++i) {
        lossy.attn_logits[st.indices[i]] = vals[i];
      }
    }
  }
  return lossy;
}

ParamDelta client_update(const ModelParams& p, const ClientState& c,
                         const FedConfig& cfg, std::uint64_t* bytes_out) {
  ModelParams local = p;
  for (std::int64_t step = 0; step < cfg.local_steps; ++step) {
    const ParamGradient g = loss_gradient(c.graph, c.features, local, cfg.alpha);
    apply_step(local, g, cfg.lr);
  }
  ParamDelta delta = ParamDelta::zeros_like(p);
  delta.w1 = local.w1 - p.w1;
  for (std::size_t i = 0; i < p.w_past.size(); ++i) {
    delta.w_past[i] = local.w_past[i] - p.w_past[i];
  }
  for (std::size_t i = 0; i < p.w_future.size(); ++i) {
    delta.w_future[i] = local.w_future[i] - p.w_future[i];
  }
  delta.attn_logits = local.attn_logits - p.attn_logits;

  if (cfg.compression.enabled) {
    return compress_delta(delta, p, cfg.compression, bytes_out);
  }
  if (bytes_out) *bytes_out = raw_byte_size(p);
  return delta;
}

ModelParams aggregate(const std::vector<ParamDelta>& deltas,
                      const ModelParams& p,
                      const std::vector<double>* weights) {
  if (deltas.empty()) throw std::invalid_argument("aggregate: no deltas");
  if (weights && weights->size() != deltas.size()) {
    throw std::invalid_argument("aggregate: weight count mismatch");
  }
  ModelParams out = p;
  ParamDelta mean = ParamDelta::zeros_like(p);
  double total_w = 0.0;
  for (std::size_t c = 0; c < deltas.size(); ++c) {
    const double w = weights ? (*weights)[c] : 1.0;
    total_w += w;
    const auto& d = deltas[c];
    if (d.w1.rows() != p.w1.rows() || d.w1.cols() != p.w1.cols() ||
        d.w_past.size() != p.w_past.size() ||
        d.w_future.size() != p.w_future.size()) {
      throw std::invalid_argument("aggregate: delta shape mismatch");
    }
    mean.w1 += w * d.w1;
    for (std::size_t i = 0; i < d.w_past.size(); ++i) {
      mean.w_past[i] += w * d.w_past[i];
    }
    for (std::size_t i = 0; i < d.w_future.size(); ++i) {
      mean.w_future[i] += w * d.w_future[i];
    }
    mean.attn_logits += w * d.attn_logits;
  }
  out.w1 += mean.w1 / total_w;
  for (std::size_t i = 0; i < out.w_past.size(); ++i) {
    out.w_past[i] += mean.w_past[i] / total_w;
  }
  for (std::size_t i = 0; i < out.w_future.size(); ++i) {
    out.w_future[i] += mean.w_future[i] / total_w;
  }
  out.attn_logits += mean.attn_logits / total_w;
  return out;
}

std::vector<ClientState> make_clients(const TemporalGraph& full,
                                      const FederationSplit& split,
                                      const FedConfig& cfg) {
  const FeatureSet global_features =
      default_features(full, cfg.d_in, cfg.seed);
  std::vector<ClientState> clients;
  for (std::size_t c = 0; c < split.client_graphs.size(); ++c) {
    const auto& nodes = split.client_node_sets[c];
    Matrix X(nodes.size(), cfg.d_in);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      X.row(i) = global_features.X.row(nodes[i]);
    }
    clients.push_back({static_cast<std::int64_t>(c), split.client_graphs[c],
                       FeatureSet{std::move(X)},
                       derive_seed(cfg.seed, static_cast<std::uint64_t>(c))});
  }
  return clients;
}

std::pair<ModelParams, TrainHistory> run_training(const TemporalGraph& full,
                                                  const FederationSplit& split,
                                                  const FedConfig& cfg) {
  cfg.validate();
  if (static_cast<std::int64_t>(split.client_graphs.size()) != cfg.clients) {
    throw std::invalid_argument("split does not match configured client count");
  }
  const auto clients = make_clients(full, split, cfg);
  ModelParams global = init_params(cfg.d_in, cfg.d_out, cfg.window, cfg.seed,
                                   cfg.activation, cfg.mode);

  auto global_loss = [&](const ModelParams& p) {
    double total = 0.0;
    std::vector<double> per_client;
    for (const auto& c : clients) {
      const auto H = forward_all(c.graph, c.features, p);
      const double l = local_loss(c.graph, H, cfg.alpha).total;
      per_client.push_back(l);
      total += l;
    }
    return std::make_pair(total, per_client);
  };

  TrainHistory hist;
  hist.initial_loss = global_loss(global).first;

  std::vector<double> weights;
  if (cfg.weight_by_nodes) {
    for (const auto& c : clients) {
      weights.push_back(static_cast<double>(c.graph.n_nodes()));
    }
  }

  for (std::int64_t r = 0; r < cfg.rounds; ++r) {
    std::vector<ParamDelta> deltas;
    deltas.reserve(clients.size());
    std::uint64_t bytes_compressed = 0;
    for (const auto& c : clients) {
      std::uint64_t b = 0;
      deltas.push_back(client_update(global, c, cfg, &b));
      bytes_compressed += b;
    }
    global = aggregate(deltas, global,
                       cfg.weight_by_nodes ? &weights : nullptr);

    RoundRecord rec;
    rec.round = r + 1;
    auto [total, per_client] = global_loss(global);
    rec.global_loss = total;
    rec.client_losses = std::move(per_client);
    rec.bytes_raw =
        raw_byte_size(global) * static_cast<std::uint64_t>(cfg.clients);
    rec.bytes_compressed = bytes_compressed;
    hist.rounds.push_back(std::move(rec));
  }
  return {std::move(global), std::move(hist)};
}

}  // namespace ftgc
