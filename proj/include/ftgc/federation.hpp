// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ftgc/compression.hpp"
#include "ftgc/data.hpp"
#include "ftgc/embedding.hpp"
#include "ftgc/graph.hpp"
#include "ftgc/objective.hpp"

namespace ftgc {

struct FedConfig {
  std::int64_t clients = 4;
  std::int64_t rounds = 30;
  std::int64_t local_steps = 1;
  double lr = 1e-5;
  double alpha = 0.1;
  CompressionConfig compression;
  std::uint64_t seed = 0;
  bool weight_by_nodes = false;  // default: unweighted mean of deltas

  // Encoder hyperparameters.
  TemporalMode mode = TemporalMode::Sum;
  Activation activation = Activation::ReLU;
  std::int64_t window = 1;
  std::int64_t d_in = 8;
  std::int64_t d_out = 8;

  void validate() const;
};

struct ClientState {
  std::int64_t client_id = 0;
  TemporalGraph graph;
  FeatureSet features;
  std::uint64_t rng_seed = 0;
};

struct RoundRecord {
  std::int64_t round = 0;
  double global_loss = 0.0;  // sum of client losses at the updated params
  std::vector<double> client_losses;
  std::uint64_t bytes_raw = 0;
  std::uint64_t bytes_compressed = 0;
};

struct TrainHistory {
  double initial_loss = 0.0;
  std::vector<RoundRecord> rounds;
};

/// A parameter delta with the same shape catalogue as ModelParams.
struct ParamDelta {
  Matrix w1;
  std::vector<Matrix> w_past;
  std::vector<Matrix> w_future;
  Vector attn_logits;

  static ParamDelta zeros_like(const ModelParams& p);
};

/// E local full-batch gradient steps from p; returns p_after - p_before,
/// passed through the lossy compression path when configured. bytes_out
/// reports the encoded wire size (raw size when compression is off).
ParamDelta client_update(const ModelParams& p, const ClientState& c,
                         const FedConfig& cfg, std::uint64_t* bytes_out = nullptr);

/// p + mean of deltas, summed in ascending client order. The server sees
/// only deltas; no graph or feature data crosses this interface.
ModelParams aggregate(const std::vector<ParamDelta>& deltas,
                      const ModelParams& p,
                      const std::vector<double>* weights = nullptr);

/// Round loop: every client computes a delta from the current global
/// params, then the server averages. Deterministic given cfg.seed.
std::pair<ModelParams, TrainHistory> run_training(const TemporalGraph& full,
                                                  const FederationSplit& split,
                                                  const FedConfig& cfg);

/// Client states with features sliced from the full graph's feature matrix,
/// so component-aligned splits decompose the centralized loss exactly.
std::vector<ClientState> make_clients(const TemporalGraph& full,
                                      const FederationSplit& split,
                                      const FedConfig& cfg);

/// Lossy round-trip of a delta through sparsify + quantize + encode/decode.
/// Returns the decoded delta and the encoded byte count.
ParamDelta compress_delta(const ParamDelta& delta, const ModelParams& shapes,
                          const CompressionConfig& cc, std::uint64_t* bytes_out);

std::uint64_t raw_byte_size(const ModelParams& p);

}  // namespace ftgc
