// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ftgc/embedding.hpp"
#include "ftgc/federation.hpp"

namespace ftgc {

/// Binary params file: magic "FTGP", u8 mode, u8 activation, u32 window k,
/// u32 d_in, u32 d_out, then little-endian f64 entries of w1, the past and
/// future windows, and the attention logits, in column-major order.
void save_params(const std::string& path, const ModelParams& p);
ModelParams load_params(const std::string& path);

/// One matrix per snapshot: header line "t n d_out" then n rows of
/// decimal floats.
void save_embeddings(const std::string& path, const EmbeddingSequence& H);

/// Line-delimited "round, global_loss, bytes_raw, bytes_compressed".
void save_history(const std::string& path, const TrainHistory& h);

}  // namespace ftgc
