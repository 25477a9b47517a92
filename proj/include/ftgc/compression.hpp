// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace ftgc {

struct CompressionConfig {
  double s = 100.0;  // retained percentage, (0, 100]
  int bits = 8;      // 4, 8 or 16
  bool enabled = false;

  void validate() const;
};

struct SparseTensor {
  std::uint16_t tensor_id = 0;
  std::vector<std::uint32_t> shape;
  std::vector<std::uint32_t> indices;  // strictly ascending flat indices
  std::vector<std::uint32_t> levels;   // each < 2^bits
  double min_val = 0.0;
  double max_val = 0.0;
};

struct CompressedUpdate {
  int bits = 8;
  std::vector<SparseTensor> tensors;
};

/// Keep the ceil(s/100 * len) largest-magnitude entries; magnitude ties
/// break toward the lower index. Indices returned ascending.
void sparsify_top_s(const std::vector<double>& values, double s,
                    std::vector<std::uint32_t>& indices_out,
                    std::vector<double>& values_out);

/// Uniform affine quantization onto 2^b levels with round-half-to-even.
void quantize(const std::vector<double>& values, int bits,
              std::vector<std::uint32_t>& levels_out, double& min_val,
              double& max_val);

std::vector<double> dequantize(const std::vector<std::uint32_t>& levels,
                               double min_val, double max_val, int bits);

/// Little-endian wire format: u32 tensor count, u8 bits, then per tensor
/// tensor_id(u16) rank(u8) dims(u32 each) nnz(u32) min(f64) max(f64)
/// indices(u32 x nnz) levels packed at `bits` bits, padded to a byte.
std::vector<std::uint8_t> encode_update(const CompressedUpdate& update);

/// Exact inverse of encode_update. Throws std::runtime_error naming the
/// byte offset on truncated or malformed input.
CompressedUpdate decode_update(const std::vector<std::uint8_t>& bytes);

}  // namespace ftgc
