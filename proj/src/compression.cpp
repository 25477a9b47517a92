// SPDX-License-Identifier: Apache-2.0
#include "ftgc/compression.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace ftgc {

namespace {

// Round half to even, matching the wire contract exactly.
std::uint32_t round_even(double x) {
  const double fl = std::floor(x);
  const double frac = x - fl;
  double r;
  if (frac > 0.5) {
    r = fl + 1.0;
  } else if (frac < 0.5) {
    r = fl;
  } else {
    r = std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
  }
  return static_cast<std::uint32_t>(r);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : buf_(b) {}

  std::size_t offset() const { return pos_; }

  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) {
      throw std::runtime_error("decode error: truncated buffer at byte offset " +
                               std::to_string(pos_));
    }
  }

  std::uint8_t u8() {
    need(1);
    return buf_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(buf_[pos_]) |
                      static_cast<std::uint16_t>(buf_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    }
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  const std::vector<std::uint8_t>& buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void CompressionConfig::validate() const {
  if (s <= 0.0 || s > 100.0) {
    throw std::invalid_argument("sparsification percentage must lie in (0,100]");
  }
  if (bits != 4 && bits != 8 && bits != 16) {
    throw std::invalid_argument("quantization bits must be 4, 8 or 16");
  }
}

void sparsify_top_s(const std::vector<double>& values, double s,
                    std::vector<std::uint32_t>& indices_out,
                    std::vector<double>& values_out) {
  if (values.empty()) throw std::invalid_argument("sparsify: empty tensor");
  if (s <= 0.0 || s > 100.0) {
    throw std::invalid_argument("sparsify: s must lie in (0,100]");
  }
  const std::size_t len = values.size();
  const std::size_t nnz = static_cast<std::size_t>(
      std::ceil(s / 100.0 * static_cast<double>(len)));
  std::vector<std::uint32_t> order(len);
  std::iota(order.begin(), order.end(), 0);
  // Larger magnitude first; ties go to the lower index.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return std::abs(values[a]) > std::abs(values[b]);
                   });
  order.resize(nnz);
  std::sort(order.begin(), order.end());
  indices_out = std::move(order);
  values_out.clear();
  values_out.reserve(nnz);
  for (auto idx : indices_out) values_out.push_back(values[idx]);
}

void quantize(const std::vector<double>& values, int bits,
              std::vector<std::uint32_t>& levels_out, double& min_val,
              double& max_val) {
  if (values.empty()) throw std::invalid_argument("quantize: empty input");
  if (bits != 4 && bits != 8 && bits != 16) {
    throw std::invalid_argument("quantize: unsupported bit width");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("quantize: non-finite input");
    }
  }
  min_val = *std::min_element(values.begin(), values.end());
  max_val = *std::max_element(values.begin(), values.end());
  levels_out.assign(values.size(), 0);
  if (max_val == min_val) return;  // degenerate range: all levels 0
  const double steps = static_cast<double>((1u << bits) - 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    levels_out[i] =
        round_even((values[i] - min_val) / (max_val - min_val) * steps);
  }
}

std::vector<double> dequantize(const std::vector<std::uint32_t>& levels,
                               double min_val, double max_val, int bits) {
  std::vector<double> out(levels.size());
  if (max_val == min_val) {
    std::fill(out.begin(), out.end(), min_val);
    return out;
  }
  const double steps = static_cast<double>((1u << bits) - 1);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out[i] = min_val + static_cast<double>(levels[i]) / steps *
                           (max_val - min_val);
  }
  return out;
}

std::vector<std::uint8_t> encode_update(const CompressedUpdate& update) {
  std::vector<std::uint8_t> out;
  put_u32(out, static_cast<std::uint32_t>(update.tensors.size()));
  out.push_back(static_cast<std::uint8_t>(update.bits));
  for (const auto& t : update.tensors) {
    put_u16(out, t.tensor_id);
    out.push_back(static_cast<std::uint8_t>(t.shape.size()));
    for (auto d : t.shape) put_u32(out, d);
    put_u32(out, static_cast<std::uint32_t>(t.indices.size()));
    put_f64(out, t.min_val);
    put_f64(out, t.max_val);
    for (auto idx : t.indices) put_u32(out, idx);
    // Pack levels LSB-first within the running bit stream.
    std::uint64_t acc = 0;
    int acc_bits = 0;
    for (auto lvl : t.levels) {
      acc |= static_cast<std::uint64_t>(lvl) << acc_bits;
      acc_bits += update.bits;
      while (acc_bits >= 8) {
        out.push_back(static_cast<std::uint8_t>(acc & 0xff));
        acc >>= 8;
        acc_bits -= 8;
      }
    }
    if (acc_bits > 0) out.push_back(static_cast<std::uint8_t>(acc & 0xff));
  }
  return out;
}

CompressedUpdate decode_update(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  CompressedUpdate upd;
  const std::uint32_t count = r.u32();
  upd.bits = r.u8();
  if (upd.bits != 4 && upd.bits != 8 && upd.bits != 16) {
    throw std::runtime_error("decode error: bad bit width at byte offset 4");
  }
  for (std::uint32_t ti = 0; ti < count; ++ti) {
    SparseTensor t;
    t.tensor_id = r.u16();
    const std::uint8_t rank = r.u8();
    std::uint64_t elems = 1;
    for (std::uint8_t d = 0; d < rank; ++d) {
      t.shape.push_back(r.u32());
      elems *= t.shape.back();
    }
    const std::uint32_t nnz = r.u32();
    t.min_val = r.f64();
    t.max_val = r.f64();
    std::uint32_t prev = 0;
    for (std::uint32_t i = 0; i < nnz; ++i) {
      const std::uint32_t idx = r.u32();
      if (idx >= elems || (i > 0 && idx <= prev)) {
        throw std::runtime_error(
            "decode error: bad index at byte offset " +
            std::to_string(r.offset() - 4));
      }
      prev = idx;
      t.indices.push_back(idx);
    }
    const std::size_t level_bytes = (static_cast<std::size_t>(nnz) * upd.bits + 7) / 8;
    std::uint64_t acc = 0;
    int acc_bits = 0;
    std::size_t consumed = 0;
    const std::uint32_t mask = (1u << upd.bits) - 1;
    for (std::uint32_t i = 0; i < nnz; ++i) {
      while (acc_bits < upd.bits) {
        acc |= static_cast<std::uint64_t>(r.u8()) << acc_bits;
        acc_bits += 8;
        ++consumed;
      }
      t.levels.push_back(static_cast<std::uint32_t>(acc & mask));
      acc >>= upd.bits;
      acc_bits -= upd.bits;
    }
    // Swallow any remaining padding bytes of the packed block.
    while (consumed < level_bytes) {
      r.u8();
      ++consumed;
    }
    upd.tensors.push_back(std::move(t));
  }
  if (!r.done()) {
    throw std::runtime_error("decode error: trailing bytes at byte offset " +
                             std::to_string(r.offset()));
  }
  return upd;
}

}  // namespace ftgc
