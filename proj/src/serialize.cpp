// SPDX-License-Identifier: Apache-2.0
#include "ftgc/serialize.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ftgc {

namespace {

constexpr char kMagic[4] = {'F', 'T', 'G', 'P'};

void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("params file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

void write_matrix(std::ostream& out, const double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &data[i], sizeof(bits));
    char b[8];
    for (int j = 0; j < 8; ++j) b[j] = static_cast<char>(bits >> (8 * j));
    out.write(b, 8);
  }
}

void read_matrix(std::istream& in, double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("params file truncated");
    std::uint64_t bits = 0;
    for (int j = 0; j < 8; ++j) {
      bits |= static_cast<std::uint64_t>(b[j]) << (8 * j);
    }
    std::memcpy(&data[i], &bits, sizeof(double));
  }
}

}  // namespace

void save_params(const std::string& path, const ModelParams& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write params file: " + path);
  out.write(kMagic, 4);
  out.put(static_cast<char>(p.mode == TemporalMode::Attention ? 1 : 0));
  out.put(static_cast<char>(p.activation));
  write_u32(out, static_cast<std::uint32_t>(p.window()));
  write_u32(out, static_cast<std::uint32_t>(p.d_in()));
  write_u32(out, static_cast<std::uint32_t>(p.d_out()));
  write_matrix(out, p.w1.data(), p.w1.size());
  for (const auto& w : p.w_past) write_matrix(out, w.data(), w.size());
  for (const auto& w : p.w_future) write_matrix(out, w.data(), w.size());
  write_matrix(out, p.attn_logits.data(), p.attn_logits.size());
  if (!out) throw std::runtime_error("write failure: " + path);
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("bad params file magic: " + path);
  }
  ModelParams p;
  const int mode = in.get();
  const int act = in.get();
  if (mode < 0 || mode > 1 || act < 0 || act > 2) {
    throw std::runtime_error("bad params file header: " + path);
  }
  p.mode = mode == 1 ? TemporalMode::Attention : TemporalMode::Sum;
  p.activation = static_cast<Activation>(act);
  const auto k = read_u32(in);
  const auto d_in = read_u32(in);
  const auto d_out = read_u32(in);
  p.w1.resize(d_in, d_out);
  read_matrix(in, p.w1.data(), p.w1.size());
  for (std::uint32_t i = 0; i < k; ++i) {
    Matrix w(d_in, d_out);
    read_matrix(in, w.data(), w.size());
    p.w_past.push_back(std::move(w));
  }
  for (std::uint32_t i = 0; i < k; ++i) {
    Matrix w(d_in, d_out);
    read_matrix(in, w.data(), w.size());
    p.w_future.push_back(std::move(w));
  }
  p.attn_logits.resize(2 * static_cast<Eigen::Index>(k) + 1);
  read_matrix(in, p.attn_logits.data(), p.attn_logits.size());
  in.peek();
  if (!in.eof()) throw std::runtime_error("trailing bytes in params file");
  return p;
}

void save_embeddings(const std::string& path, const EmbeddingSequence& H) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embeddings: " + path);
  out.precision(17);
  for (std::size_t t = 0; t < H.H.size(); ++t) {
    const Matrix& m = H.H[t];
    out << (t + 1) << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ' ';
        out << m(i, j);
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

void save_history(const std::string& path, const TrainHistory& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write history: " + path);
  out.precision(17);
  for (const auto& r : h.rounds) {
    out << r.round << ", " << r.global_loss << ", " << r.bytes_raw << ", "
        << r.bytes_compressed << '\n';
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace ftgc
