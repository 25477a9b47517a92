// SPDX-License-Identifier: Apache-2.0
#include "ftgc/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ftgc/rng.hpp"

namespace ftgc {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

void DsbmConfig::validate() const {
  if (n_nodes < 1 || n_blocks < 1 || n_snapshots < 1) {
    throw std::invalid_argument("dsbm: counts must be >= 1");
  }
  if (pi.rows() != n_blocks || pi.cols() != n_blocks) {
    throw std::invalid_argument("dsbm: pi must be n_blocks x n_blocks");
  }
  for (Eigen::Index i = 0; i < pi.rows(); ++i) {
    for (Eigen::Index j = 0; j < pi.cols(); ++j) {
      if (pi(i, j) < 0.0 || pi(i, j) > 1.0) {
        throw std::invalid_argument("dsbm: pi entries must lie in [0,1]");
      }
      if (pi(i, j) != pi(j, i)) {
        throw std::invalid_argument("dsbm: pi must be symmetric");
      }
    }
  }
  if (persistence < 0.0 || persistence > 1.0) {
    throw std::invalid_argument("dsbm: persistence must lie in [0,1]");
  }
}

std::vector<EdgeEvent> load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::vector<EdgeEvent> events;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = strip_comment(line);
    if (is_blank(body)) continue;
    std::istringstream ss(body);
    std::int64_t src, dst;
    double ts;
    if (!(ss >> src >> dst >> ts)) {
      throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                               " of " + path);
    }
    std::string extra;
    if (ss >> extra) {
      throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                               " of " + path + ": trailing tokens");
    }
    if (src < 0 || dst < 0) {
      throw std::runtime_error("negative node id at line " +
                               std::to_string(lineno) + " of " + path);
    }
    if (!std::isfinite(ts)) {
      throw std::runtime_error("non-finite timestamp at line " +
                               std::to_string(lineno) + " of " + path);
    }
    events.push_back({src, dst, ts});
  }
  return events;
}

std::vector<int> load_labels(const std::string& path, std::int64_t n_nodes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::vector<int> raw(n_nodes, -1);
  std::vector<bool> seen(n_nodes, false);
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = strip_comment(line);
    if (is_blank(body)) continue;
    std::istringstream ss(body);
    std::int64_t node;
    int label;
    if (!(ss >> node >> label)) {
      throw std::runtime_error("label parse error at line " +
                               std::to_string(lineno) + " of " + path);
    }
    if (node < 0 || node >= n_nodes) {
      throw std::runtime_error("label node id out of range at line " +
                               std::to_string(lineno));
    }
    if (seen[node]) {
      throw std::runtime_error("duplicate label for node " +
                               std::to_string(node));
    }
    seen[node] = true;
    raw[node] = label;
  }
  for (std::int64_t i = 0; i < n_nodes; ++i) {
    if (!seen[i]) {
      throw std::runtime_error("missing label for node " + std::to_string(i));
    }
  }
  // Remap to contiguous ids in first-appearance order.
  std::map<int, int> remap;
  std::vector<int> out(n_nodes);
  for (std::int64_t i = 0; i < n_nodes; ++i) {
    auto [it, inserted] = remap.try_emplace(raw[i], -1);
    if (inserted) it->second = static_cast<int>(remap.size()) - 1;
    out[i] = it->second;
  }
  return out;
}

TemporalGraph bucket_snapshots(const std::vector<EdgeEvent>& events,
                               std::int64_t n_nodes, std::int64_t T) {
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (events.empty()) throw std::invalid_argument("no events to bucket");
  double lo = events.front().timestamp;
  double hi = lo;
  for (const auto& e : events) {
    lo = std::min(lo, e.timestamp);
    hi = std::max(hi, e.timestamp);
  }
  const double width = (hi - lo) / static_cast<double>(T);
  std::vector<std::vector<WeightedEdge>> bins(T);
  for (const auto& e : events) {
    std::int64_t bin;
    if (width == 0.0) {
      bin = T - 1;  // degenerate range: everything in the final bin
    } else {
      bin = static_cast<std::int64_t>((e.timestamp - lo) / width);
      bin = std::clamp<std::int64_t>(bin, 0, T - 1);
    }
    bins[bin].push_back({e.src, e.dst, 1.0});
  }
  std::vector<Snapshot> snaps;
  snaps.reserve(T);
  for (std::int64_t t = 0; t < T; ++t) {
    snaps.push_back(build_snapshot(bins[t], n_nodes, lo + t * width,
                                   lo + (t + 1) * width));
  }
  return TemporalGraph(n_nodes, std::move(snaps));
}

DsbmSample generate_dsbm(const DsbmConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto n = cfg.n_nodes;
  const auto k = cfg.n_blocks;

  std::vector<std::vector<int>> memberships;
  memberships.reserve(cfg.n_snapshots);
  std::vector<int> g(n);
  for (auto& gi : g) {
    gi = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
  }
  memberships.push_back(g);
  for (std::int64_t t = 1; t < cfg.n_snapshots; ++t) {
    for (auto& gi : g) {
      if (rng.uniform() >= cfg.persistence) {
        gi = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
      }
    }
    memberships.push_back(g);
  }

  std::vector<Snapshot> snaps;
  snaps.reserve(cfg.n_snapshots);
  for (std::int64_t t = 0; t < cfg.n_snapshots; ++t) {
    const auto& gt = memberships[t];
    std::vector<WeightedEdge> edges;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        const double p = cfg.pi(gt[i], gt[j]);
        if (rng.uniform() < p) edges.push_back({i, j, 1.0});
      }
    }
    snaps.push_back(build_snapshot(edges, n, static_cast<double>(t),
                                   static_cast<double>(t + 1)));
  }
  return {TemporalGraph(n, std::move(snaps)), std::move(memberships)};
}

FederationSplit partition_random(const TemporalGraph& g, std::int64_t K,
                                 std::uint64_t seed) {
  const auto n = g.n_nodes();
  if (K < 1 || K > n) {
    throw std::invalid_argument("client count must lie in [1, n_nodes]");
  }
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  // Fisher-Yates on the stable stream.
  for (std::int64_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(
        rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[i], perm[j]);
  }
  FederationSplit split;
  split.n_nodes_total = n;
  const std::int64_t base = n / K;
  const std::int64_t extra = n % K;  // first `extra` clients get one more
  std::int64_t offset = 0;
  for (std::int64_t c = 0; c < K; ++c) {
    const std::int64_t size = base + (c < extra ? 1 : 0);
    std::vector<NodeId> nodes(perm.begin() + offset,
                              perm.begin() + offset + size);
    offset += size;
    std::sort(nodes.begin(), nodes.end());
    split.client_graphs.push_back(restrict_subgraph(g, nodes));
    split.client_node_sets.push_back(std::move(nodes));
  }
  return split;
}

void write_edge_list(const std::string& path, const TemporalGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (std::int64_t t = 0; t < g.n_snapshots(); ++t) {
    const SparseMat& a = g.snapshot(t).adjacency();
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(a, k); it; ++it) {
        if (it.row() < it.col()) {
          out << it.row() << ' ' << it.col() << ' ' << t << '\n';
        }
      }
    }
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

void write_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write label file: " + path);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << ' ' << labels[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace ftgc
