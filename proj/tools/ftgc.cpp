// SPDX-License-Identifier: Apache-2.0
//
// ftgc command-line front end: generate | partition | train | eval.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ftgc/clustering.hpp"
#include "ftgc/data.hpp"
#include "ftgc/federation.hpp"
#include "ftgc/metrics.hpp"
#include "ftgc/objective.hpp"
#include "ftgc/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ExperimentConfig {
  ftgc::FedConfig fed;
  std::int64_t T = 5;
  std::int64_t k_clusters = 2;
  double beta = 1.0;
  std::string edges_path;
  std::string labels_path;
  std::optional<ftgc::DsbmConfig> dsbm;
  std::string out_dir = "out";
  json raw;  // resolved config for the echo file
};

ftgc::TemporalMode parse_mode(const std::string& s) {
  if (s == "sum") return ftgc::TemporalMode::Sum;
  if (s == "attention") return ftgc::TemporalMode::Attention;
  throw std::runtime_error("unknown mode: " + s);
}

ftgc::Activation parse_activation(const std::string& s) {
  if (s == "relu") return ftgc::Activation::ReLU;
  if (s == "tanh") return ftgc::Activation::Tanh;
  if (s == "identity") return ftgc::Activation::Identity;
  throw std::runtime_error("unknown activation: " + s);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j = json::parse(in);

  ExperimentConfig cfg;
  auto& f = cfg.fed;
  f.seed = j.value("seed", f.seed);
  f.clients = j.value("clients", f.clients);
  f.rounds = j.value("rounds", f.rounds);
  f.local_steps = j.value("local_steps", f.local_steps);
  f.lr = j.value("lr", f.lr);
  f.alpha = j.value("alpha", f.alpha);
  f.weight_by_nodes = j.value("weight_by_nodes", f.weight_by_nodes);
  f.mode = parse_mode(j.value("mode", std::string("sum")));
  f.activation = parse_activation(j.value("activation", std::string("relu")));
  f.window = j.value("window", f.window);
  f.d_in = j.value("d_in", f.d_in);
  f.d_out = j.value("d_out", f.d_out);
  if (j.contains("compression")) {
    const auto& c = j["compression"];
    f.compression.enabled = c.value("enabled", true);
    f.compression.s = c.value("s", 100.0);
    f.compression.bits = c.value("bits", 8);
    if (f.compression.enabled) f.compression.validate();
  }
  cfg.T = j.value("T", 5);
  cfg.k_clusters = j.value("k_clusters", 2);
  cfg.beta = j.value("beta", 1.0);
  cfg.out_dir = j.value("out", std::string("out"));

  const bool has_files = j.contains("data");
  const bool has_dsbm = j.contains("dsbm");
  if (has_files == has_dsbm) {
    throw std::runtime_error("config needs exactly one of \"data\" or \"dsbm\"");
  }
  if (has_files) {
    cfg.edges_path = j["data"].at("edges").get<std::string>();
    cfg.labels_path = j["data"].value("labels", std::string());
  } else {
    const auto& d = j["dsbm"];
    ftgc::DsbmConfig dc;
    dc.n_nodes = d.at("n_nodes").get<std::int64_t>();
    dc.n_blocks = d.at("n_blocks").get<std::int64_t>();
    dc.n_snapshots = cfg.T;
    dc.persistence = d.value("persistence", 1.0);
    dc.seed = f.seed;
    dc.pi.resize(dc.n_blocks, dc.n_blocks);
    if (d.contains("pi")) {
      const auto& pi = d["pi"];
      for (std::int64_t r = 0; r < dc.n_blocks; ++r) {
        for (std::int64_t c = 0; c < dc.n_blocks; ++c) {
          dc.pi(r, c) = pi.at(r).at(c).get<double>();
        }
      }
    } else {
      const double pin = d.at("pi_in").get<double>();
      const double pout = d.at("pi_out").get<double>();
      dc.pi.setConstant(pout);
      dc.pi.diagonal().setConstant(pin);
    }
    dc.validate();
    cfg.dsbm = dc;
  }
  cfg.raw = std::move(j);
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const CLI::App& cmd) {
  auto touched = [&](const std::string& name) {
    auto* opt = cmd.get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (touched("--seed")) {
    cfg.raw["seed"] = cfg.fed.seed;
    if (cfg.dsbm) cfg.dsbm->seed = cfg.fed.seed;
  }
  if (touched("--clients")) cfg.raw["clients"] = cfg.fed.clients;
  if (touched("--rounds")) cfg.raw["rounds"] = cfg.fed.rounds;
  if (touched("--lr")) cfg.raw["lr"] = cfg.fed.lr;
  if (touched("--alpha")) cfg.raw["alpha"] = cfg.fed.alpha;
  if (touched("--out")) cfg.raw["out"] = cfg.out_dir;
}

/// Loaded or generated dataset with optional ground truth.
struct Dataset {
  ftgc::TemporalGraph graph;
  std::optional<std::vector<int>> labels;
};

Dataset load_dataset(const ExperimentConfig& cfg) {
  if (cfg.dsbm) {
    auto sample = ftgc::generate_dsbm(*cfg.dsbm);
    // Ground truth for evaluation: last-snapshot memberships (identical
    // across t when persistence is 1).
    return {std::move(sample.graph), sample.memberships.back()};
  }
  const auto events = ftgc::load_edge_list(cfg.edges_path);
  std::int64_t n = 0;
  for (const auto& e : events) n = std::max({n, e.src + 1, e.dst + 1});
  auto graph = ftgc::bucket_snapshots(events, n, cfg.T);
  std::optional<std::vector<int>> labels;
  if (!cfg.labels_path.empty()) {
    labels = ftgc::load_labels(cfg.labels_path, n);
  }
  return {std::move(graph), std::move(labels)};
}

/// Tracks files written by a command so partial output can be removed
/// when a later step fails.
class OutputGuard {
 public:
  void track(const fs::path& p) { written_.push_back(p); }
  void commit() { written_.clear(); }
  ~OutputGuard() {
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

 private:
  std::vector<fs::path> written_;
};

void write_config_echo(const ExperimentConfig& cfg, OutputGuard& guard) {
  const fs::path p = fs::path(cfg.out_dir) / "config.json";
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << cfg.raw.dump(2) << '\n';
  guard.track(p);
}

int cmd_generate(const ExperimentConfig& cfg) {
  if (!cfg.dsbm) throw std::runtime_error("generate requires a dsbm block");
  fs::create_directories(cfg.out_dir);
  OutputGuard guard;
  const auto sample = ftgc::generate_dsbm(*cfg.dsbm);
  const fs::path edges = fs::path(cfg.out_dir) / "edges.txt";
  const fs::path labels = fs::path(cfg.out_dir) / "labels.txt";
  ftgc::write_edge_list(edges.string(), sample.graph);
  guard.track(edges);
  ftgc::write_labels(labels.string(), sample.memberships.back());
  guard.track(labels);
  write_config_echo(cfg, guard);
  std::cout << "n=" << sample.graph.n_nodes()
            << " T=" << sample.graph.n_snapshots() << " edges:";
  for (const auto& s : sample.graph.snapshots()) {
    std::cout << ' ' << s.edge_count();
  }
  std::cout << '\n';
  guard.commit();
  return 0;
}

int cmd_partition(const ExperimentConfig& cfg) {
  const Dataset data = load_dataset(cfg);
  const auto split =
      ftgc::partition_random(data.graph, cfg.fed.clients, cfg.fed.seed);
  fs::create_directories(cfg.out_dir);
  OutputGuard guard;
  const fs::path p = fs::path(cfg.out_dir) / "partition.txt";
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  for (std::size_t c = 0; c < split.client_node_sets.size(); ++c) {
    out << c;
    for (auto v : split.client_node_sets[c]) out << ' ' << v;
    out << '\n';
  }
  guard.track(p);
  write_config_echo(cfg, guard);
  for (std::size_t c = 0; c < split.client_node_sets.size(); ++c) {
    std::cout << "client " << c << ": " << split.client_node_sets[c].size()
              << " nodes, ";
    std::int64_t m = 0;
    for (const auto& s : split.client_graphs[c].snapshots()) {
      m += s.edge_count();
    }
    std::cout << m << " edges\n";
  }
  guard.commit();
  return 0;
}

int cmd_train(const ExperimentConfig& cfg) {
  const Dataset data = load_dataset(cfg);
  const auto split =
      ftgc::partition_random(data.graph, cfg.fed.clients, cfg.fed.seed);
  auto [params, history] = ftgc::run_training(data.graph, split, cfg.fed);
  fs::create_directories(cfg.out_dir);
  OutputGuard guard;
  const fs::path pp = fs::path(cfg.out_dir) / "params.bin";
  const fs::path hp = fs::path(cfg.out_dir) / "history.txt";
  ftgc::save_params(pp.string(), params);
  guard.track(pp);
  ftgc::save_history(hp.string(), history);
  guard.track(hp);
  write_config_echo(cfg, guard);
  std::cout << "initial_loss " << history.initial_loss << "\nfinal_loss "
            << (history.rounds.empty() ? history.initial_loss
                                       : history.rounds.back().global_loss)
            << '\n';
  guard.commit();
  return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& params_path) {
  const Dataset data = load_dataset(cfg);
  const ftgc::ModelParams params = ftgc::load_params(params_path);
  if (params.d_in() != cfg.fed.d_in || params.d_out() != cfg.fed.d_out ||
      params.window() != cfg.fed.window) {
    throw std::runtime_error("params file shapes do not match the config");
  }
  const auto X = ftgc::default_features(data.graph, cfg.fed.d_in, cfg.fed.seed);
  const auto H = ftgc::forward_all(data.graph, X, params);
  const auto consensus =
      ftgc::consensus_labels(H, cfg.k_clusters, cfg.fed.seed);

  ftgc::ClusterAssignment assign;
  assign.k = cfg.k_clusters;
  assign.consensus = consensus;
  assign.per_snapshot.assign(data.graph.n_snapshots(), consensus);
  assign = ftgc::refine_assignments(data.graph, assign, cfg.beta);

  // Structural metrics on the time-aggregated graph.
  std::vector<ftgc::WeightedEdge> union_edges;
  for (const auto& s : data.graph.snapshots()) {
    const auto& a = s.adjacency();
    for (int k = 0; k < a.outerSize(); ++k) {
      for (ftgc::SparseMat::InnerIterator it(a, k); it; ++it) {
        if (it.row() < it.col()) {
          union_edges.push_back({it.row(), it.col(), it.value()});
        }
      }
    }
  }
  const auto union_snap =
      ftgc::build_snapshot(union_edges, data.graph.n_nodes());

  ftgc::MetricReport report;
  report.modularity = ftgc::modularity(union_snap, consensus);
  report.ncut = ftgc::normalized_cut(union_snap, consensus);
  report.temporal_modularity =
      ftgc::temporal_modularity(data.graph, assign.per_snapshot, cfg.beta);
  if (data.labels) {
    report.acc = ftgc::accuracy(consensus, *data.labels);
    report.nmi = ftgc::nmi(consensus, *data.labels);
    report.ari = ftgc::ari(consensus, *data.labels);
    report.f1 = ftgc::f1(consensus, *data.labels);
  }

  fs::create_directories(cfg.out_dir);
  OutputGuard guard;
  const fs::path mp = fs::path(cfg.out_dir) / "metrics.json";
  {
    std::ofstream out(mp);
    if (!out) throw std::runtime_error("cannot write " + mp.string());
    out << report.to_json() << '\n';
  }
  guard.track(mp);
  const fs::path ep = fs::path(cfg.out_dir) / "embeddings.txt";
  ftgc::save_embeddings(ep.string(), H);
  guard.track(ep);
  std::cout << report.to_json() << '\n';
  guard.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated temporal graph clustering toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string params_path;
  ExperimentConfig cfg;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", cfg.fed.seed, "override the master seed");
    cmd->add_option("--clients", cfg.fed.clients, "override the client count");
    cmd->add_option("--rounds", cfg.fed.rounds, "override the round count");
    cmd->add_option("--lr", cfg.fed.lr, "override the learning rate");
    cmd->add_option("--alpha", cfg.fed.alpha, "override alpha");
    cmd->add_option("--out", cfg.out_dir, "override the output directory");
  };

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset");
  add_common(gen);
  auto* part = app.add_subcommand("partition", "inspect a client split");
  add_common(part);
  auto* train = app.add_subcommand("train", "run federated training");
  add_common(train);
  auto* eval = app.add_subcommand("eval", "evaluate trained parameters");
  add_common(eval);
  eval->add_option("--params", params_path, "trained params file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    ExperimentConfig loaded = load_config(config_path);
    // Flag overrides beat the file.
    auto given = [&](const std::string& name) {
      auto* opt = cmd->get_option_no_throw(name);
      return opt && opt->count() > 0;
    };
    if (given("--seed")) loaded.fed.seed = cfg.fed.seed;
    if (given("--clients")) loaded.fed.clients = cfg.fed.clients;
    if (given("--rounds")) loaded.fed.rounds = cfg.fed.rounds;
    if (given("--lr")) loaded.fed.lr = cfg.fed.lr;
    if (given("--alpha")) loaded.fed.alpha = cfg.fed.alpha;
    if (given("--out")) loaded.out_dir = cfg.out_dir;
    if (loaded.dsbm) loaded.dsbm->seed = loaded.fed.seed;
    apply_overrides(loaded, *cmd);
    loaded.fed.validate();

    if (cmd == gen) return cmd_generate(loaded);
    if (cmd == part) return cmd_partition(loaded);
    if (cmd == train) return cmd_train(loaded);
    return cmd_eval(loaded, params_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
