// Command-line front end: dataset synthesis, streaming partitioning,
// quality reports, feature splitting, capacity planning and the
// distributed-training simulator.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gnnpart/baselines.hpp"
#include "gnnpart/completion.hpp"
#include "gnnpart/edge_stream.hpp"
#include "gnnpart/metrics.hpp"
#include "gnnpart/spring.hpp"
#include "gnnpart/store.hpp"
#include "gnnpart/synth.hpp"
#include "gnnpart/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gnnpart;

namespace {

EdgeFormat format_for(const std::string& flag, const fs::path& path) {
  if (!flag.empty()) return parse_edge_format(flag);
  return path.extension() == ".bin" ? EdgeFormat::binary_u64 : EdgeFormat::text_tsv;
}

struct PartitionOptions {
  std::string input;
  std::string format;
  std::string nodes;
  std::string features;
  std::string algo = "spring";
  std::string out;
  std::uint32_t partitions = 4;
  double beta = 1.05;
  std::uint64_t tau_vol = 0;
  double lambda = 1.1;
  double balance_slack = 0.0;
  std::uint32_t hops = 1;
  bool no_completion = false;
  bool add_reverse = false;
  bool shuffle_isolated = false;
  std::uint64_t seed = 0;
};

struct PartitionOutcome {
  PartitionedGraph graph;
  json params;
  std::optional<ClusterStats> pre_merge;
  std::optional<ClusterStats> post_merge;
};

PartitionOutcome run_partition(const PartitionOptions& opt, const EdgeStream& stream,
                               const GraphIndex& index, const NodeMetaMap& meta) {
  PartitionOutcome out;
  std::uint64_t tau = opt.tau_vol != 0 ? opt.tau_vol
                                       : default_tau_vol(index.num_edges, opt.partitions);
  HomeMap homes;
  if (opt.algo == "spring") {
    ClusterState state = cluster_stream(stream, index, tau);
    out.pre_merge = cluster_stats(state);
    MergePlan plan = select_representatives(state, index);
    merge_clusters(state, plan, index, opt.partitions, opt.beta);
    out.post_merge = cluster_stats(state);
    homes = resolve_homes(
        assign_partitions(state, opt.partitions, opt.seed, opt.shuffle_isolated));
  } else if (opt.algo == "dbh") {
    homes = resolve_homes(dbh_partition(stream, index, opt.partitions), index.num_nodes(),
                          opt.seed);
  } else if (opt.algo == "greedy") {
    homes = resolve_homes(greedy_partition(stream, index, opt.partitions, opt.balance_slack),
                          index.num_nodes(), opt.seed);
  } else if (opt.algo == "hdrf") {
    homes = resolve_homes(hdrf_partition(stream, index, opt.partitions, opt.lambda),
                          index.num_nodes(), opt.seed);
  } else if (opt.algo == "2ps") {
    homes = resolve_homes(two_phase_partition(stream, index, opt.partitions, tau),
                          index.num_nodes(), opt.seed);
  } else {
    throw ConfigError("unknown algorithm: " + opt.algo);
  }

  out.graph = opt.no_completion
                  ? random_edge_assign(stream, index, homes, meta, opt.seed)
                  : complete_edges(stream, index, homes, meta, opt.hops);

  out.params = json{{"input", opt.input},
                    {"algorithm", opt.algo},
                    {"partitions", opt.partitions},
                    {"beta", opt.beta},
                    {"tau_vol", tau},
                    {"lambda", opt.lambda},
                    {"balance_slack", opt.balance_slack},
                    {"hops", opt.hops},
                    {"completion", !opt.no_completion},
                    {"add_reverse", opt.add_reverse},
                    {"seed", opt.seed},
                    {"nodes", opt.nodes},
                    {"features", opt.features}};
  return out;
}

void emit_report(PartitionReport rep, const PartitionOutcome& outcome,
                 const std::string& format) {
  if (outcome.post_merge) rep.clusters = outcome.post_merge;
  if (format == "json") {
    json j = rep.to_json();
    if (outcome.pre_merge)
      j["clusters_before_merge"] = {{"count", outcome.pre_merge->count},
                                    {"mean_size", outcome.pre_merge->mean_size},
                                    {"std_size", outcome.pre_merge->std_size}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << rep.to_table();
    if (outcome.pre_merge && outcome.post_merge)
      std::cout << "clusters before merge: " << outcome.pre_merge->count
                << "   after: " << outcome.post_merge->count << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"streaming graph partitioning and distributed-training toolkit"};
  app.require_subcommand(1);

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark dataset");
  std::string synth_preset_name, synth_out = "dataset", synth_format = "text";
  SynthConfig synth_cfg;
  bool synth_no_features = false;
  synth->add_option("--preset", synth_preset_name, "cora | citeseer | pubmed");
  synth->add_option("--nodes", synth_cfg.nodes);
  synth->add_option("--edges", synth_cfg.edges);
  synth->add_option("--classes", synth_cfg.classes);
  synth->add_option("--dim", synth_cfg.feature_dim);
  synth->add_option("--mixing", synth_cfg.mixing);
  synth->add_option("--degree-skew", synth_cfg.degree_skew);
  synth->add_option("--seed", synth_cfg.seed);
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--format", synth_format, "text | binary");
  synth->add_flag("--no-features", synth_no_features);

  // ---- partition ----
  auto* part = app.add_subcommand("partition", "partition an edge stream");
  PartitionOptions popt;
  std::string part_report_format = "table";
  part->add_option("--input", popt.input, "edge file")->required();
  part->add_option("--format", popt.format, "text | binary (default: by extension)");
  part->add_option("--nodes", popt.nodes, "node meta file (label + role)");
  part->add_option("--features", popt.features, "feature matrix to split");
  part->add_option("--algo", popt.algo, "spring | dbh | greedy | hdrf | 2ps");
  part->add_option("-p,--partitions", popt.partitions);
  part->add_option("--beta", popt.beta, "merge balance factor");
  part->add_option("--tau-vol", popt.tau_vol, "cluster volume cap (0 = 2|E|/p)");
  part->add_option("--lambda", popt.lambda, "hdrf balance weight");
  part->add_option("--balance-slack", popt.balance_slack, "greedy capacity guard (0 = off)");
  part->add_option("--hops", popt.hops, "neighbor completion depth (1-3)");
  part->add_flag("--no-completion", popt.no_completion,
                 "randomly assign cross-partition edges instead of replicating");
  part->add_flag("--add-reverse", popt.add_reverse, "emit (v,u) after every (u,v)");
  part->add_flag("--shuffle-isolated", popt.shuffle_isolated);
  part->add_option("--seed", popt.seed);
  part->add_option("--out", popt.out, "artifact directory")->required();
  part->add_option("--report-format", part_report_format, "table | json");

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "report metrics for a stored artifact");
  std::string stats_dir, stats_format = "table";
  stats->add_option("--artifact", stats_dir)->required();
  stats->add_option("--format", stats_format, "table | json");

  // ---- split-features ----
  auto* split = app.add_subcommand("split-features", "split a feature matrix by partition");
  std::string split_features_path, split_dir;
  split->add_option("--features", split_features_path)->required();
  split->add_option("--artifact", split_dir)->required();

  // ---- plan ----
  auto* plan = app.add_subcommand("plan", "partition-count rule from resource limits");
  std::uint32_t plan_q = 1;
  double plan_m = 0, plan_data = 0;
  double plan_t = -1;
  std::string plan_format = "table";
  plan->add_option("-q,--workers", plan_q)->required();
  plan->add_option("-M,--memory", plan_m, "per-worker memory in GB")->required();
  plan->add_option("-T,--reserved", plan_t, "memory reserved for compute (default 2M/3)");
  plan->add_option("--data-size", plan_data, "graph + feature size in GB")->required();
  plan->add_option("--format", plan_format, "table | json");

  // ---- train-sim ----
  auto* train = app.add_subcommand("train-sim", "simulate partitioned training");
  std::string train_dir, train_input, train_input_format, train_features;
  std::string train_history, train_metrics;
  std::uint32_t train_workers = 1, train_sync = 1;
  bool train_compare = false;
  TrainConfig tcfg;
  train->add_option("--artifact", train_dir)->required();
  train->add_option("--input", train_input, "source edge file (default: from manifest)");
  train->add_option("--format", train_input_format);
  train->add_option("--features", train_features, "source features (default: from manifest)");
  train->add_option("--workers", train_workers);
  train->add_option("--sync-interval", train_sync, "epochs between model averaging");
  train->add_option("--epochs", tcfg.epochs);
  train->add_option("--lr", tcfg.lr);
  train->add_option("--batch", tcfg.batch);
  train->add_option("--prop-hops", tcfg.prop_hops, "feature propagation rounds");
  train->add_option("--seed", tcfg.seed);
  train->add_option("--history", train_history, "write per-sync CSV here");
  train->add_option("--metrics", train_metrics, "write final metrics JSON here");
  train->add_flag("--compare-centralized", train_compare);

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "replication-factor sweep");
  std::string bench_input, bench_format_flag, bench_out_format = "table";
  std::vector<std::uint32_t> bench_p{4, 8, 16};
  std::vector<std::string> bench_algos{"spring", "dbh", "greedy", "hdrf", "2ps"};
  std::uint64_t bench_seed = 0;
  bench->add_option("--input", bench_input)->required();
  bench->add_option("--format", bench_format_flag);
  bench->add_option("-p,--partitions", bench_p)->delimiter(',');
  bench->add_option("--algos", bench_algos)->delimiter(',');
  bench->add_option("--seed", bench_seed);
  bench->add_option("--report-format", bench_out_format, "table | json");

  CLI11_PARSE(app, argc, argv);

  if (*synth) {
    SynthConfig cfg = synth_cfg;
    if (!synth_preset_name.empty()) {
      cfg = synth_preset(synth_preset_name);
      if (synth->count("--nodes")) cfg.nodes = synth_cfg.nodes;
      if (synth->count("--edges")) cfg.edges = synth_cfg.edges;
      if (synth->count("--classes")) cfg.classes = synth_cfg.classes;
      if (synth->count("--dim")) cfg.feature_dim = synth_cfg.feature_dim;
      if (synth->count("--mixing")) cfg.mixing = synth_cfg.mixing;
      if (synth->count("--degree-skew")) cfg.degree_skew = synth_cfg.degree_skew;
      if (synth->count("--seed")) cfg.seed = synth_cfg.seed;
    }
    SynthDataset data = synth_graph(cfg);
    fs::path edge_path = write_synth_dataset(data, cfg, synth_out,
                                             parse_edge_format(synth_format),
                                             !synth_no_features);
    std::cout << "wrote " << edge_path.string() << " (" << data.edges.size()
              << " edges, " << cfg.nodes << " nodes)\n";
    return 0;
  }

  if (*part) {
    EdgeStream stream(popt.input, format_for(popt.format, popt.input), popt.add_reverse);
    GraphIndex index = compute_degrees(stream);
    if (stream.malformed_lines() > 0)
      std::cerr << "warning: skipped " << stream.malformed_lines()
                << " malformed lines\n";
    NodeMetaMap meta;
    if (!popt.nodes.empty()) meta = read_node_meta(popt.nodes);
    PartitionOutcome outcome = run_partition(popt, stream, index, meta);
    fs::path features;
    write_partitions(outcome.graph, popt.out, popt.algo, outcome.params,
                     popt.nodes.empty() ? nullptr : &meta,
                     popt.features.empty() ? nullptr : &(features = popt.features));
    emit_report(balance_stats(outcome.graph), outcome, part_report_format);
    return 0;
  }

  if (*stats) {
    StoredArtifact art = read_partitions(stats_dir);
    PartitionReport rep = balance_stats(art.graph);
    rep.algorithm = art.manifest.algorithm;
    if (stats_format == "json")
      std::cout << rep.to_json().dump(2) << '\n';
    else
      std::cout << rep.to_table();
    return 0;
  }

  if (*split) {
    StoredArtifact art = read_partitions(split_dir);
    split_features(split_features_path, art.graph, split_dir);
    art.manifest.has_features = true;
    art.manifest.feature_dim = read_feature_header(split_features_path).dim;
    std::ofstream out(fs::path(split_dir) / "manifest.json", std::ios::trunc);
    out << art.manifest.to_json().dump(2) << '\n';
    std::cout << "split features into " << art.manifest.num_partitions << " files\n";
    return 0;
  }

  if (*plan) {
    PlanResult res = plan_partition_count(
        plan_q, plan_m, plan_t < 0 ? std::nullopt : std::optional<double>(plan_t),
        plan_data);
    if (plan_format == "json") {
      std::cout << json{{"partitions", res.partitions},
                        {"reserved_gb", res.reserved_gb},
                        {"capacity_gb", res.capacity_gb}}
                       .dump(2)
                << '\n';
    } else {
      std::cout << res.partitions << '\n';
    }
    return 0;
  }

  if (*train) {
    StoredArtifact art = read_partitions(train_dir);
    if (train_input.empty())
      train_input = art.manifest.params.value("input", std::string{});
    if (train_features.empty())
      train_features = art.manifest.params.value("features", std::string{});
    if (train_input.empty() || train_features.empty())
      throw ConfigError("source edges/features not recorded in manifest; pass --input/--features");
    EdgeStream stream(train_input, format_for(train_input_format, train_input),
                      art.manifest.params.value("add_reverse", false));
    TrainingData data = load_training_data(art, train_dir, stream, train_features);
    DistTrainResult result = distributed_train(data, train_workers, train_sync, tcfg);

    json metrics{{"epochs", tcfg.epochs},
                 {"sync_interval", train_sync},
                 {"workers", train_workers},
                 {"averaging_ops", result.averaging_ops},
                 {"final_val_f1", result.history.empty() ? 0.0 : result.history.back().val_f1},
                 {"final_test_f1",
                  result.history.empty() ? 0.0 : result.history.back().test_f1}};
    if (train_compare) {
      Eigen::MatrixXd global_x =
          sgc_propagate(data.global.adjacency, data.global.features, tcfg.prop_hops);
      ModelParams central =
          train_local(global_x, data.global.labels, data.global.train_rows, tcfg);
      double central_test = evaluate_micro_f1(central, global_x, data.global.labels,
                                              data.global.test_rows);
      metrics["centralized_test_f1"] = central_test;
      metrics["gap"] = std::abs(central_test - metrics["final_test_f1"].get<double>());
    }
    if (!train_history.empty()) {
      std::ofstream csv(train_history, std::ios::trunc);
      csv << "epoch,sync_count,val_f1,test_f1\n";
      for (const SyncPoint& pt : result.history)
        csv << pt.epoch << ',' << pt.syncs << ',' << pt.val_f1 << ',' << pt.test_f1 << '\n';
    }
    if (!train_metrics.empty()) {
      std::ofstream mj(train_metrics, std::ios::trunc);
      mj << metrics.dump(2) << '\n';
    }
    std::cout << metrics.dump(2) << '\n';
    return 0;
  }

  if (*bench) {
    EdgeStream stream(bench_input, format_for(bench_format_flag, bench_input));
    GraphIndex index = compute_degrees(stream);
    NodeMetaMap meta;
    json rows = json::array();
    std::cout << "post-completion replication factor\n";
    std::printf("%10s", "algo \\ p");
    for (std::uint32_t p : bench_p) std::printf("%10u", p);
    std::printf("\n");
    for (const std::string& algo : bench_algos) {
      std::printf("%10s", algo.c_str());
      for (std::uint32_t p : bench_p) {
        PartitionOptions opt;
        opt.input = bench_input;
        opt.algo = algo;
        opt.partitions = p;
        opt.seed = bench_seed;
        PartitionOutcome outcome = run_partition(opt, stream, index, meta);
        double rf = replication_factor(outcome.graph);
        rows.push_back({{"algorithm", algo}, {"partitions", p}, {"rf", rf}});
        std::printf("%10.4f", rf);
      }
      std::printf("\n");
    }
    if (bench_out_format == "json") std::cout << rows.dump(2) << '\n';
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: bad-config: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: bad-input: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 4;
  }
}
