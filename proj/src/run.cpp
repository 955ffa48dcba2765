#include "mlane/run.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "mlane/rng.hpp"

namespace mlane {

namespace fs = std::filesystem;

TaskKind task_from_string(const std::string& s) {
  if (s == "classification") return TaskKind::Classification;
  if (s == "linkpred") return TaskKind::LinkPrediction;
  if (s == "clustering") return TaskKind::Clustering;
  throw std::invalid_argument("unknown task: " + s);
}

const char* task_name(TaskKind t) {
  switch (t) {
    case TaskKind::Classification: return "classification";
    case TaskKind::LinkPrediction: return "linkpred";
    case TaskKind::Clustering: return "clustering";
  }
  return "?";
}

const char* walker_name(WalkerKind w) {
  switch (w) {
    case WalkerKind::Mlane: return "mlane";
    case WalkerKind::Uniform: return "uniform";
    case WalkerKind::PQ: return "pq";
  }
  return "?";
}

void RunConfig::apply_task_defaults(const std::string& preset) {
  if (task == TaskKind::LinkPrediction) {
    meta.walks_per_node = 10;
    meta.walk_length = 40;
    meta.window = 5;
  } else {
    meta.walks_per_node = 40;
    meta.walk_length = 80;
    meta.window = 10;
  }
  meta.dim = 128;
  meta.alpha = 0.002;
  if (preset == "amazon") {
    meta.walks_per_node = 10;
    meta.walk_length = 30;
    meta.window = 5;
  } else if (!preset.empty() && preset != "default") {
    throw std::invalid_argument("unknown preset: " + preset);
  }
}

std::string RunConfig::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["graph"] = graph_path;
  j["labels"] = labels_path;
  j["output_dir"] = output_dir;
  j["task"] = task_name(task);
  j["walker"] = walker_name(walker);
  j["p"] = p;
  j["q"] = q;
  j["ks"] = ks;
  j["k_clusters"] = k_clusters;
  j["train_frac"] = train_frac;
  j["val_frac"] = val_frac;
  j["edge_removal"] = edge_removal;
  j["reward_on_test"] = reward_on_test;
  j["threads"] = threads;
  j["meta"] = {{"walks_per_node", meta.walks_per_node},
               {"walk_length", meta.walk_length},
               {"dim", meta.dim},
               {"window", meta.window},
               {"alpha", meta.alpha},
               {"max_iterations", meta.max_iterations},
               {"convergence_window", meta.convergence_window},
               {"convergence_tol", meta.convergence_tol},
               {"reward_baseline", meta.reward_baseline},
               {"baseline_decay", meta.baseline_decay},
               {"seed", meta.seed},
               {"sg_epochs", meta.sg_epochs},
               {"sg_negatives", meta.sg_negatives},
               {"sg_lr", meta.sg_lr},
               {"parallel", meta.parallel},
               {"deterministic", meta.deterministic}};
  return j.dump(2);
}

namespace {

void set_threads(const RunConfig& cfg) {
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  if (cfg.meta.deterministic) omp_set_num_threads(1);
#else
  (void)cfg;
#endif
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct TaskContext {
  LabelSet labels;
  NodeSplit node_split;
  EdgeSplit edge_split;
  Graph working;  // residual graph for link prediction, input graph otherwise
  int k_clusters = 0;
};

TaskContext build_task_context(const RunConfig& cfg, const Graph& g) {
  TaskContext ctx{.labels = {}, .node_split = {}, .edge_split = {}, .working = g};
  if (cfg.task == TaskKind::LinkPrediction) {
    ctx.edge_split = make_edge_split(g, cfg.edge_removal, cfg.meta.seed);
    ctx.working = residual_graph(g, ctx.edge_split);
  } else {
    if (cfg.labels_path.empty())
      throw std::invalid_argument(std::string("--task ") + task_name(cfg.task) +
                                  " requires --labels");
    ctx.labels = LabelSet::parse_file(cfg.labels_path, g);
    if (cfg.task == TaskKind::Classification) {
      ctx.node_split = make_node_split(ctx.labels, cfg.train_frac, cfg.val_frac,
                                       cfg.meta.seed);
    } else {
      ctx.k_clusters =
          cfg.k_clusters > 0 ? cfg.k_clusters : ctx.labels.class_count();
    }
  }
  return ctx;
}

RewardFn make_reward_fn(const RunConfig& cfg, const TaskContext& ctx) {
  switch (cfg.task) {
    case TaskKind::Classification:
      return [&cfg, &ctx](const EmbeddingMatrix& emb) {
        return eval_classification(emb, ctx.labels, ctx.node_split,
                                   cfg.reward_on_test);
      };
    case TaskKind::LinkPrediction:
      return [&cfg, &ctx](const EmbeddingMatrix& emb) {
        return eval_link_prediction(emb, ctx.edge_split, cfg.ks);
      };
    case TaskKind::Clustering:
      return [&cfg, &ctx](const EmbeddingMatrix& emb) {
        return eval_clustering(emb, ctx.labels, ctx.k_clusters, cfg.meta.seed);
      };
  }
  throw std::logic_error("unreachable");
}

void strip_timing(TaskReport& report) { report.seconds = 0.0; }

}  // namespace

TrainOutcome cmd_train(const RunConfig& cfg) {
  if (cfg.output_dir.empty())
    throw std::invalid_argument("cmd_train: --out is required");
  set_threads(cfg);
  fs::create_directories(cfg.output_dir);
  const fs::path out_dir(cfg.output_dir);

  Graph g = Graph::from_edge_list_file(cfg.graph_path);
  TaskContext ctx = build_task_context(cfg, g);
  RewardFn reward = make_reward_fn(cfg, ctx);

  TrainOutcome outcome;
  EmbeddingMatrix embeddings;

  if (cfg.walker == WalkerKind::Mlane) {
    fs::path ckpt_dir = out_dir / "checkpoints";
    fs::create_directories(ckpt_dir);
    auto on_iteration = [&](int iter, const PolicyParams& theta,
                            const EmbeddingMatrix& emb, const TaskReport& rep) {
      char tag[16];
      std::snprintf(tag, sizeof(tag), "iter_%03d", iter);
      theta.save((ckpt_dir / (std::string(tag) + "_policy.json")).string(),
                 cfg.meta.seed);
      TaskReport copy = rep;
      if (cfg.meta.deterministic) strip_timing(copy);
      write_file((ckpt_dir / (std::string(tag) + "_report.json")).string(),
                 copy.to_json());
      (void)emb;
    };
    MetaResult result =
        run_mlane(ctx.working, cfg.meta, reward, on_iteration);
    embeddings = std::move(result.embeddings);
    outcome.final_report = result.best_report;
    outcome.trace = result.trace;
    result.policy.save((out_dir / "policy.json").string(), cfg.meta.seed);
    std::string csv = result.trace.to_csv();
    if (cfg.meta.deterministic) {
      std::ostringstream det;
      det << "iteration,reward,grad_norm,seconds\n";
      for (const auto& it : result.trace.iterations)
        det << it.iteration << ',' << it.reward << ',' << it.grad_norm
            << ",0\n";
      csv = det.str();
    }
    write_file((out_dir / "trace.csv").string(), csv);
  } else {
    ContextCorpus corpus = sample_corpus_baseline(
        ctx.working,
        cfg.walker == WalkerKind::Uniform ? BaselineKind::Uniform
                                          : BaselineKind::PQ,
        cfg.meta.walks_per_node, cfg.meta.walk_length,
        mix_keys(cfg.meta.seed, 0xc0), cfg.p, cfg.q, cfg.meta.parallel);
    SkipGramConfig sg;
    sg.window = cfg.meta.window;
    sg.dim = cfg.meta.dim;
    sg.epochs = cfg.meta.sg_epochs;
    sg.negatives = cfg.meta.sg_negatives;
    sg.lr_initial = cfg.meta.sg_lr;
    sg.seed = mix_keys(cfg.meta.seed, 0x59);
    sg.parallel = cfg.meta.parallel && !cfg.meta.deterministic;
    embeddings = train_skipgram(corpus, ctx.working.node_count(), sg);
    outcome.final_report = reward(embeddings);
  }

  if (cfg.meta.deterministic) strip_timing(outcome.final_report);

  outcome.embeddings_path = (out_dir / "embeddings.w2v").string();
  export_embeddings(embeddings, ctx.working, outcome.embeddings_path);
  outcome.report_path = (out_dir / "report.json").string();
  write_file(outcome.report_path, outcome.final_report.to_json());
  if (cfg.task == TaskKind::Classification)
    write_file((out_dir / "split.json").string(),
               split_to_json(ctx.node_split));
  else if (cfg.task == TaskKind::LinkPrediction)
    write_file((out_dir / "split.json").string(),
               split_to_json(ctx.edge_split));

  nlohmann::json manifest;
  manifest["format_version"] = 1;
  manifest["config"] = nlohmann::json::parse(cfg.to_json());
  manifest["seed"] = cfg.meta.seed;
  manifest["graph_nodes"] = g.node_count();
  manifest["graph_edges"] = g.edge_count();
  write_file((out_dir / "manifest.json").string(), manifest.dump(2));
  return outcome;
}

TaskReport cmd_evaluate(const RunConfig& cfg,
                        const std::string& embeddings_path) {
  set_threads(cfg);
  Graph g = Graph::from_edge_list_file(cfg.graph_path);
  auto [labels, loaded] = load_embeddings(embeddings_path);

  if (loaded.n != g.node_count()) {
    std::ostringstream msg;
    msg << "embedding file has " << loaded.n << " rows but graph has "
        << g.node_count() << " nodes";
    throw std::runtime_error(msg.str());
  }
  // Reorder rows into graph id order.
  EmbeddingMatrix emb;
  emb.n = loaded.n;
  emb.m = loaded.m;
  emb.input.assign(loaded.input.size(), 0.0);
  emb.output.assign(loaded.input.size(), 0.0);
  std::vector<std::string> missing;
  for (int row = 0; row < loaded.n; ++row) {
    int v = g.id_of(labels[row]);
    if (v < 0) {
      missing.push_back(labels[row]);
      continue;
    }
    std::copy(loaded.row(row).begin(), loaded.row(row).end(),
              emb.row(v).begin());
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "embedding labels not present in graph:";
    for (const auto& l : missing) msg << ' ' << l;
    throw std::runtime_error(msg.str());
  }

  TaskContext ctx = build_task_context(cfg, g);
  TaskReport report = make_reward_fn(cfg, ctx)(emb);
  if (cfg.meta.deterministic) report.seconds = 0.0;
  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    write_file((fs::path(cfg.output_dir) / "report.json").string(),
               report.to_json());
  }
  return report;
}

std::string cmd_sample(const RunConfig& cfg,
                       const std::optional<std::string>& policy_path) {
  set_threads(cfg);
  Graph g = Graph::from_edge_list_file(cfg.graph_path);
  ContextCorpus corpus;
  if (cfg.walker == WalkerKind::Mlane) {
    PolicyParams theta = policy_path
                             ? PolicyParams::load(*policy_path)
                             : PolicyParams::random_init(g.node_count(),
                                                         cfg.meta.seed);
    if (theta.input_dim != g.node_count() + 1)
      throw std::runtime_error("policy checkpoint does not match graph size");
    DistanceCache cache(g);
    corpus = sample_corpus(g, cache, theta, cfg.meta.walks_per_node,
                           cfg.meta.walk_length, cfg.meta.seed,
                           cfg.meta.parallel);
  } else {
    corpus = sample_corpus_baseline(
        g,
        cfg.walker == WalkerKind::Uniform ? BaselineKind::Uniform
                                          : BaselineKind::PQ,
        cfg.meta.walks_per_node, cfg.meta.walk_length, cfg.meta.seed, cfg.p,
        cfg.q, cfg.meta.parallel);
  }
  return dump_corpus(corpus, g);
}

std::string cmd_inspect_policy(const RunConfig& cfg,
                               const std::string& policy_path) {
  set_threads(cfg);
  Graph g = Graph::from_edge_list_file(cfg.graph_path);
  PolicyParams theta = PolicyParams::load(policy_path);
  if (theta.input_dim != g.node_count() + 1)
    throw std::runtime_error("policy checkpoint does not match graph size");
  DistanceCache cache(g);
  ContextCorpus corpus =
      sample_corpus(g, cache, theta, cfg.meta.walks_per_node,
                    cfg.meta.walk_length, cfg.meta.seed, cfg.meta.parallel);
  auto mean = mean_action_probabilities(corpus, theta, cache, g.node_count());
  nlohmann::json j;
  j["format_version"] = 1;
  nlohmann::json nodes = nlohmann::json::array();
  for (int v = 0; v < g.node_count(); ++v)
    nodes.push_back({{"node", g.label(v)},
                     {"p_forward", mean[v][0]},
                     {"p_same", mean[v][1]},
                     {"p_backward", mean[v][2]}});
  j["nodes"] = nodes;
  return j.dump(2);
}

}  // namespace mlane
