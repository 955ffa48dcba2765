#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlane/run.hpp"

using namespace mlane;

namespace {

// Config precedence: command-line flags > JSON config file > per-task
// Table defaults. Flags are applied last and only when actually given.
void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("graph")) cfg.graph_path = j["graph"].get<std::string>();
  if (j.contains("labels")) cfg.labels_path = j["labels"].get<std::string>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("task")) cfg.task = task_from_string(j["task"].get<std::string>());
  if (j.contains("p")) cfg.p = j["p"].get<double>();
  if (j.contains("q")) cfg.q = j["q"].get<double>();
  if (j.contains("ks")) cfg.ks = j["ks"].get<std::vector<int>>();
  if (j.contains("k_clusters")) cfg.k_clusters = j["k_clusters"].get<int>();
  if (j.contains("train_frac")) cfg.train_frac = j["train_frac"].get<double>();
  if (j.contains("val_frac")) cfg.val_frac = j["val_frac"].get<double>();
  if (j.contains("edge_removal")) cfg.edge_removal = j["edge_removal"].get<double>();
  if (j.contains("reward_on_test")) cfg.reward_on_test = j["reward_on_test"].get<bool>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    if (m.contains("walks_per_node")) cfg.meta.walks_per_node = m["walks_per_node"].get<int>();
    if (m.contains("walk_length")) cfg.meta.walk_length = m["walk_length"].get<int>();
    if (m.contains("dim")) cfg.meta.dim = m["dim"].get<int>();
    if (m.contains("window")) cfg.meta.window = m["window"].get<int>();
    if (m.contains("alpha")) cfg.meta.alpha = m["alpha"].get<double>();
    if (m.contains("max_iterations")) cfg.meta.max_iterations = m["max_iterations"].get<int>();
    if (m.contains("seed")) cfg.meta.seed = m["seed"].get<std::uint64_t>();
    if (m.contains("sg_epochs")) cfg.meta.sg_epochs = m["sg_epochs"].get<int>();
    if (m.contains("sg_negatives")) cfg.meta.sg_negatives = m["sg_negatives"].get<int>();
    if (m.contains("sg_lr")) cfg.meta.sg_lr = m["sg_lr"].get<double>();
    if (m.contains("reward_baseline")) cfg.meta.reward_baseline = m["reward_baseline"].get<bool>();
    if (m.contains("deterministic")) cfg.meta.deterministic = m["deterministic"].get<bool>();
  }
}

struct FlagValues {
  std::string graph, labels, out, config, task = "classification";
  std::string walker = "mlane", preset, policy;
  double p = 1.0, q = 1.0;
  std::vector<int> ks;
  int k_clusters = 0;
  double train_frac = 0.7, val_frac = 0.1, edge_removal = 0.1;
  bool reward_on_test = false, baseline_flag = false, deterministic = false;
  int threads = 0;
  int walks = 0, length = 0, dim = 0, window = 0, max_iters = 0;
  int sg_epochs = 0, sg_negatives = 0;
  double alpha = 0.0, sg_lr = 0.0;
  std::uint64_t seed = 1;
};

void add_common_options(CLI::App* cmd, FlagValues& v) {
  cmd->add_option("--graph", v.graph, "edge list file (two labels per line)");
  cmd->add_option("--labels", v.labels, "label file: <node> <class>[,<class>...]");
  cmd->add_option("--out", v.out, "output directory (default $MLANE_OUTPUT_ROOT/run-<seed>)");
  cmd->add_option("--config", v.config, "JSON config file; flags override it");
  cmd->add_option("--task", v.task, "classification | linkpred | clustering");
  cmd->add_option("--walker", v.walker, "mlane | uniform | pq");
  cmd->add_option("--preset", v.preset, "hyperparameter preset (default | amazon)");
  cmd->add_option("-p", v.p, "pq walker return parameter");
  cmd->add_option("-q", v.q, "pq walker in-out parameter");
  cmd->add_option("--ks", v.ks, "precision@k values for link prediction");
  cmd->add_option("--k-clusters", v.k_clusters, "cluster count (0 = class count)");
  cmd->add_option("--train-frac", v.train_frac, "classification train fraction");
  cmd->add_option("--val-frac", v.val_frac, "classification validation fraction");
  cmd->add_option("--edge-removal", v.edge_removal, "link prediction removal fraction");
  cmd->add_flag("--reward-on-test", v.reward_on_test,
                "reward on the 80/20 evaluation set instead of validation");
  cmd->add_option("--walks", v.walks, "walks per node (K)");
  cmd->add_option("--length", v.length, "walk length (L)");
  cmd->add_option("--dim", v.dim, "embedding dimension (m)");
  cmd->add_option("--window", v.window, "SkipGram window (w)");
  cmd->add_option("--alpha", v.alpha, "policy learning rate");
  cmd->add_option("--max-iters", v.max_iters, "max meta iterations");
  cmd->add_option("--sg-epochs", v.sg_epochs, "SkipGram epochs");
  cmd->add_option("--sg-negatives", v.sg_negatives, "negatives per positive");
  cmd->add_option("--sg-lr", v.sg_lr, "SkipGram initial learning rate");
  cmd->add_flag("--reward-baseline", v.baseline_flag, "EMA reward baseline");
  cmd->add_flag("--deterministic", v.deterministic,
                "single-threaded SkipGram, reproducible outputs");
  cmd->add_option("--threads", v.threads, "cap worker threads");
  cmd->add_option("--seed", v.seed, "master seed");
}

RunConfig build_config(CLI::App* cmd, const FlagValues& v) {
  RunConfig cfg;
  auto seen = [cmd](const std::string& name) { return cmd->count(name) > 0; };

  cfg.task = task_from_string(v.task);
  cfg.apply_task_defaults(v.preset);
  if (!v.config.empty()) apply_config_file(cfg, v.config);
  if (seen("--task")) cfg.task = task_from_string(v.task);

  if (seen("--graph")) cfg.graph_path = v.graph;
  if (seen("--labels")) cfg.labels_path = v.labels;
  if (seen("--out")) cfg.output_dir = v.out;
  if (seen("--walker")) {
    if (v.walker == "mlane") cfg.walker = WalkerKind::Mlane;
    else if (v.walker == "uniform") cfg.walker = WalkerKind::Uniform;
    else if (v.walker == "pq") cfg.walker = WalkerKind::PQ;
    else throw CLI::ValidationError("--walker", "unknown walker " + v.walker);
  }
  if (seen("-p")) cfg.p = v.p;
  if (seen("-q")) cfg.q = v.q;
  if (seen("--ks")) cfg.ks = v.ks;
  if (seen("--k-clusters")) cfg.k_clusters = v.k_clusters;
  if (seen("--train-frac")) cfg.train_frac = v.train_frac;
  if (seen("--val-frac")) cfg.val_frac = v.val_frac;
  if (seen("--edge-removal")) cfg.edge_removal = v.edge_removal;
  if (seen("--reward-on-test")) cfg.reward_on_test = true;
  if (seen("--walks")) cfg.meta.walks_per_node = v.walks;
  if (seen("--length")) cfg.meta.walk_length = v.length;
  if (seen("--dim")) cfg.meta.dim = v.dim;
  if (seen("--window")) cfg.meta.window = v.window;
  if (seen("--alpha")) cfg.meta.alpha = v.alpha;
  if (seen("--max-iters")) cfg.meta.max_iterations = v.max_iters;
  if (seen("--sg-epochs")) cfg.meta.sg_epochs = v.sg_epochs;
  if (seen("--sg-negatives")) cfg.meta.sg_negatives = v.sg_negatives;
  if (seen("--sg-lr")) cfg.meta.sg_lr = v.sg_lr;
  if (seen("--reward-baseline")) cfg.meta.reward_baseline = true;
  if (seen("--deterministic")) {
    cfg.meta.deterministic = true;
    cfg.meta.parallel = false;
  }
  if (seen("--threads")) cfg.threads = v.threads;
  if (seen("--seed")) cfg.meta.seed = v.seed;

  if (cfg.output_dir.empty()) {
    if (const char* root = std::getenv("MLANE_OUTPUT_ROOT")) {
      cfg.output_dir =
          std::string(root) + "/run-" + std::to_string(cfg.meta.seed);
    }
  }
  return cfg;
}

void validate_common(const RunConfig& cfg) {
  if (cfg.graph_path.empty())
    throw CLI::ValidationError("--graph", "a graph edge list is required");
  if (cfg.task != TaskKind::LinkPrediction && cfg.labels_path.empty())
    throw CLI::ValidationError(
        "--labels", std::string("--task ") + task_name(cfg.task) +
                        " requires a label file (--labels)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MLANE: adaptive random-walk network embedding"};
  app.require_subcommand(1);

  FlagValues train_v, eval_v, sample_v, inspect_v;
  std::string eval_embeddings;

  CLI::App* train = app.add_subcommand("train", "train embeddings end to end");
  add_common_options(train, train_v);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "evaluate an embedding file on a task");
  add_common_options(evaluate, eval_v);
  evaluate->add_option("--embeddings", eval_embeddings, "word2vec text file")
      ->required();

  CLI::App* sample = app.add_subcommand("sample", "dump a walk corpus");
  add_common_options(sample, sample_v);
  sample->add_option("--policy", sample_v.policy, "policy checkpoint JSON");

  CLI::App* inspect = app.add_subcommand(
      "inspect-policy", "per-node mean action probabilities as JSON");
  add_common_options(inspect, inspect_v);
  inspect->add_option("--policy", inspect_v.policy, "policy checkpoint JSON")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train->parsed()) {
      RunConfig cfg = build_config(train, train_v);
      validate_common(cfg);
      if (cfg.output_dir.empty())
        throw CLI::ValidationError("--out",
                                   "set --out or MLANE_OUTPUT_ROOT");
      TrainOutcome outcome = cmd_train(cfg);
      std::cout << outcome.final_report.to_json() << std::endl;
    } else if (evaluate->parsed()) {
      RunConfig cfg = build_config(evaluate, eval_v);
      validate_common(cfg);
      TaskReport report = cmd_evaluate(cfg, eval_embeddings);
      std::cout << report.to_json() << std::endl;
    } else if (sample->parsed()) {
      RunConfig cfg = build_config(sample, sample_v);
      if (cfg.graph_path.empty())
        throw CLI::ValidationError("--graph", "a graph edge list is required");
      std::optional<std::string> policy;
      if (!sample_v.policy.empty()) policy = sample_v.policy;
      std::cout << cmd_sample(cfg, policy);
    } else if (inspect->parsed()) {
      RunConfig cfg = build_config(inspect, inspect_v);
      if (cfg.graph_path.empty())
        throw CLI::ValidationError("--graph", "a graph edge list is required");
      std::cout << cmd_inspect_policy(cfg, inspect_v.policy) << std::endl;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
