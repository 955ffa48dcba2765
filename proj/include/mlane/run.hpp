#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlane/meta.hpp"

namespace mlane {

enum class TaskKind { Classification, LinkPrediction, Clustering };
enum class WalkerKind { Mlane, Uniform, PQ };

TaskKind task_from_string(const std::string& s);
const char* task_name(TaskKind t);
const char* walker_name(WalkerKind w);

struct RunConfig {
  std::string graph_path;
  std::string labels_path;
  std::string output_dir;
  TaskKind task = TaskKind::Classification;
  WalkerKind walker = WalkerKind::Mlane;
  double p = 1.0, q = 1.0;  // pq baseline parameters
  MetaConfig meta;
  std::vector<int> ks = {10, 100, 1000};  // link prediction
  int k_clusters = 0;                     // 0 -> number of classes
  double train_frac = 0.7, val_frac = 0.1;
  double edge_removal = 0.1;
  bool reward_on_test = false;  // strict 80/20 reward, no validation carve-out
  int threads = 0;              // 0 -> library default

  // Table II per-task defaults; preset "amazon" applies that dataset's row.
  void apply_task_defaults(const std::string& preset = "");
  std::string to_json() const;
};

struct TrainOutcome {
  TaskReport final_report;
  MetaTrace trace;  // empty for baseline walkers
  std::string embeddings_path;
  std::string report_path;
};

// Full training pipeline: build splits, run the meta loop (or a baseline
// walker + SkipGram), write embeddings, report, trace, checkpoints, and a
// reproducibility manifest under cfg.output_dir.
TrainOutcome cmd_train(const RunConfig& cfg);

// Evaluates an embedding file against the selected task and returns the
// report JSON (also written to output_dir when set).
TaskReport cmd_evaluate(const RunConfig& cfg, const std::string& embeddings_path);

std::string cmd_sample(const RunConfig& cfg,
                       const std::optional<std::string>& policy_path);

// Per-node mean action probabilities under a policy checkpoint, as JSON.
std::string cmd_inspect_policy(const RunConfig& cfg,
                               const std::string& policy_path);

}  // namespace mlane
