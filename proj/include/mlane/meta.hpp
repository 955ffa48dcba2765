#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mlane/graph.hpp"
#include "mlane/policy.hpp"
#include "mlane/skipgram.hpp"
#include "mlane/tasks.hpp"
#include "mlane/walker.hpp"

namespace mlane {

struct MetaConfig {
  int walks_per_node = 40;   // K
  int walk_length = 80;      // L
  int dim = 128;             // m
  int window = 10;           // w
  double alpha = 0.002;      // policy learning rate
  int max_iterations = 20;
  int convergence_window = 5;
  double convergence_tol = 0.005;
  bool reward_baseline = false;  // EMA baseline, off to follow the raw update
  double baseline_decay = 0.8;
  std::uint64_t seed = 1;
  int sg_epochs = 5;
  int sg_negatives = 5;
  double sg_lr = 0.025;
  bool parallel = true;
  bool deterministic = false;  // forces single-threaded SkipGram
};

struct MetaIteration {
  int iteration = 0;
  double reward = 0.0;
  double grad_norm = 0.0;
  std::size_t corpus_steps = 0;
  std::size_t fallbacks = 0;
  double seconds = 0.0;
};

struct MetaTrace {
  std::vector<MetaIteration> iterations;
  int best_iteration = -1;

  std::vector<double> rewards() const;
  std::string to_csv() const;
};

struct MetaResult {
  EmbeddingMatrix embeddings;  // from the best-reward iteration
  PolicyParams policy;         // final parameters
  MetaTrace trace;
  TaskReport best_report;
};

// Exponential moving average of past rewards; value() is 0 until the first
// observation when disabled upstream.
struct RewardBaseline {
  double decay = 0.8;
  double value = 0.0;
  bool initialized = false;

  void observe(double reward) {
    value = initialized ? decay * value + (1.0 - decay) * reward : reward;
    initialized = true;
  }
};

// (R - b) * sum over recorded steps of grad log pi, divided by the total
// step count. Throws if the corpus was sampled under different parameters.
PolicyParams policy_gradient_estimate(const ContextCorpus& corpus, double reward,
                                      double baseline,
                                      const PolicyParams& params,
                                      DistanceCache& cache);

// True iff max - min of the last `window` rewards is below `tol`.
bool has_converged(const std::vector<double>& rewards, int window, double tol);

using RewardFn = std::function<TaskReport(const EmbeddingMatrix&)>;
using IterationCallback = std::function<void(
    int iteration, const PolicyParams&, const EmbeddingMatrix&,
    const TaskReport&)>;

MetaResult run_mlane(const Graph& g, const MetaConfig& cfg, RewardFn reward,
                     IterationCallback on_iteration = nullptr);

double policy_l2_norm(const PolicyParams& p);

}  // namespace mlane
