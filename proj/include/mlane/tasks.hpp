#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlane/graph.hpp"
#include "mlane/skipgram.hpp"

namespace mlane {

// Per-node class memberships; multi-label allowed.
struct LabelSet {
  std::vector<std::vector<int>> classes_of;  // sorted class ids per node
  std::vector<std::string> class_names;

  int class_count() const { return static_cast<int>(class_names.size()); }
  bool single_label() const;
  std::vector<int> labeled_nodes() const;
  // Flattened single class per node; throws on multi-label nodes.
  std::vector<int> flat() const;

  // One line per node: "<node_label> <class>[,<class>...]"; '#' comments.
  static LabelSet parse(std::string_view text, const Graph& g);
  static LabelSet parse_file(const std::string& path, const Graph& g);
};

struct NodeSplit {
  std::vector<int> train, validation, test;
  std::uint64_t seed = 0;
};

struct EdgeSplit {
  std::vector<std::pair<int, int>> removed;    // held-out true edges
  std::vector<std::pair<int, int>> non_edges;  // sampled negatives, same count
  std::uint64_t seed = 0;
};

struct TaskReport {
  std::string task;
  double reward = 0.0;
  std::map<std::string, double> metrics;
  std::vector<std::pair<int, double>> precision_curve;
  std::uint64_t split_seed = 0;
  double seconds = 0.0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// ---- metric kernels ----
double purity(std::span<const int> assignments, std::span<const int> truth);
double nmi(std::span<const int> assignments, std::span<const int> truth);
// Pooled / per-class-averaged F1 over multi-label predictions.
std::pair<double, double> micro_macro_f1(
    const std::vector<std::vector<int>>& pred,
    const std::vector<std::vector<int>>& truth, int class_count);

// ---- splits ----
// 70/10/20 over labeled nodes, stratified by class when single-label.
NodeSplit make_node_split(const LabelSet& labels, double train_frac,
                          double val_frac, std::uint64_t seed);
// Removes `fraction` of edges keeping every node's degree >= 1, and samples
// an equal number of non-edges.
EdgeSplit make_edge_split(const Graph& g, double fraction, std::uint64_t seed);
Graph residual_graph(const Graph& g, const EdgeSplit& split);

std::string split_to_json(const NodeSplit& s);
std::string split_to_json(const EdgeSplit& s);

// ---- one-vs-rest logistic regression ----
struct OneVsRestClassifier {
  int class_count = 0;
  int dim = 0;                       // feature dim + 1 (bias)
  std::vector<std::vector<double>> weights;  // per class

  static OneVsRestClassifier train(const EmbeddingMatrix& emb,
                                   const LabelSet& labels,
                                   std::span<const int> train_nodes,
                                   double l2 = 1e-4, int max_iters = 500,
                                   std::vector<std::string>* warnings = nullptr);
  std::vector<double> scores(std::span<const double> x) const;
  // Top-k classes with k = the node's true label count (argmax when k = 1).
  std::vector<std::vector<int>> predict(const EmbeddingMatrix& emb,
                                        const LabelSet& labels,
                                        std::span<const int> nodes) const;
};

// ---- k-means ----
struct KMeansResult {
  std::vector<int> assignment;
  double inertia = 0.0;
};
KMeansResult kmeans(const EmbeddingMatrix& emb, std::span<const int> nodes,
                    int k, std::uint64_t seed, int restarts = 10,
                    int max_iters = 100);

// ---- evaluators ----
// Reward is Macro-F1 on the validation set unless reward_on_test is set
// (strict 80/20 protocol); test metrics are always reported.
TaskReport eval_classification(const EmbeddingMatrix& emb,
                               const LabelSet& labels, const NodeSplit& split,
                               bool reward_on_test = false);
// Inner-product ranking over removed edges + non-edges; reward is
// precision@max(ks).
TaskReport eval_link_prediction(const EmbeddingMatrix& emb,
                                const EdgeSplit& split,
                                std::vector<int> ks);
TaskReport eval_clustering(const EmbeddingMatrix& emb, const LabelSet& labels,
                           int k_clusters, std::uint64_t seed);

}  // namespace mlane
