#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlane/graph.hpp"
#include "mlane/walker.hpp"

namespace mlane {

struct SkipGramConfig {
  int window = 10;
  int dim = 128;
  int epochs = 5;
  int negatives = 5;
  double lr_initial = 0.025;
  double lr_min = 0.0001;
  double subsample = 0.0;  // 0 disables frequent-node subsampling
  std::uint64_t seed = 1;
  bool parallel = false;   // hogwild updates, nondeterministic
};

struct EmbeddingMatrix {
  int n = 0;
  int m = 0;
  std::vector<double> input;   // n x m, the exported embeddings
  std::vector<double> output;  // n x m, context-side vectors

  std::span<double> row(int v) {
    return {input.data() + static_cast<std::size_t>(v) * m,
            static_cast<std::size_t>(m)};
  }
  std::span<const double> row(int v) const {
    return {input.data() + static_cast<std::size_t>(v) * m,
            static_cast<std::size_t>(m)};
  }
  std::span<double> out_row(int v) {
    return {output.data() + static_cast<std::size_t>(v) * m,
            static_cast<std::size_t>(m)};
  }
  bool all_finite() const;
};

EmbeddingMatrix init_embeddings(int n, int m, std::uint64_t seed);

// All (center, context) pairs within the sliding window, clipped at ends.
std::vector<std::pair<int, int>> generate_pairs(const ContextCorpus& corpus,
                                                int window);

// Negative-sampling pair loss and its gradient w.r.t. the center input
// vector and the output vectors of context + negatives. Used directly by the
// trainer and by finite-difference tests.
double sg_pair_loss(const EmbeddingMatrix& emb, int center, int context,
                    std::span<const int> negatives);
struct PairGradient {
  std::vector<double> d_center;                    // m
  std::vector<std::vector<double>> d_targets;      // per (context, neg...) row
};
PairGradient sg_pair_gradient(const EmbeddingMatrix& emb, int center,
                              int context, std::span<const int> negatives);

EmbeddingMatrix train_skipgram(const ContextCorpus& corpus, int node_count,
                               const SkipGramConfig& cfg);

double cosine(std::span<const double> a, std::span<const double> b);

void export_embeddings(const EmbeddingMatrix& emb, const Graph& g,
                       const std::string& path);
// Returns labels in file order plus the vectors (output side zeroed).
std::pair<std::vector<std::string>, EmbeddingMatrix> load_embeddings(
    const std::string& path);

}  // namespace mlane
