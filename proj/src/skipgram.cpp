#include "mlane/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "mlane/rng.hpp"

namespace mlane {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Cumulative unigram^0.75 table for negative sampling.
struct NoiseTable {
  std::vector<double> cumulative;

  explicit NoiseTable(const ContextCorpus& corpus, int n) {
    std::vector<double> weight(n, 0.0);
    for (const auto& seq : corpus.sequences)
      for (int v : seq.nodes) weight[v] += 1.0;
    cumulative.resize(n);
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
      total += std::pow(weight[v], 0.75);
      cumulative[v] = total;
    }
  }

  int sample(std::mt19937_64& rng) const {
    double u = uniform01(rng) * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<int>(std::min<std::size_t>(
        it - cumulative.begin(), cumulative.size() - 1));
  }
};

}  // namespace

bool EmbeddingMatrix::all_finite() const {
  for (double x : input)
    if (!std::isfinite(x)) return false;
  for (double x : output)
    if (!std::isfinite(x)) return false;
  return true;
}

EmbeddingMatrix init_embeddings(int n, int m, std::uint64_t seed) {
  EmbeddingMatrix emb;
  emb.n = n;
  emb.m = m;
  emb.input.resize(static_cast<std::size_t>(n) * m);
  emb.output.assign(static_cast<std::size_t>(n) * m, 0.0);
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> dist(-0.5 / m, 0.5 / m);
  for (double& x : emb.input) x = dist(rng);
  return emb;
}

std::vector<std::pair<int, int>> generate_pairs(const ContextCorpus& corpus,
                                                int window) {
  if (window < 1) throw std::invalid_argument("generate_pairs: window >= 1");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& seq : corpus.sequences) {
    const int len = static_cast<int>(seq.nodes.size());
    for (int i = 0; i < len; ++i) {
      int lo = std::max(0, i - window);
      int hi = std::min(len - 1, i + window);
      for (int j = lo; j <= hi; ++j)
        if (j != i) pairs.emplace_back(seq.nodes[i], seq.nodes[j]);
    }
  }
  return pairs;
}

double sg_pair_loss(const EmbeddingMatrix& emb, int center, int context,
                    std::span<const int> negatives) {
  std::span<const double> h = emb.row(center);
  auto out_row = [&](int v) {
    return std::span<const double>(
        emb.output.data() + static_cast<std::size_t>(v) * emb.m,
        static_cast<std::size_t>(emb.m));
  };
  double loss = -std::log(sigmoid(dot(h, out_row(context))));
  for (int neg : negatives) loss -= std::log(sigmoid(-dot(h, out_row(neg))));
  return loss;
}

PairGradient sg_pair_gradient(const EmbeddingMatrix& emb, int center,
                              int context, std::span<const int> negatives) {
  std::span<const double> h = emb.row(center);
  PairGradient grad;
  grad.d_center.assign(emb.m, 0.0);
  auto accumulate = [&](int target, double label) {
    std::span<const double> o(
        emb.output.data() + static_cast<std::size_t>(target) * emb.m,
        static_cast<std::size_t>(emb.m));
    double f = sigmoid(dot(h, o)) - label;  // dLoss/dscore
    std::vector<double> d_target(emb.m);
    for (int i = 0; i < emb.m; ++i) {
      grad.d_center[i] += f * o[i];
      d_target[i] = f * h[i];
    }
    grad.d_targets.push_back(std::move(d_target));
  };
  accumulate(context, 1.0);
  for (int neg : negatives) accumulate(neg, 0.0);
  return grad;
}

namespace {

// One SGD step on (center, context) with fresh negatives; word2vec-style
// in-place update.
inline void pair_update(EmbeddingMatrix& emb, int center, int context,
                        const NoiseTable& noise, int negatives, double lr,
                        std::mt19937_64& rng, std::vector<double>& dh) {
  const int m = emb.m;
  double* h = emb.input.data() + static_cast<std::size_t>(center) * m;
  dh.assign(m, 0.0);
  for (int k = 0; k <= negatives; ++k) {
    int target;
    double label;
    if (k == 0) {
      target = context;
      label = 1.0;
    } else {
      target = noise.sample(rng);
      if (target == center) continue;
      label = 0.0;
    }
    double* o = emb.output.data() + static_cast<std::size_t>(target) * m;
    double score = 0.0;
    for (int i = 0; i < m; ++i) score += h[i] * o[i];
    double g = (label - sigmoid(score)) * lr;
    for (int i = 0; i < m; ++i) {
      dh[i] += g * o[i];
      o[i] += g * h[i];
    }
  }
  for (int i = 0; i < m; ++i) h[i] += dh[i];
}

std::size_t count_pairs(const ContextCorpus& corpus, int window) {
  std::size_t total = 0;
  for (const auto& seq : corpus.sequences) {
    const int len = static_cast<int>(seq.nodes.size());
    for (int i = 0; i < len; ++i)
      total += std::min(len - 1, i + window) - std::max(0, i - window);
  }
  return total;
}

void train_sequence(EmbeddingMatrix& emb, const WalkSequence& seq,
                    const SkipGramConfig& cfg, const NoiseTable& noise,
                    double total_weight, const std::vector<double>& node_freq,
                    std::mt19937_64& rng, double lr,
                    std::vector<double>& scratch) {
  const int len = static_cast<int>(seq.nodes.size());
  for (int i = 0; i < len; ++i) {
    int center = seq.nodes[i];
    if (cfg.subsample > 0.0) {
      double f = node_freq[center] / total_weight;
      double keep = f > 0.0 ? std::sqrt(cfg.subsample / f) : 1.0;
      if (keep < 1.0 && uniform01(rng) > keep) continue;
    }
    int lo = std::max(0, i - cfg.window);
    int hi = std::min(len - 1, i + cfg.window);
    for (int j = lo; j <= hi; ++j) {
      if (j == i) continue;
      pair_update(emb, center, seq.nodes[j], noise, cfg.negatives, lr, rng,
                  scratch);
    }
  }
}

}  // namespace

EmbeddingMatrix train_skipgram(const ContextCorpus& corpus, int node_count,
                               const SkipGramConfig& cfg) {
  if (cfg.window < 1 || cfg.dim < 1 || cfg.negatives < 1)
    throw std::invalid_argument("train_skipgram: bad config");
  EmbeddingMatrix emb = init_embeddings(node_count, cfg.dim, cfg.seed);
  if (cfg.epochs == 0) return emb;

  NoiseTable noise(corpus, node_count);
  std::vector<double> node_freq(node_count, 0.0);
  double total_weight = 0.0;
  for (const auto& seq : corpus.sequences)
    for (int v : seq.nodes) {
      node_freq[v] += 1.0;
      total_weight += 1.0;
    }

  const std::size_t pairs_per_epoch = count_pairs(corpus, cfg.window);
  const double total_pairs =
      static_cast<double>(pairs_per_epoch) * cfg.epochs;
  if (pairs_per_epoch == 0) return emb;

  // lr decays linearly with sequences processed; close enough to per-pair
  // decay and cheap to track in the parallel path.
  const std::size_t seq_count = corpus.sequences.size();
  auto lr_at = [&](std::size_t seqs_done) {
    double progress = static_cast<double>(seqs_done) /
                      (static_cast<double>(seq_count) * cfg.epochs);
    return std::max(cfg.lr_min, cfg.lr_initial * (1.0 - progress));
  };
  (void)total_pairs;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.parallel) {
#pragma omp parallel
      {
        std::vector<double> scratch(cfg.dim);
#pragma omp for schedule(dynamic, 16)
        for (long long s = 0; s < static_cast<long long>(seq_count); ++s) {
          auto rng = walk_rng(splitmix64(cfg.seed) + epoch,
                              static_cast<int>(s), 0);
          double lr = lr_at(static_cast<std::size_t>(epoch) * seq_count + s);
          train_sequence(emb, corpus.sequences[s], cfg, noise, total_weight,
                         node_freq, rng, lr, scratch);
        }
      }
    } else {
      std::vector<double> scratch(cfg.dim);
      for (std::size_t s = 0; s < seq_count; ++s) {
        auto rng = walk_rng(splitmix64(cfg.seed) + epoch, static_cast<int>(s),
                            0);
        double lr = lr_at(static_cast<std::size_t>(epoch) * seq_count + s);
        train_sequence(emb, corpus.sequences[s], cfg, noise, total_weight,
                       node_freq, rng, lr, scratch);
      }
    }
    if (!emb.all_finite())
      throw std::runtime_error("train_skipgram: non-finite embedding after epoch " +
                               std::to_string(epoch));
  }
  return emb;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double na = std::sqrt(dot(a, a));
  double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

void export_embeddings(const EmbeddingMatrix& emb, const Graph& g,
                       const std::string& path) {
  if (!emb.all_finite())
    throw std::runtime_error("export_embeddings: non-finite values");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embeddings: " + path);
  out << emb.n << ' ' << emb.m << '\n';
  out << std::setprecision(17);
  for (int v = 0; v < emb.n; ++v) {
    const std::string& label = g.label(v);
    if (label.find_first_of(" \t") != std::string::npos)
      throw std::runtime_error("export_embeddings: label contains whitespace: " +
                               label);
    out << label;
    for (double x : emb.row(v)) out << ' ' << x;
    out << '\n';
  }
}

std::pair<std::vector<std::string>, EmbeddingMatrix> load_embeddings(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read embeddings: " + path);
  int n = 0, m = 0;
  if (!(in >> n >> m) || n < 1 || m < 1)
    throw std::runtime_error("embeddings: bad header in " + path);
  EmbeddingMatrix emb;
  emb.n = n;
  emb.m = m;
  emb.input.resize(static_cast<std::size_t>(n) * m);
  emb.output.assign(emb.input.size(), 0.0);
  std::vector<std::string> labels(n);
  for (int v = 0; v < n; ++v) {
    if (!(in >> labels[v]))
      throw std::runtime_error("embeddings: truncated file " + path);
    for (int i = 0; i < m; ++i)
      if (!(in >> emb.input[static_cast<std::size_t>(v) * m + i]))
        throw std::runtime_error("embeddings: truncated row for " + labels[v]);
  }
  return {std::move(labels), std::move(emb)};
}

}  // namespace mlane
