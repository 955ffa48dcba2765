#include "mlane/walker.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mlane/rng.hpp"

namespace mlane {

std::size_t ContextCorpus::total_steps() const {
  std::size_t total = 0;
  for (const auto& t : trajectories) total += t.steps.size();
  return total;
}

std::size_t ContextCorpus::total_fallbacks() const {
  std::size_t total = 0;
  for (const auto& t : trajectories)
    for (const auto& s : t.steps) total += s.fallback ? 1 : 0;
  return total;
}

namespace {

Action draw_action(const ActionDistribution& dist, std::mt19937_64& rng) {
  double u = uniform01(rng);
  double cum = 0.0;
  for (int a = 0; a < kActionCount; ++a) {
    cum += dist.p[a];
    if (u < cum) return static_cast<Action>(a);
  }
  return Action::Backward;
}

const std::vector<int>* partition_for(const NeighborPartition& part, Action a) {
  switch (a) {
    case Action::Forward: return &part.forward;
    case Action::Same: return &part.same;
    case Action::Backward: return &part.backward;
  }
  return nullptr;
}

}  // namespace

std::pair<WalkSequence, Trajectory> sample_walk(const Graph& g,
                                                const DistanceField& field,
                                                const PolicyParams& params,
                                                int length,
                                                std::mt19937_64& rng) {
  if (length < 1) throw std::invalid_argument("sample_walk: length must be >= 1");
  WalkSequence seq;
  Trajectory traj;
  traj.source = field.source;
  seq.nodes.push_back(field.source);

  int current = field.source;
  for (int step = 0; step < length; ++step) {
    if (g.degree(current) == 0) break;  // isolated source
    NeighborPartition part = partition_neighbors(g, field, current);
    ActionMask mask{!part.forward.empty(), !part.same.empty(),
                    !part.backward.empty()};

    WalkState state{field.source, field.dist[current]};
    Action a = draw_action(policy_forward(params, state, field), rng);
    bool fallback = false;
    if (!mask[static_cast<int>(a)]) {
      fallback = true;
      a = draw_action(policy_forward_masked(params, state, field, mask), rng);
    }
    const std::vector<int>& pool = *partition_for(part, a);
    int next = pool[uniform_index(rng, static_cast<int>(pool.size()))];

    traj.steps.push_back({state, a, mask, fallback});
    seq.nodes.push_back(next);
    current = next;
  }
  return {std::move(seq), std::move(traj)};
}

namespace {

template <typename WalkFn>
ContextCorpus sample_corpus_impl(const Graph& g, int walks_per_node,
                                 bool parallel, WalkFn&& walk_one) {
  const int n = g.node_count();
  ContextCorpus corpus;
  corpus.walks_per_node = walks_per_node;
  const std::size_t total = static_cast<std::size_t>(n) * walks_per_node;
  corpus.sequences.resize(total);
  corpus.trajectories.resize(total);

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx)
      walk_one(corpus, static_cast<std::size_t>(idx));
  } else {
    for (std::size_t idx = 0; idx < total; ++idx) walk_one(corpus, idx);
  }
  return corpus;
}

}  // namespace

ContextCorpus sample_corpus(const Graph& g, DistanceCache& cache,
                            const PolicyParams& params, int walks_per_node,
                            int length, std::uint64_t seed, bool parallel) {
  if (walks_per_node < 1 || length < 1)
    throw std::invalid_argument("sample_corpus: K and L must be >= 1");
  // Warm the cache up front so parallel workers only read.
  for (int v = 0; v < g.node_count(); ++v) cache.get(v);
  ContextCorpus out = sample_corpus_impl(
      g, walks_per_node, parallel,
      [&](ContextCorpus& corpus, std::size_t idx) {
        int node = static_cast<int>(idx / walks_per_node);
        int walk = static_cast<int>(idx % walks_per_node);
        auto rng = walk_rng(seed, node, walk);
        auto [seq, traj] = sample_walk(g, cache.get(node), params, length, rng);
        traj.walk_index = walk;
        corpus.sequences[idx] = std::move(seq);
        corpus.trajectories[idx] = std::move(traj);
      });
  out.policy_version = params.version;
  return out;
}

ContextCorpus sample_corpus_serial(const Graph& g, DistanceCache& cache,
                                   const PolicyParams& params,
                                   int walks_per_node, int length,
                                   std::uint64_t seed) {
  ContextCorpus corpus;
  {
    // Same per-walk streams, plain loop; kept as the reference path.
    for (int v = 0; v < g.node_count(); ++v) cache.get(v);
    corpus.walks_per_node = walks_per_node;
    corpus.sequences.resize(static_cast<std::size_t>(g.node_count()) *
                            walks_per_node);
    corpus.trajectories.resize(corpus.sequences.size());
    for (int node = 0; node < g.node_count(); ++node) {
      for (int walk = 0; walk < walks_per_node; ++walk) {
        auto rng = walk_rng(seed, node, walk);
        auto [seq, traj] = sample_walk(g, cache.get(node), params, length, rng);
        traj.walk_index = walk;
        std::size_t idx = static_cast<std::size_t>(node) * walks_per_node + walk;
        corpus.sequences[idx] = std::move(seq);
        corpus.trajectories[idx] = std::move(traj);
      }
    }
  }
  corpus.policy_version = params.version;
  return corpus;
}

double trajectory_log_prob(const Trajectory& traj, const PolicyParams& params,
                           DistanceCache& cache) {
  const DistanceField& field = cache.get(traj.source);
  double total = 0.0;
  for (const auto& step : traj.steps) {
    ActionDistribution dist =
        policy_forward_masked(params, step.state, field, step.feasible);
    total += std::log(dist[step.action]);
  }
  return total;
}

double trajectory_log_prob(const std::vector<Trajectory>& trajs,
                           const PolicyParams& params, DistanceCache& cache) {
  double total = 0.0;
  for (const auto& t : trajs) total += trajectory_log_prob(t, params, cache);
  return total;
}

WalkSequence baseline_walk_uniform(const Graph& g, int source, int length,
                                   std::mt19937_64& rng) {
  WalkSequence seq;
  seq.nodes.push_back(source);
  int current = source;
  for (int step = 0; step < length; ++step) {
    if (g.degree(current) == 0) break;
    current = g.neighbors(current)[uniform_index(rng, g.degree(current))];
    seq.nodes.push_back(current);
  }
  return seq;
}

WalkSequence baseline_walk_pq(const Graph& g, int source, int length, double p,
                              double q, std::mt19937_64& rng) {
  if (p <= 0.0 || q <= 0.0)
    throw std::invalid_argument("baseline_walk_pq: p and q must be positive");
  WalkSequence seq;
  seq.nodes.push_back(source);
  if (length < 1 || g.degree(source) == 0) return seq;

  int current = g.neighbors(source)[uniform_index(rng, g.degree(source))];
  seq.nodes.push_back(current);
  int prev = source;
  std::vector<double> weights;
  for (int step = 1; step < length; ++step) {
    if (g.degree(current) == 0) break;
    const auto& nbrs = g.neighbors(current);
    weights.resize(nbrs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      double w;
      if (nbrs[i] == prev)
        w = 1.0 / p;
      else if (g.has_edge(prev, nbrs[i]))
        w = 1.0;
      else
        w = 1.0 / q;
      weights[i] = w;
      total += w;
    }
    double u = uniform01(rng) * total;
    double cum = 0.0;
    std::size_t pick = nbrs.size() - 1;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      cum += weights[i];
      if (u < cum) {
        pick = i;
        break;
      }
    }
    prev = current;
    current = nbrs[pick];
    seq.nodes.push_back(current);
  }
  return seq;
}

ContextCorpus sample_corpus_baseline(const Graph& g, BaselineKind kind,
                                     int walks_per_node, int length,
                                     std::uint64_t seed, double p, double q,
                                     bool parallel) {
  if (walks_per_node < 1 || length < 1)
    throw std::invalid_argument("sample_corpus_baseline: K and L must be >= 1");
  ContextCorpus corpus = sample_corpus_impl(
      g, walks_per_node, parallel,
      [&](ContextCorpus& out, std::size_t idx) {
        int node = static_cast<int>(idx / walks_per_node);
        int walk = static_cast<int>(idx % walks_per_node);
        auto rng = walk_rng(seed, node, walk);
        out.sequences[idx] =
            kind == BaselineKind::Uniform
                ? baseline_walk_uniform(g, node, length, rng)
                : baseline_walk_pq(g, node, length, p, q, rng);
      });
  corpus.trajectories.clear();
  return corpus;
}

std::vector<std::array<double, kActionCount>> mean_action_probabilities(
    const ContextCorpus& corpus, const PolicyParams& params,
    DistanceCache& cache, int node_count) {
  std::vector<std::array<double, kActionCount>> mean(
      node_count, std::array<double, kActionCount>{});
  std::vector<std::size_t> counts(node_count, 0);
  for (const auto& traj : corpus.trajectories) {
    const DistanceField& field = cache.get(traj.source);
    for (const auto& step : traj.steps) {
      ActionDistribution dist = policy_forward(params, step.state, field);
      for (int a = 0; a < kActionCount; ++a)
        mean[traj.source][a] += dist.p[a];
      ++counts[traj.source];
    }
  }
  for (int v = 0; v < node_count; ++v)
    if (counts[v] > 0)
      for (int a = 0; a < kActionCount; ++a) mean[v][a] /= counts[v];
  return mean;
}

std::string dump_corpus(const ContextCorpus& corpus, const Graph& g) {
  std::ostringstream out;
  for (const auto& seq : corpus.sequences) {
    for (std::size_t i = 0; i < seq.nodes.size(); ++i) {
      if (i) out << ' ';
      out << g.label(seq.nodes[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string dump_trajectories(const ContextCorpus& corpus, const Graph& g) {
  std::ostringstream out;
  for (const auto& traj : corpus.trajectories) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : traj.steps)
      steps.push_back({step.state.distance, action_name(step.action),
                       step.fallback});
    nlohmann::json j{{"source", g.label(traj.source)},
                     {"walk", traj.walk_index},
                     {"steps", steps}};
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace mlane
