#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mlane/graph.hpp"
#include "mlane/policy.hpp"

namespace mlane {

struct TrajectoryStep {
  WalkState state;
  Action action = Action::Forward;
  ActionMask feasible = kAllActions;  // partitions that were nonempty
  bool fallback = false;              // first draw hit an empty partition
};

struct Trajectory {
  int source = 0;
  int walk_index = 0;
  std::vector<TrajectoryStep> steps;
};

struct WalkSequence {
  std::vector<int> nodes;  // starts at the source, length <= L + 1
};

// K walks per node plus the paired (state, action) trajectories, keyed by
// node * K + walk.
struct ContextCorpus {
  int walks_per_node = 0;
  std::uint64_t policy_version = 0;  // version of the params sampled under
  std::vector<WalkSequence> sequences;
  std::vector<Trajectory> trajectories;  // empty for baseline walkers

  const WalkSequence& sequence(int node, int walk) const {
    return sequences[static_cast<std::size_t>(node) * walks_per_node + walk];
  }
  std::size_t total_steps() const;
  std::size_t total_fallbacks() const;
};

std::pair<WalkSequence, Trajectory> sample_walk(const Graph& g,
                                                const DistanceField& field,
                                                const PolicyParams& params,
                                                int length,
                                                std::mt19937_64& rng);

// K policy walks per node; deterministic for a fixed seed regardless of
// thread count (per-(node, walk) RNG streams).
ContextCorpus sample_corpus(const Graph& g, DistanceCache& cache,
                            const PolicyParams& params, int walks_per_node,
                            int length, std::uint64_t seed,
                            bool parallel = true);
// Serial reference used by tests and the benchmark.
ContextCorpus sample_corpus_serial(const Graph& g, DistanceCache& cache,
                                   const PolicyParams& params,
                                   int walks_per_node, int length,
                                   std::uint64_t seed);

// Log probability of the realized actions under `params`, feasibility
// renormalized where the step's mask is partial.
double trajectory_log_prob(const Trajectory& traj, const PolicyParams& params,
                           DistanceCache& cache);
double trajectory_log_prob(const std::vector<Trajectory>& trajs,
                           const PolicyParams& params, DistanceCache& cache);

WalkSequence baseline_walk_uniform(const Graph& g, int source, int length,
                                   std::mt19937_64& rng);
// Second-order biased walk: weight 1/p to return, 1 to stay at distance one
// from the previous node, 1/q otherwise.
WalkSequence baseline_walk_pq(const Graph& g, int source, int length, double p,
                              double q, std::mt19937_64& rng);

enum class BaselineKind { Uniform, PQ };

ContextCorpus sample_corpus_baseline(const Graph& g, BaselineKind kind,
                                     int walks_per_node, int length,
                                     std::uint64_t seed, double p = 1.0,
                                     double q = 1.0, bool parallel = true);

// Per-node mean unmasked action probabilities over the states visited by the
// node's own walks; the replay statistic behind `inspect-policy`.
std::vector<std::array<double, kActionCount>> mean_action_probabilities(
    const ContextCorpus& corpus, const PolicyParams& params,
    DistanceCache& cache, int node_count);

std::string dump_corpus(const ContextCorpus& corpus, const Graph& g);
std::string dump_trajectories(const ContextCorpus& corpus, const Graph& g);

}  // namespace mlane
