#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mlane/graph.hpp"

namespace mlane {

enum class Action : int { Forward = 0, Same = 1, Backward = 2 };
inline constexpr int kActionCount = 3;
const char* action_name(Action a);

// (source node, hop distance of the current node from that source).
struct WalkState {
  int source = 0;
  int distance = 0;
};

struct ActionDistribution {
  std::array<double, kActionCount> p{};
  double operator[](Action a) const { return p[static_cast<int>(a)]; }
};

using ActionMask = std::array<bool, kActionCount>;
inline constexpr ActionMask kAllActions{true, true, true};

// MLP weights for [n+1] -> hidden1 -> hidden2 -> 3, rectified-linear hidden
// units and a softmax output. Also used as the gradient container (same
// shapes).
struct PolicyParams {
  int input_dim = 0;  // n + 1
  int hidden1 = 10;
  int hidden2 = 5;
  std::vector<double> w1, b1;  // hidden1 x input_dim, row-major
  std::vector<double> w2, b2;  // hidden2 x hidden1
  std::vector<double> w3, b3;  // 3 x hidden2
  std::uint64_t version = 0;   // bumped by apply_update; on-policy guard

  static PolicyParams zeros(int n, int hidden1 = 10, int hidden2 = 5);
  // Uniform [-r, r] with r = sqrt(6 / (fan_in + fan_out)), zero biases.
  static PolicyParams random_init(int n, std::uint64_t seed, int hidden1 = 10,
                                  int hidden2 = 5);

  std::size_t parameter_count() const;
  void fill(double value);
  // this += scale * other
  void axpy(double scale, const PolicyParams& other);
  double max_abs() const;
  bool all_finite() const;

  std::string to_json(std::uint64_t seed = 0) const;
  static PolicyParams from_json(const std::string& text);
  void save(const std::string& path, std::uint64_t seed = 0) const;
  static PolicyParams load(const std::string& path);
};

// One-hot source block plus the distance scalar normalized by the source's
// max finite BFS distance.
std::vector<double> encode_state(const WalkState& s, const DistanceField& field,
                                 int n);
double normalized_distance(const WalkState& s, const DistanceField& field);

ActionDistribution policy_forward(const PolicyParams& params, const WalkState& s,
                                  const DistanceField& field);

// Probabilities renormalized over a feasible-action mask (softmax restricted
// to the masked logits). With a full mask this equals policy_forward.
ActionDistribution policy_forward_masked(const PolicyParams& params,
                                         const WalkState& s,
                                         const DistanceField& field,
                                         const ActionMask& mask);

// Gradient of log pi(a | s) under the masked softmax, added into `out`
// scaled by `scale`. Returns log pi(a | s) for the same masked distribution.
double accumulate_log_prob_gradient(const PolicyParams& params,
                                    const WalkState& s, Action a,
                                    const DistanceField& field,
                                    const ActionMask& mask, double scale,
                                    PolicyParams& out);

PolicyParams log_prob_gradient(const PolicyParams& params, const WalkState& s,
                               Action a, const DistanceField& field,
                               const ActionMask& mask = kAllActions);

// theta' = theta + alpha * grad (plain gradient ascent step).
PolicyParams apply_update(const PolicyParams& params, const PolicyParams& grad,
                          double alpha);

}  // namespace mlane
