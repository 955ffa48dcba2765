#include "mlane/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mlane {

const char* action_name(Action a) {
  switch (a) {
    case Action::Forward: return "forward";
    case Action::Same: return "same";
    case Action::Backward: return "backward";
  }
  return "?";
}

PolicyParams PolicyParams::zeros(int n, int hidden1, int hidden2) {
  PolicyParams p;
  p.input_dim = n + 1;
  p.hidden1 = hidden1;
  p.hidden2 = hidden2;
  p.w1.assign(static_cast<std::size_t>(hidden1) * p.input_dim, 0.0);
  p.b1.assign(hidden1, 0.0);
  p.w2.assign(static_cast<std::size_t>(hidden2) * hidden1, 0.0);
  p.b2.assign(hidden2, 0.0);
  p.w3.assign(static_cast<std::size_t>(kActionCount) * hidden2, 0.0);
  p.b3.assign(kActionCount, 0.0);
  return p;
}

PolicyParams PolicyParams::random_init(int n, std::uint64_t seed, int hidden1,
                                       int hidden2) {
  PolicyParams p = zeros(n, hidden1, hidden2);
  std::mt19937_64 rng(seed);
  auto init = [&rng](std::vector<double>& w, int fan_in, int fan_out) {
    double r = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-r, r);
    for (double& x : w) x = dist(rng);
  };
  init(p.w1, p.input_dim, hidden1);
  init(p.w2, hidden1, hidden2);
  init(p.w3, hidden2, kActionCount);
  return p;
}

std::size_t PolicyParams::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
}

void PolicyParams::fill(double value) {
  for (auto* v : {&w1, &b1, &w2, &b2, &w3, &b3})
    std::fill(v->begin(), v->end(), value);
}

void PolicyParams::axpy(double scale, const PolicyParams& other) {
  auto add = [scale](std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("axpy: shape mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
  };
  add(w1, other.w1);
  add(b1, other.b1);
  add(w2, other.w2);
  add(b2, other.b2);
  add(w3, other.w3);
  add(b3, other.b3);
}

double PolicyParams::max_abs() const {
  double m = 0.0;
  for (auto* v : {&w1, &b1, &w2, &b2, &w3, &b3})
    for (double x : *v) m = std::max(m, std::abs(x));
  return m;
}

bool PolicyParams::all_finite() const {
  for (auto* v : {&w1, &b1, &w2, &b2, &w3, &b3})
    for (double x : *v)
      if (!std::isfinite(x)) return false;
  return true;
}

std::string PolicyParams::to_json(std::uint64_t seed) const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["input_dim"] = input_dim;
  j["hidden"] = {hidden1, hidden2};
  j["seed"] = seed;
  j["w1"] = w1;
  j["b1"] = b1;
  j["w2"] = w2;
  j["b2"] = b2;
  j["w3"] = w3;
  j["b3"] = b3;
  return j.dump(2);
}

PolicyParams PolicyParams::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  PolicyParams p;
  p.input_dim = j.at("input_dim").get<int>();
  p.hidden1 = j.at("hidden").at(0).get<int>();
  p.hidden2 = j.at("hidden").at(1).get<int>();
  j.at("w1").get_to(p.w1);
  j.at("b1").get_to(p.b1);
  j.at("w2").get_to(p.w2);
  j.at("b2").get_to(p.b2);
  j.at("w3").get_to(p.w3);
  j.at("b3").get_to(p.b3);
  if (p.w1.size() != static_cast<std::size_t>(p.hidden1) * p.input_dim ||
      p.w2.size() != static_cast<std::size_t>(p.hidden2) * p.hidden1 ||
      p.w3.size() != static_cast<std::size_t>(kActionCount) * p.hidden2)
    throw std::runtime_error("policy checkpoint: inconsistent shapes");
  return p;
}

void PolicyParams::save(const std::string& path, std::uint64_t seed) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write policy checkpoint: " + path);
  out << to_json(seed) << '\n';
}

PolicyParams PolicyParams::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read policy checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

double normalized_distance(const WalkState& s, const DistanceField& field) {
  return static_cast<double>(s.distance) / std::max(1, field.max_dist);
}

std::vector<double> encode_state(const WalkState& s, const DistanceField& field,
                                 int n) {
  if (s.source < 0 || s.source >= n)
    throw std::out_of_range("encode_state: source out of range");
  std::vector<double> x(n + 1, 0.0);
  x[s.source] = 1.0;
  x[n] = normalized_distance(s, field);
  return x;
}

namespace {

struct ForwardPass {
  std::vector<double> h1, h2;            // post-ReLU activations
  std::array<double, kActionCount> logits{};
  ActionDistribution probs;              // under the requested mask
};

// Exploits the sparse input: one-hot at `source` plus the distance slot.
ForwardPass forward_pass(const PolicyParams& p, const WalkState& s,
                         const DistanceField& field, const ActionMask& mask) {
  if (s.source < 0 || s.source + 1 >= p.input_dim)
    throw std::out_of_range("policy_forward: source out of range");
  const int n = p.input_dim - 1;
  const double dnorm = normalized_distance(s, field);

  ForwardPass fp;
  fp.h1.resize(p.hidden1);
  for (int j = 0; j < p.hidden1; ++j) {
    const double* row = p.w1.data() + static_cast<std::size_t>(j) * p.input_dim;
    double z = row[s.source] + dnorm * row[n] + p.b1[j];
    fp.h1[j] = z > 0.0 ? z : 0.0;
  }
  fp.h2.resize(p.hidden2);
  for (int j = 0; j < p.hidden2; ++j) {
    const double* row = p.w2.data() + static_cast<std::size_t>(j) * p.hidden1;
    double z = p.b2[j];
    for (int i = 0; i < p.hidden1; ++i) z += row[i] * fp.h1[i];
    fp.h2[j] = z > 0.0 ? z : 0.0;
  }
  for (int a = 0; a < kActionCount; ++a) {
    const double* row = p.w3.data() + static_cast<std::size_t>(a) * p.hidden2;
    double z = p.b3[a];
    for (int i = 0; i < p.hidden2; ++i) z += row[i] * fp.h2[i];
    if (!std::isfinite(z))
      throw std::runtime_error("policy_forward: non-finite logit");
    fp.logits[a] = z;
  }

  double zmax = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < kActionCount; ++a)
    if (mask[a]) zmax = std::max(zmax, fp.logits[a]);
  if (std::isinf(zmax))
    throw std::invalid_argument("policy_forward: empty action mask");
  double total = 0.0;
  for (int a = 0; a < kActionCount; ++a) {
    double e = mask[a] ? std::exp(fp.logits[a] - zmax) : 0.0;
    fp.probs.p[a] = e;
    total += e;
  }
  for (double& q : fp.probs.p) q /= total;
  return fp;
}

}  // namespace

ActionDistribution policy_forward(const PolicyParams& params, const WalkState& s,
                                  const DistanceField& field) {
  return forward_pass(params, s, field, kAllActions).probs;
}

ActionDistribution policy_forward_masked(const PolicyParams& params,
                                         const WalkState& s,
                                         const DistanceField& field,
                                         const ActionMask& mask) {
  return forward_pass(params, s, field, mask).probs;
}

double accumulate_log_prob_gradient(const PolicyParams& p, const WalkState& s,
                                    Action a, const DistanceField& field,
                                    const ActionMask& mask, double scale,
                                    PolicyParams& out) {
  if (!mask[static_cast<int>(a)])
    throw std::invalid_argument("log_prob_gradient: action not in mask");
  const int n = p.input_dim - 1;
  const double dnorm = normalized_distance(s, field);
  ForwardPass fp = forward_pass(p, s, field, mask);

  // d log pi / d logits for the masked softmax
  std::array<double, kActionCount> dlogit{};
  for (int k = 0; k < kActionCount; ++k) dlogit[k] = -fp.probs.p[k];
  dlogit[static_cast<int>(a)] += 1.0;

  for (int k = 0; k < kActionCount; ++k) {
    out.b3[k] += scale * dlogit[k];
    double* row = out.w3.data() + static_cast<std::size_t>(k) * p.hidden2;
    for (int i = 0; i < p.hidden2; ++i) row[i] += scale * dlogit[k] * fp.h2[i];
  }

  std::vector<double> dh2(p.hidden2, 0.0);
  for (int k = 0; k < kActionCount; ++k) {
    const double* row = p.w3.data() + static_cast<std::size_t>(k) * p.hidden2;
    for (int i = 0; i < p.hidden2; ++i) dh2[i] += dlogit[k] * row[i];
  }
  for (int i = 0; i < p.hidden2; ++i)
    if (fp.h2[i] <= 0.0) dh2[i] = 0.0;

  for (int j = 0; j < p.hidden2; ++j) {
    out.b2[j] += scale * dh2[j];
    double* row = out.w2.data() + static_cast<std::size_t>(j) * p.hidden1;
    for (int i = 0; i < p.hidden1; ++i) row[i] += scale * dh2[j] * fp.h1[i];
  }

  std::vector<double> dh1(p.hidden1, 0.0);
  for (int j = 0; j < p.hidden2; ++j) {
    const double* row = p.w2.data() + static_cast<std::size_t>(j) * p.hidden1;
    for (int i = 0; i < p.hidden1; ++i) dh1[i] += dh2[j] * row[i];
  }
  for (int i = 0; i < p.hidden1; ++i)
    if (fp.h1[i] <= 0.0) dh1[i] = 0.0;

  // Input is one-hot at `source` plus dnorm at the last slot, so only two
  // columns of w1 receive gradient.
  for (int j = 0; j < p.hidden1; ++j) {
    out.b1[j] += scale * dh1[j];
    double* row = out.w1.data() + static_cast<std::size_t>(j) * p.input_dim;
    row[s.source] += scale * dh1[j];
    row[n] += scale * dh1[j] * dnorm;
  }

  return std::log(fp.probs.p[static_cast<int>(a)]);
}

PolicyParams log_prob_gradient(const PolicyParams& params, const WalkState& s,
                               Action a, const DistanceField& field,
                               const ActionMask& mask) {
  PolicyParams grad = PolicyParams::zeros(params.input_dim - 1, params.hidden1,
                                          params.hidden2);
  accumulate_log_prob_gradient(params, s, a, field, mask, 1.0, grad);
  return grad;
}

PolicyParams apply_update(const PolicyParams& params, const PolicyParams& grad,
                          double alpha) {
  if (!grad.all_finite())
    throw std::runtime_error("apply_update: non-finite gradient");
  PolicyParams next = params;
  next.axpy(alpha, grad);
  ++next.version;
  return next;
}

}  // namespace mlane
