#include "mlane/meta.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mlane/rng.hpp"

namespace mlane {

std::vector<double> MetaTrace::rewards() const {
  std::vector<double> out;
  out.reserve(iterations.size());
  for (const auto& it : iterations) out.push_back(it.reward);
  return out;
}

std::string MetaTrace::to_csv() const {
  std::ostringstream out;
  out << "iteration,reward,grad_norm,seconds\n";
  for (const auto& it : iterations)
    out << it.iteration << ',' << it.reward << ',' << it.grad_norm << ','
        << it.seconds << '\n';
  return out.str();
}

double policy_l2_norm(const PolicyParams& p) {
  double s = 0.0;
  for (auto* v : {&p.w1, &p.b1, &p.w2, &p.b2, &p.w3, &p.b3})
    for (double x : *v) s += x * x;
  return std::sqrt(s);
}

PolicyParams policy_gradient_estimate(const ContextCorpus& corpus,
                                      double reward, double baseline,
                                      const PolicyParams& params,
                                      DistanceCache& cache) {
  if (corpus.trajectories.empty())
    throw std::invalid_argument("policy_gradient_estimate: empty trajectory set");
  if (corpus.policy_version != params.version)
    throw std::invalid_argument(
        "policy_gradient_estimate: corpus was sampled under different policy "
        "parameters (on-policy violation)");
  PolicyParams grad = PolicyParams::zeros(params.input_dim - 1, params.hidden1,
                                          params.hidden2);
  const std::size_t total_steps = corpus.total_steps();
  if (total_steps == 0) return grad;
  // Normalizing by the step count keeps alpha meaningful across n, K, L.
  const double scale = (reward - baseline) / static_cast<double>(total_steps);
  if (scale == 0.0) return grad;
  for (const auto& traj : corpus.trajectories) {
    const DistanceField& field = cache.get(traj.source);
    for (const auto& step : traj.steps)
      accumulate_log_prob_gradient(params, step.state, step.action, field,
                                   step.feasible, scale, grad);
  }
  return grad;
}

bool has_converged(const std::vector<double>& rewards, int window, double tol) {
  if (window < 2) throw std::invalid_argument("has_converged: window must be >= 2");
  if (static_cast<int>(rewards.size()) < window) return false;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = rewards.size() - window; i < rewards.size(); ++i) {
    lo = std::min(lo, rewards[i]);
    hi = std::max(hi, rewards[i]);
  }
  return hi - lo < tol;
}

MetaResult run_mlane(const Graph& g, const MetaConfig& cfg, RewardFn reward,
                     IterationCallback on_iteration) {
  const int n = g.node_count();
  PolicyParams theta = PolicyParams::random_init(n, cfg.seed);
  DistanceCache cache(g);
  RewardBaseline baseline{cfg.baseline_decay};

  MetaResult result;
  double best_reward = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    auto start = std::chrono::steady_clock::now();
    ContextCorpus corpus =
        sample_corpus(g, cache, theta, cfg.walks_per_node, cfg.walk_length,
                      mix_keys(cfg.seed, 0xc0 + iter), cfg.parallel);

    SkipGramConfig sg;
    sg.window = cfg.window;
    sg.dim = cfg.dim;
    sg.epochs = cfg.sg_epochs;
    sg.negatives = cfg.sg_negatives;
    sg.lr_initial = cfg.sg_lr;
    sg.seed = mix_keys(cfg.seed, 0x59 + iter);
    sg.parallel = cfg.parallel && !cfg.deterministic;
    EmbeddingMatrix embeddings = train_skipgram(corpus, n, sg);

    TaskReport report = reward(embeddings);
    if (!std::isfinite(report.reward))
      throw std::runtime_error("run_mlane: non-finite reward at iteration " +
                               std::to_string(iter));

    double b = cfg.reward_baseline && baseline.initialized ? baseline.value : 0.0;
    PolicyParams grad =
        policy_gradient_estimate(corpus, report.reward, b, theta, cache);
    if (!grad.all_finite())
      throw std::runtime_error("run_mlane: non-finite gradient at iteration " +
                               std::to_string(iter));
    if (cfg.reward_baseline) baseline.observe(report.reward);

    MetaIteration record;
    record.iteration = iter;
    record.reward = report.reward;
    record.grad_norm = policy_l2_norm(grad);
    record.corpus_steps = corpus.total_steps();
    record.fallbacks = corpus.total_fallbacks();
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    result.trace.iterations.push_back(record);

    if (report.reward > best_reward) {
      best_reward = report.reward;
      result.embeddings = embeddings;
      result.best_report = report;
      result.trace.best_iteration = iter;
    }
    if (on_iteration) on_iteration(iter, theta, embeddings, report);

    theta = apply_update(theta, grad, cfg.alpha);
    if (has_converged(result.trace.rewards(), cfg.convergence_window,
                      cfg.convergence_tol))
      break;
  }
  result.policy = std::move(theta);
  return result;
}

}  // namespace mlane
