#include "mlane/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mlane/rng.hpp"

namespace mlane {

// ---------------------------------------------------------------- labels

bool LabelSet::single_label() const {
  for (const auto& c : classes_of)
    if (c.size() > 1) return false;
  return true;
}

std::vector<int> LabelSet::labeled_nodes() const {
  std::vector<int> nodes;
  for (int v = 0; v < static_cast<int>(classes_of.size()); ++v)
    if (!classes_of[v].empty()) nodes.push_back(v);
  return nodes;
}

std::vector<int> LabelSet::flat() const {
  std::vector<int> out(classes_of.size(), -1);
  for (std::size_t v = 0; v < classes_of.size(); ++v) {
    if (classes_of[v].size() > 1)
      throw std::runtime_error("flat(): node has multiple labels");
    if (!classes_of[v].empty()) out[v] = classes_of[v][0];
  }
  return out;
}

LabelSet LabelSet::parse(std::string_view text, const Graph& g) {
  LabelSet ls;
  ls.classes_of.resize(g.node_count());
  std::unordered_map<std::string, int> class_id;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string node, classes;
    if (!(ss >> node)) continue;
    if (node[0] == '#') continue;
    if (!(ss >> classes))
      throw std::runtime_error("label file line " + std::to_string(line_no) +
                               ": expected \"<node> <class>[,<class>...]\"");
    int v = g.id_of(node);
    if (v < 0)
      throw std::runtime_error("label file line " + std::to_string(line_no) +
                               ": unknown node " + node);
    if (!ls.classes_of[v].empty())
      throw std::runtime_error("label file line " + std::to_string(line_no) +
                               ": duplicate entry for node " + node);
    std::istringstream cs(classes);
    std::string cls;
    while (std::getline(cs, cls, ',')) {
      if (cls.empty()) continue;
      auto [it, inserted] =
          class_id.emplace(cls, static_cast<int>(ls.class_names.size()));
      if (inserted) ls.class_names.push_back(cls);
      ls.classes_of[v].push_back(it->second);
    }
    std::sort(ls.classes_of[v].begin(), ls.classes_of[v].end());
    ls.classes_of[v].erase(
        std::unique(ls.classes_of[v].begin(), ls.classes_of[v].end()),
        ls.classes_of[v].end());
  }
  return ls;
}

LabelSet LabelSet::parse_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), g);
}

// --------------------------------------------------------------- metrics

double purity(std::span<const int> assignments, std::span<const int> truth) {
  if (assignments.size() != truth.size() || assignments.empty())
    throw std::invalid_argument("purity: empty or mismatched inputs");
  int kc = *std::max_element(assignments.begin(), assignments.end()) + 1;
  int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  std::vector<std::vector<long>> contingency(kc, std::vector<long>(kt, 0));
  for (std::size_t i = 0; i < assignments.size(); ++i)
    ++contingency[assignments[i]][truth[i]];
  long correct = 0;
  for (const auto& row : contingency)
    correct += *std::max_element(row.begin(), row.end());
  return static_cast<double>(correct) / static_cast<double>(assignments.size());
}

double nmi(std::span<const int> assignments, std::span<const int> truth) {
  if (assignments.size() != truth.size() || assignments.empty())
    throw std::invalid_argument("nmi: empty or mismatched inputs");
  const double n = static_cast<double>(assignments.size());
  int kc = *std::max_element(assignments.begin(), assignments.end()) + 1;
  int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  std::vector<std::vector<double>> joint(kc, std::vector<double>(kt, 0.0));
  std::vector<double> pc(kc, 0.0), pt(kt, 0.0);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    joint[assignments[i]][truth[i]] += 1.0 / n;
    pc[assignments[i]] += 1.0 / n;
    pt[truth[i]] += 1.0 / n;
  }
  double mi = 0.0, hc = 0.0, ht = 0.0;
  for (int i = 0; i < kc; ++i)
    for (int j = 0; j < kt; ++j)
      if (joint[i][j] > 0.0)
        mi += joint[i][j] * std::log(joint[i][j] / (pc[i] * pt[j]));
  for (double p : pc)
    if (p > 0.0) hc -= p * std::log(p);
  for (double p : pt)
    if (p > 0.0) ht -= p * std::log(p);
  if (hc <= 0.0 || ht <= 0.0) return 0.0;  // zero-entropy convention
  return std::clamp(mi / std::sqrt(hc * ht), 0.0, 1.0);
}

std::pair<double, double> micro_macro_f1(
    const std::vector<std::vector<int>>& pred,
    const std::vector<std::vector<int>>& truth, int class_count) {
  if (pred.size() != truth.size() || pred.empty())
    throw std::invalid_argument("micro_macro_f1: empty or mismatched inputs");
  std::vector<long> tp(class_count, 0), fp(class_count, 0), fn(class_count, 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    std::set<int> p(pred[i].begin(), pred[i].end());
    std::set<int> t(truth[i].begin(), truth[i].end());
    for (int c : p) {
      if (t.count(c))
        ++tp[c];
      else
        ++fp[c];
    }
    for (int c : t)
      if (!p.count(c)) ++fn[c];
  }
  long tp_total = 0, fp_total = 0, fn_total = 0;
  double macro_sum = 0.0;
  int macro_classes = 0;
  for (int c = 0; c < class_count; ++c) {
    tp_total += tp[c];
    fp_total += fp[c];
    fn_total += fn[c];
    if (tp[c] + fp[c] + fn[c] == 0) continue;  // never seen: excluded
    double denom = 2.0 * tp[c] + fp[c] + fn[c];
    macro_sum += denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
    ++macro_classes;
  }
  double micro_denom = 2.0 * tp_total + fp_total + fn_total;
  double micro = micro_denom > 0.0 ? 2.0 * tp_total / micro_denom : 0.0;
  double macro = macro_classes > 0 ? macro_sum / macro_classes : 0.0;
  return {micro, macro};
}

// ---------------------------------------------------------------- splits

namespace {

void split_counts(int total, double train_frac, double val_frac, int& n_train,
                  int& n_val) {
  n_train = static_cast<int>(std::lround(total * train_frac));
  n_val = static_cast<int>(std::lround(total * val_frac));
  n_train = std::min(n_train, total);
  n_val = std::min(n_val, total - n_train);
}

}  // namespace

NodeSplit make_node_split(const LabelSet& labels, double train_frac,
                          double val_frac, std::uint64_t seed) {
  if (train_frac <= 0.0 || val_frac < 0.0 || train_frac + val_frac >= 1.0)
    throw std::invalid_argument("make_node_split: bad fractions");
  NodeSplit split;
  split.seed = seed;
  std::mt19937_64 rng(splitmix64(seed));

  auto take = [&](std::vector<int>& nodes) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    int n_train, n_val;
    split_counts(static_cast<int>(nodes.size()), train_frac, val_frac, n_train,
                 n_val);
    if (n_train == 0 && !nodes.empty()) n_train = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (static_cast<int>(i) < n_train)
        split.train.push_back(nodes[i]);
      else if (static_cast<int>(i) < n_train + n_val)
        split.validation.push_back(nodes[i]);
      else
        split.test.push_back(nodes[i]);
    }
  };

  if (labels.single_label()) {
    std::vector<std::vector<int>> per_class(labels.class_count());
    for (int v : labels.labeled_nodes())
      per_class[labels.classes_of[v][0]].push_back(v);
    for (auto& nodes : per_class) take(nodes);
  } else {
    std::vector<int> nodes = labels.labeled_nodes();
    take(nodes);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

EdgeSplit make_edge_split(const Graph& g, double fraction, std::uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw std::invalid_argument("make_edge_split: fraction must be in (0,1)");
  EdgeSplit split;
  split.seed = seed;
  std::mt19937_64 rng(splitmix64(seed) ^ 0xedbe5ULL);

  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.node_count(); ++u)
    for (int v : g.neighbors(u))
      if (u < v) edges.emplace_back(u, v);
  const int target =
      std::max<int>(1, static_cast<int>(std::lround(fraction * edges.size())));

  std::vector<int> degree(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) degree[v] = g.degree(v);
  std::shuffle(edges.begin(), edges.end(), rng);
  for (const auto& e : edges) {
    if (static_cast<int>(split.removed.size()) == target) break;
    if (degree[e.first] < 2 || degree[e.second] < 2) continue;
    --degree[e.first];
    --degree[e.second];
    split.removed.push_back(e);
  }
  if (static_cast<int>(split.removed.size()) < target)
    throw std::runtime_error(
        "make_edge_split: cannot remove " + std::to_string(target) +
        " edges without isolating a node (degree >= 1 constraint)");

  std::set<std::pair<int, int>> taken(split.removed.begin(),
                                      split.removed.end());
  const int n = g.node_count();
  long attempts = 0;
  while (static_cast<int>(split.non_edges.size()) < target) {
    if (++attempts > 1000L * target + 100000L)
      throw std::runtime_error("make_edge_split: non-edge sampling exhausted");
    int u = uniform_index(rng, n);
    int v = uniform_index(rng, n);
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (g.has_edge(u, v) || taken.count(key)) continue;
    taken.insert(key);
    split.non_edges.push_back(key);
  }
  return split;
}

Graph residual_graph(const Graph& g, const EdgeSplit& split) {
  return g.without_edges(split.removed);
}

std::string split_to_json(const NodeSplit& s) {
  nlohmann::json j{{"kind", "node"},
                   {"seed", s.seed},
                   {"train", s.train},
                   {"validation", s.validation},
                   {"test", s.test}};
  return j.dump();
}

std::string split_to_json(const EdgeSplit& s) {
  auto pairs = [](const std::vector<std::pair<int, int>>& es) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto [u, v] : es) arr.push_back({u, v});
    return arr;
  };
  nlohmann::json j{{"kind", "edge"},
                   {"seed", s.seed},
                   {"removed", pairs(s.removed)},
                   {"non_edges", pairs(s.non_edges)}};
  return j.dump();
}

// ------------------------------------------------- logistic regression

namespace {

double lr_loss_grad(const std::vector<std::vector<double>>& x,
                    const std::vector<double>& y,
                    const std::vector<double>& w, double l2,
                    std::vector<double>* grad) {
  const std::size_t n = x.size();
  const std::size_t d = w.size();
  if (grad) grad->assign(d, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += w[j] * x[i][j];
    double ys = y[i] * s;
    // log(1 + exp(-ys)), overflow safe
    loss += ys > 0 ? std::log1p(std::exp(-ys)) : -ys + std::log1p(std::exp(ys));
    if (grad) {
      double sig = 1.0 / (1.0 + std::exp(ys));
      double coeff = -y[i] * sig / n;
      for (std::size_t j = 0; j < d; ++j) (*grad)[j] += coeff * x[i][j];
    }
  }
  loss /= n;
  for (std::size_t j = 0; j < d; ++j) {
    loss += 0.5 * l2 * w[j] * w[j];
    if (grad) (*grad)[j] += l2 * w[j];
  }
  return loss;
}

}  // namespace

OneVsRestClassifier OneVsRestClassifier::train(
    const EmbeddingMatrix& emb, const LabelSet& labels,
    std::span<const int> train_nodes, double l2, int max_iters,
    std::vector<std::string>* warnings) {
  OneVsRestClassifier clf;
  clf.class_count = labels.class_count();
  clf.dim = emb.m + 1;
  clf.weights.assign(clf.class_count, std::vector<double>(clf.dim, 0.0));

  std::vector<std::vector<double>> x(train_nodes.size());
  for (std::size_t i = 0; i < train_nodes.size(); ++i) {
    auto row = emb.row(train_nodes[i]);
    x[i].assign(row.begin(), row.end());
    x[i].push_back(1.0);  // bias
  }

#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < clf.class_count; ++c) {
    std::vector<double> y(train_nodes.size());
    bool has_positive = false;
    for (std::size_t i = 0; i < train_nodes.size(); ++i) {
      const auto& cls = labels.classes_of[train_nodes[i]];
      bool member = std::binary_search(cls.begin(), cls.end(), c);
      y[i] = member ? 1.0 : -1.0;
      has_positive |= member;
    }
    if (!has_positive) {
      if (warnings) {
#pragma omp critical
        warnings->push_back("class " + labels.class_names[c] +
                            " absent from train split");
      }
      continue;
    }
    std::vector<double>& w = clf.weights[c];
    std::vector<double> grad, trial;
    double loss = lr_loss_grad(x, y, w, l2, &grad);
    for (int iter = 0; iter < max_iters; ++iter) {
      double gnorm = 0.0;
      for (double gj : grad) gnorm += gj * gj;
      if (std::sqrt(gnorm) < 1e-6) break;
      // line halving on the descent step
      double step = 1.0;
      bool moved = false;
      for (int halve = 0; halve < 40; ++halve) {
        trial = w;
        for (std::size_t j = 0; j < w.size(); ++j) trial[j] -= step * grad[j];
        double trial_loss = lr_loss_grad(x, y, trial, l2, nullptr);
        if (trial_loss < loss) {
          w = trial;
          loss = trial_loss;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      lr_loss_grad(x, y, w, l2, &grad);
    }
  }
  return clf;
}

std::vector<double> OneVsRestClassifier::scores(
    std::span<const double> x) const {
  std::vector<double> out(class_count, 0.0);
  for (int c = 0; c < class_count; ++c) {
    double s = weights[c][dim - 1];  // bias
    for (int j = 0; j < dim - 1; ++j) s += weights[c][j] * x[j];
    out[c] = s;
  }
  return out;
}

std::vector<std::vector<int>> OneVsRestClassifier::predict(
    const EmbeddingMatrix& emb, const LabelSet& labels,
    std::span<const int> nodes) const {
  std::vector<std::vector<int>> pred(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    int v = nodes[i];
    auto s = scores(emb.row(v));
    int k = std::max<int>(1, static_cast<int>(labels.classes_of[v].size()));
    std::vector<int> order(class_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&s](int a, int b) { return s[a] > s[b]; });
    pred[i].assign(order.begin(), order.begin() + std::min(k, class_count));
    std::sort(pred[i].begin(), pred[i].end());
  }
  return pred;
}

// ---------------------------------------------------------------- kmeans

namespace {

double sq_dist(std::span<const double> a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

KMeansResult kmeans_once(const EmbeddingMatrix& emb,
                         std::span<const int> nodes, int k,
                         std::mt19937_64& rng, int max_iters) {
  const int n = static_cast<int>(nodes.size());
  const int m = emb.m;
  std::vector<std::vector<double>> centroids(k, std::vector<double>(m, 0.0));

  // k-means++ seeding
  {
    int first = uniform_index(rng, n);
    auto row = emb.row(nodes[first]);
    centroids[0].assign(row.begin(), row.end());
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        double best = sq_dist(emb.row(nodes[i]), centroids[0]);
        for (int j = 1; j < c; ++j)
          best = std::min(best, sq_dist(emb.row(nodes[i]), centroids[j]));
        d2[i] = best;
        total += best;
      }
      int pick;
      if (total <= 0.0) {
        pick = uniform_index(rng, n);
      } else {
        double u = uniform01(rng) * total;
        double cum = 0.0;
        pick = n - 1;
        for (int i = 0; i < n; ++i) {
          cum += d2[i];
          if (u < cum) {
            pick = i;
            break;
          }
        }
      }
      auto prow = emb.row(nodes[pick]);
      centroids[c].assign(prow.begin(), prow.end());
    }
  }

  KMeansResult result;
  result.assignment.assign(n, 0);
  std::vector<double> dists(n);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(emb.row(nodes[i]), centroids[0]);
      for (int c = 1; c < k; ++c) {
        double d = sq_dist(emb.row(nodes[i]), centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      dists[i] = best_d;
      if (result.assignment[i] != best) {
        result.assignment[i] = best;
        changed = true;
      }
    }
    std::vector<int> counts(k, 0);
    for (auto& cvec : centroids) std::fill(cvec.begin(), cvec.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      ++counts[result.assignment[i]];
      auto row = emb.row(nodes[i]);
      for (int j = 0; j < m; ++j) centroids[result.assignment[i]][j] += row[j];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (double& x : centroids[c]) x /= counts[c];
      } else {
        // re-seed the empty cluster from the farthest point
        int far = static_cast<int>(
            std::max_element(dists.begin(), dists.end()) - dists.begin());
        auto row = emb.row(nodes[far]);
        centroids[c].assign(row.begin(), row.end());
        dists[far] = 0.0;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
  }
  result.inertia = 0.0;
  for (int i = 0; i < n; ++i)
    result.inertia += sq_dist(emb.row(nodes[i]), centroids[result.assignment[i]]);
  return result;
}

}  // namespace

KMeansResult kmeans(const EmbeddingMatrix& emb, std::span<const int> nodes,
                    int k, std::uint64_t seed, int restarts, int max_iters) {
  if (k < 1 || nodes.empty())
    throw std::invalid_argument("kmeans: need k >= 1 and points");
  k = std::min<int>(k, static_cast<int>(nodes.size()));
  std::vector<KMeansResult> results(restarts);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    auto rng = walk_rng(seed, r, 0x4b);
    results[r] = kmeans_once(emb, nodes, k, rng, max_iters);
  }
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (results[r].inertia < results[best].inertia) best = r;
  return results[best];
}

// ------------------------------------------------------------ evaluators

std::string TaskReport::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["task"] = task;
  j["reward"] = reward;
  j["metrics"] = metrics;
  if (!precision_curve.empty()) {
    nlohmann::json curve = nlohmann::json::array();
    for (auto [k, p] : precision_curve) curve.push_back({{"k", k}, {"precision", p}});
    j["precision_curve"] = curve;
  }
  j["split_seed"] = split_seed;
  j["seconds"] = seconds;
  j["warnings"] = warnings;
  return j.dump(2);
}

TaskReport eval_classification(const EmbeddingMatrix& emb,
                               const LabelSet& labels, const NodeSplit& split,
                               bool reward_on_test) {
  auto start = std::chrono::steady_clock::now();
  if (split.train.empty())
    throw std::invalid_argument("eval_classification: empty train split");
  TaskReport report;
  report.task = "classification";
  report.split_seed = split.seed;

  auto clf = OneVsRestClassifier::train(emb, labels, split.train, 1e-4, 500,
                                        &report.warnings);
  auto evaluate = [&](std::span<const int> nodes, const std::string& prefix) {
    if (nodes.empty()) return std::pair<double, double>{0.0, 0.0};
    auto pred = clf.predict(emb, labels, nodes);
    std::vector<std::vector<int>> truth(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      truth[i] = labels.classes_of[nodes[i]];
    auto [micro, macro] = micro_macro_f1(pred, truth, labels.class_count());
    report.metrics[prefix + "_micro_f1"] = micro;
    report.metrics[prefix + "_macro_f1"] = macro;
    return std::pair<double, double>{micro, macro};
  };
  auto [val_micro, val_macro] = evaluate(split.validation, "val");
  auto [test_micro, test_macro] = evaluate(split.test, "test");
  (void)val_micro;
  (void)test_micro;
  report.reward = reward_on_test ? test_macro : val_macro;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

TaskReport eval_link_prediction(const EmbeddingMatrix& emb,
                                const EdgeSplit& split, std::vector<int> ks) {
  auto start = std::chrono::steady_clock::now();
  if (split.removed.empty())
    throw std::invalid_argument("eval_link_prediction: no removed edges");
  TaskReport report;
  report.task = "link_prediction";
  report.split_seed = split.seed;

  struct Candidate {
    double score;
    int index;
    bool positive;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(split.removed.size() + split.non_edges.size());
  auto score_pair = [&emb](std::pair<int, int> e) {
    auto a = emb.row(e.first);
    auto b = emb.row(e.second);
    double s = 0.0;
    for (int i = 0; i < emb.m; ++i) s += a[i] * b[i];
    return s;
  };
  int index = 0;
  for (const auto& e : split.removed)
    candidates.push_back({score_pair(e), index++, true});
  for (const auto& e : split.non_edges)
    candidates.push_back({score_pair(e), index++, false});
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.index < b.index;  // deterministic tie-break
            });

  std::sort(ks.begin(), ks.end());
  const int total = static_cast<int>(candidates.size());
  int hits = 0, rank = 0;
  for (int k : ks) {
    int kc = k;
    if (kc > total) {
      report.warnings.push_back("precision@" + std::to_string(k) +
                                " clamped to " + std::to_string(total));
      kc = total;
    }
    while (rank < kc) hits += candidates[rank++].positive ? 1 : 0;
    double precision = static_cast<double>(hits) / kc;
    report.precision_curve.emplace_back(k, precision);
    report.metrics["precision_at_" + std::to_string(k)] = precision;
    report.reward = precision;  // reward = precision at the largest k
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

TaskReport eval_clustering(const EmbeddingMatrix& emb, const LabelSet& labels,
                           int k_clusters, std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  if (k_clusters < 2)
    throw std::invalid_argument("eval_clustering: k_clusters must be >= 2");
  if (!labels.single_label())
    throw std::invalid_argument("eval_clustering: requires single-label nodes");
  TaskReport report;
  report.task = "clustering";
  report.split_seed = seed;

  std::vector<int> nodes = labels.labeled_nodes();
  auto result = kmeans(emb, nodes, k_clusters, seed);
  std::vector<int> truth(nodes.size());
  auto flat = labels.flat();
  for (std::size_t i = 0; i < nodes.size(); ++i) truth[i] = flat[nodes[i]];

  report.metrics["purity"] = purity(result.assignment, truth);
  report.metrics["nmi"] = nmi(result.assignment, truth);
  report.reward = report.metrics["nmi"];
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace mlane
