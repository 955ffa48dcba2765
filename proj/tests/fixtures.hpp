#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "mlane/graph.hpp"
#include "mlane/tasks.hpp"

namespace fixtures {

using mlane::Graph;

inline Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, edges);
}

// center 0, leaves 1..n-1
inline Graph star_graph(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, edges);
}

// Two disjoint cliques of `size`, nodes [0,size) and [size,2*size).
inline Graph two_cliques(int size) {
  std::vector<std::pair<int, int>> edges;
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j)
        edges.emplace_back(block * size + i, block * size + j);
  return Graph::from_edges(2 * size, edges);
}

inline Graph barbell(int clique_size, int bridge_len) {
  std::vector<std::pair<int, int>> edges;
  int n = 2 * clique_size + bridge_len;
  for (int i = 0; i < clique_size; ++i)
    for (int j = i + 1; j < clique_size; ++j) {
      edges.emplace_back(i, j);
      edges.emplace_back(clique_size + bridge_len + i,
                         clique_size + bridge_len + j);
    }
  int prev = 0;
  for (int b = 0; b < bridge_len; ++b) {
    edges.emplace_back(prev, clique_size + b);
    prev = clique_size + b;
  }
  edges.emplace_back(prev, clique_size + bridge_len);
  return Graph::from_edges(n, edges);
}

// Two-community stochastic block model; guarantees no isolated node by
// chaining each community.
inline Graph sbm2(int per_block, double p_in, double p_out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  int n = 2 * per_block;
  auto block = [per_block](int v) { return v / per_block; };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < (block(i) == block(j) ? p_in : p_out))
        edges.emplace_back(i, j);
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i + 1 < per_block; ++i)
      edges.emplace_back(b * per_block + i, b * per_block + i + 1);
  return Graph::from_edges(n, edges);
}

inline Graph random_connected(int n, double extra_edge_prob,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v)
    edges.emplace_back(v, std::uniform_int_distribution<int>(0, v - 1)(rng));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < extra_edge_prob) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

// Floyd-Warshall oracle, independent of the BFS implementation.
inline std::vector<std::vector<int>> all_pairs_shortest(const Graph& g) {
  const int n = g.node_count();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u)) d[u][v] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d[i][j] >= inf) d[i][j] = mlane::kUnreached;
  return d;
}

class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("mlane_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(file(name));
    out << content;
  }

private:
  std::filesystem::path path_;
};

}  // namespace fixtures
