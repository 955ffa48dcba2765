#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlane {

// Undirected simple graph with dense node ids and an external-label map.
class Graph {
public:
  static Graph from_edge_list(std::string_view text);
  static Graph from_edge_list_file(const std::string& path);
  // Builds directly from dense-id edges; labels default to decimal ids.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  std::int64_t edge_count() const { return edge_count_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool has_edge(int u, int v) const;

  const std::string& label(int v) const { return labels_[v]; }
  // Returns -1 when the label is unknown.
  int id_of(const std::string& label) const;

  int dropped_self_loops() const { return dropped_self_loops_; }
  int dropped_duplicates() const { return dropped_duplicates_; }

  std::string to_edge_list() const;

  // Copy with the given undirected edges removed; labels preserved.
  Graph without_edges(const std::vector<std::pair<int, int>>& edges) const;

private:
  Graph() = default;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> id_of_;
  std::int64_t edge_count_ = 0;
  int dropped_self_loops_ = 0;
  int dropped_duplicates_ = 0;
};

inline constexpr int kUnreached = -1;

// Hop distances from one source node, plus the largest finite distance.
struct DistanceField {
  int source = 0;
  std::vector<int> dist;   // kUnreached where not connected to source
  int max_dist = 0;

  bool reachable(int v) const { return dist[v] != kUnreached; }
};

DistanceField bfs_distances(const Graph& g, int source);

// Neighbors of a node split by distance delta relative to the walk source.
struct NeighborPartition {
  std::vector<int> forward;   // dist d+1
  std::vector<int> same;      // dist d
  std::vector<int> backward;  // dist d-1
};

NeighborPartition partition_neighbors(const Graph& g, const DistanceField& field,
                                      int current);

// Lazily computed, memoized per-source BFS fields. Safe for concurrent
// requests; a duplicate BFS under race produces an identical field.
class DistanceCache {
public:
  explicit DistanceCache(const Graph& g) : graph_(g), fields_(g.node_count()) {}

  const DistanceField& get(int source);
  void clear();
  std::int64_t hits() const { return hits_; }
  std::int64_t misses() const { return misses_; }

private:
  const Graph& graph_;
  std::vector<std::shared_ptr<const DistanceField>> fields_;
  std::mutex mutex_;
  std::int64_t hits_ = 0;
  std::int64_t misses_ = 0;
};

}  // namespace mlane
