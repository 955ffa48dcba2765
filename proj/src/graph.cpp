#include "mlane/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mlane {

Graph Graph::from_edge_list(std::string_view text) {
  Graph g;
  std::set<std::pair<int, int>> seen;
  auto intern = [&g](const std::string& label) {
    auto it = g.id_of_.find(label);
    if (it != g.id_of_.end()) return it->second;
    int id = static_cast<int>(g.labels_.size());
    g.id_of_.emplace(label, id);
    g.labels_.push_back(label);
    g.adjacency_.emplace_back();
    return id;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool saw_edge_line = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (a[0] == '#') continue;
    if (!(ls >> b) || (ls >> extra)) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) +
                               ": expected two tokens: " + line);
    }
    saw_edge_line = true;
    int u = intern(a);
    int v = intern(b);
    if (u == v) {
      ++g.dropped_self_loops_;
      continue;
    }
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) {
      ++g.dropped_duplicates_;
      continue;
    }
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
    ++g.edge_count_;
  }
  if (!saw_edge_line) throw std::runtime_error("edge list is empty");
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

Graph Graph::from_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_edge_list(buf.str());
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  g.adjacency_.resize(n);
  g.labels_.reserve(n);
  for (int v = 0; v < n; ++v) {
    g.labels_.push_back(std::to_string(v));
    g.id_of_.emplace(g.labels_.back(), v);
  }
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::out_of_range("edge endpoint out of range");
    if (u == v) {
      ++g.dropped_self_loops_;
      continue;
    }
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) {
      ++g.dropped_duplicates_;
      continue;
    }
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
    ++g.edge_count_;
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

int Graph::id_of(const std::string& label) const {
  auto it = id_of_.find(label);
  return it == id_of_.end() ? -1 : it->second;
}

std::string Graph::to_edge_list() const {
  std::ostringstream out;
  for (int u = 0; u < node_count(); ++u)
    for (int v : adjacency_[u])
      if (u < v) out << labels_[u] << ' ' << labels_[v] << '\n';
  return out.str();
}

Graph Graph::without_edges(const std::vector<std::pair<int, int>>& edges) const {
  std::set<std::pair<int, int>> drop;
  for (auto [u, v] : edges) drop.insert(std::minmax(u, v));
  Graph g;
  g.labels_ = labels_;
  g.id_of_ = id_of_;
  g.adjacency_.resize(adjacency_.size());
  for (int u = 0; u < node_count(); ++u) {
    for (int v : adjacency_[u]) {
      if (u < v && !drop.count({u, v})) {
        g.adjacency_[u].push_back(v);
        g.adjacency_[v].push_back(u);
        ++g.edge_count_;
      }
    }
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

DistanceField bfs_distances(const Graph& g, int source) {
  if (source < 0 || source >= g.node_count())
    throw std::out_of_range("bfs source out of range");
  DistanceField field;
  field.source = source;
  field.dist.assign(g.node_count(), kUnreached);
  field.dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors(u)) {
      if (field.dist[v] == kUnreached) {
        field.dist[v] = field.dist[u] + 1;
        field.max_dist = std::max(field.max_dist, field.dist[v]);
        queue.push_back(v);
      }
    }
  }
  return field;
}

NeighborPartition partition_neighbors(const Graph& g, const DistanceField& field,
                                      int current) {
  if (!field.reachable(current))
    throw std::invalid_argument("partition_neighbors: node unreachable from source");
  NeighborPartition part;
  int d = field.dist[current];
  for (int v : g.neighbors(current)) {
    int dv = field.dist[v];
    if (dv == d + 1)
      part.forward.push_back(v);
    else if (dv == d)
      part.same.push_back(v);
    else
      part.backward.push_back(v);  // BFS invariant: only d-1 remains
  }
  return part;
}

const DistanceField& DistanceCache::get(int source) {
  {
    std::lock_guard lock(mutex_);
    if (fields_[source]) {
      ++hits_;
      return *fields_[source];
    }
  }
  auto field = std::make_shared<const DistanceField>(bfs_distances(graph_, source));
  std::lock_guard lock(mutex_);
  if (!fields_[source]) {
    fields_[source] = std::move(field);
    ++misses_;
  } else {
    ++hits_;
  }
  return *fields_[source];
}

void DistanceCache::clear() {
  std::lock_guard lock(mutex_);
  for (auto& f : fields_) f.reset();
}

}  // namespace mlane
