// Compares the serial reference kernels against the OpenMP paths on a
// synthetic graph: corpus sampling and one SkipGram pass.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mlane/meta.hpp"
#include "mlane/rng.hpp"

using namespace mlane;
using Clock = std::chrono::steady_clock;

namespace {

Graph random_graph(int n, double avg_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  // ring for connectivity plus random chords
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  long extra = static_cast<long>(n * (avg_degree - 2.0) / 2.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (long i = 0; i < extra; ++i) edges.emplace_back(pick(rng), pick(rng));
  return Graph::from_edges(n, edges);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 2000;
  int walks = argc > 2 ? std::atoi(argv[2]) : 10;
  int length = argc > 3 ? std::atoi(argv[3]) : 40;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif
  Graph g = random_graph(n, 8.0, 7);
  std::printf("graph: n=%d e=%lld, K=%d L=%d\n", g.node_count(),
              static_cast<long long>(g.edge_count()), walks, length);

  PolicyParams theta = PolicyParams::random_init(n, 42);

  DistanceCache cache_serial(g);
  auto t0 = Clock::now();
  ContextCorpus serial =
      sample_corpus_serial(g, cache_serial, theta, walks, length, 99);
  double t_serial = seconds_since(t0);

  DistanceCache cache_parallel(g);
  t0 = Clock::now();
  ContextCorpus parallel =
      sample_corpus(g, cache_parallel, theta, walks, length, 99, true);
  double t_parallel = seconds_since(t0);

  bool identical = serial.sequences.size() == parallel.sequences.size();
  for (std::size_t i = 0; identical && i < serial.sequences.size(); ++i)
    identical = serial.sequences[i].nodes == parallel.sequences[i].nodes;
  std::printf("corpus   serial %.3fs | omp %.3fs | speedup %.2fx | identical: %s\n",
              t_serial, t_parallel, t_serial / t_parallel,
              identical ? "yes" : "NO");

  SkipGramConfig sg;
  sg.window = 5;
  sg.dim = 64;
  sg.epochs = 1;
  sg.seed = 3;
  t0 = Clock::now();
  train_skipgram(serial, n, sg);
  double t_sg_serial = seconds_since(t0);
  sg.parallel = true;
  t0 = Clock::now();
  train_skipgram(serial, n, sg);
  double t_sg_parallel = seconds_since(t0);
  std::printf("skipgram serial %.3fs | omp %.3fs | speedup %.2fx\n",
              t_sg_serial, t_sg_parallel, t_sg_serial / t_sg_parallel);
  return 0;
}
