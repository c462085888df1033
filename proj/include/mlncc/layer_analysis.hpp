#ifndef MLNCC_LAYER_ANALYSIS_HPP
#define MLNCC_LAYER_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlncc/errors.hpp"
#include "mlncc/graph.hpp"
#include "mlncc/numeric.hpp"
#include "mlncc/parallel.hpp"
#include "mlncc/summary.hpp"

namespace mlncc {

struct DistanceSum {
  std::uint64_t sum = 0;                 // reachable_dist_sum + (n - reachable_count) * n
  std::uint64_t reachable_count = 0;     // includes the source
  std::uint64_t reachable_dist_sum = 0;  // over reachable vertices other than the source
};

/// Wasserman-Faust closeness from one source's BFS totals. With k reachable
/// vertices (source included) at total distance S:
///   ((k-1)/(n-1)) * ((k-1)/S),  and 0 when n <= 1 or k <= 1.
/// When k == n the value is computed as (n-1)/S directly.
inline double wf_closeness_from(std::uint64_t n, std::uint64_t reachable_count,
                                std::uint64_t reachable_dist_sum) {
  if (n <= 1 || reachable_count <= 1) return 0.0;
  const auto reached = static_cast<double>(reachable_count - 1);
  if (reachable_count == n) return reached / static_cast<double>(reachable_dist_sum);
  return (reached / static_cast<double>(n - 1)) * (reached / static_cast<double>(reachable_dist_sum));
}

/// Reusable single-source BFS state. Visited marks are epoch stamps, so
/// running from many sources never clears or reallocates the arrays.
class BfsWorkspace {
 public:
  explicit BfsWorkspace(vertex_t n) : queue_(n), stamp_(n, 0) {}

  DistanceSum run(const UndirectedGraph& g, vertex_t source) {
    const vertex_t n = g.num_vertices();
    if (source >= n) {
      throw BoundsError("BFS source " + std::to_string(source) + " outside [0," + std::to_string(n) + ")");
    }
    if (queue_.size() != n) {
      queue_.assign(n, 0);
      stamp_.assign(n, 0);
      epoch_ = 0;
    }
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }

    std::size_t head = 0;
    std::size_t tail = 0;
    std::size_t level_end = 1;
    std::uint64_t depth = 0;
    std::uint64_t dist_sum = 0;
    queue_[tail++] = source;
    stamp_[source] = epoch_;
    while (head < tail) {
      if (head == level_end) {
        ++depth;
        level_end = tail;
      }
      const vertex_t u = queue_[head++];
      dist_sum += depth;
      for (vertex_t v : g.neighbors_unchecked(u)) {
        if (stamp_[v] != epoch_) {
          stamp_[v] = epoch_;
          queue_[tail++] = v;
        }
      }
    }

    DistanceSum out;
    out.reachable_count = tail;
    out.reachable_dist_sum = dist_sum;
    out.sum = dist_sum + (std::uint64_t{n} - tail) * std::uint64_t{n};
    return out;
  }

 private:
  std::vector<vertex_t> queue_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

inline DistanceSum bfs_distance_sum(const UndirectedGraph& g, vertex_t source) {
  BfsWorkspace ws(g.num_vertices());
  return ws.run(g, source);
}

inline double wf_closeness(const UndirectedGraph& g, vertex_t source) {
  auto d = bfs_distance_sum(g, source);
  return wf_closeness_from(g.num_vertices(), d.reachable_count, d.reachable_dist_sum);
}

/// Per-layer analysis: one BFS per source, then the above-average hub set.
/// Results are independent of `threads`; every source writes its own slot
/// and the mean is reduced sequentially afterwards.
inline LayerSummary analyze_layer(const UndirectedGraph& g, unsigned threads = 1) {
  const vertex_t n = g.num_vertices();
  LayerSummary s;
  s.n = n;
  s.deg.resize(n);
  s.sum_dist.resize(n);
  s.closeness.resize(n);

  std::vector<std::optional<BfsWorkspace>> scratch(std::max(1u, threads));
  parallel_for(n, threads, 64, [&](unsigned worker, std::size_t begin, std::size_t end) {
    auto& ws = scratch[worker];
    if (!ws) ws.emplace(n);
    for (std::size_t u = begin; u < end; ++u) {
      const auto src = static_cast<vertex_t>(u);
      auto d = ws->run(g, src);
      s.deg[u] = static_cast<std::uint32_t>(g.degree(src));
      s.sum_dist[u] = d.sum;
      s.closeness[u] = wf_closeness_from(n, d.reachable_count, d.reachable_dist_sum);
    }
  });

  s.avg_closeness = stable_mean(s.closeness);
  for (vertex_t u = 0; u < n; ++u) {
    if (s.closeness[u] > s.avg_closeness) {
      s.cc_nodes.push_back(u);
      auto nb = g.neighbors(u);
      s.cc_neighborhoods.emplace(u, std::vector<vertex_t>(nb.begin(), nb.end()));
    }
  }
  return s;
}

}  // namespace mlncc

#endif  // MLNCC_LAYER_ANALYSIS_HPP
