#ifndef MLNCC_EVAL_HPP
#define MLNCC_EVAL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlncc/composition.hpp"
#include "mlncc/errors.hpp"
#include "mlncc/graph.hpp"
#include "mlncc/layer_analysis.hpp"
#include "mlncc/numeric.hpp"

namespace mlncc {

// ---------------------------------------------------------------------------
// Set metrics. Sets are sorted, duplicate-free vertex lists.
// ---------------------------------------------------------------------------

inline std::size_t intersection_size(std::span<const vertex_t> a, std::span<const vertex_t> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

/// |a ∩ b| / |a ∪ b|; two empty sets agree perfectly (1.0).
inline double jaccard(std::span<const vertex_t> a, std::span<const vertex_t> b) {
  const auto common = intersection_size(a, b);
  const auto uni = a.size() + b.size() - common;
  return uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni);
}

struct PrF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline PrF1 prf1(std::span<const vertex_t> est, std::span<const vertex_t> gt) {
  const auto common = static_cast<double>(intersection_size(est, gt));
  PrF1 r;
  if (est.empty()) {
    r.precision = gt.empty() ? 1.0 : 0.0;
  } else {
    r.precision = common / static_cast<double>(est.size());
  }
  r.recall = gt.empty() ? 1.0 : common / static_cast<double>(gt.size());
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

struct BruteForceCloseness {
  std::vector<std::vector<std::uint32_t>> dist;  // kUnreachable when no path
  std::vector<std::uint64_t> sum_dist;
  std::vector<double> closeness;

  static constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();
};

inline constexpr vertex_t kBruteForceMaxN = 2048;

/// Floyd-Warshall all-pairs distances, then the closeness formulas applied
/// literally. Independent of the BFS path; meant for small graphs only.
inline BruteForceCloseness brute_force_closeness(const UndirectedGraph& g) {
  const vertex_t n = g.num_vertices();
  if (n > kBruteForceMaxN) {
    throw ParameterError("brute-force closeness limited to n <= " + std::to_string(kBruteForceMaxN));
  }
  constexpr auto inf = BruteForceCloseness::kUnreachable;
  BruteForceCloseness out;
  auto& d = out.dist;
  d.assign(n, std::vector<std::uint32_t>(n, inf));
  for (vertex_t u = 0; u < n; ++u) d[u][u] = 0;
  for (auto [a, b] : g.edges()) d[a][b] = d[b][a] = 1;
  for (vertex_t k = 0; k < n; ++k) {
    for (vertex_t i = 0; i < n; ++i) {
      if (d[i][k] == inf) continue;
      for (vertex_t j = 0; j < n; ++j) {
        if (d[k][j] == inf) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  out.sum_dist.assign(n, 0);
  out.closeness.assign(n, 0.0);
  for (vertex_t u = 0; u < n; ++u) {
    std::uint64_t reachable_sum = 0;
    std::uint64_t others_reached = 0;
    for (vertex_t v = 0; v < n; ++v) {
      if (v == u) continue;
      if (d[u][v] == inf) {
        out.sum_dist[u] += n;
      } else {
        out.sum_dist[u] += d[u][v];
        reachable_sum += d[u][v];
        ++others_reached;
      }
    }
    if (n > 1 && others_reached > 0) {
      const double r = static_cast<double>(others_reached);
      out.closeness[u] = others_reached == n - 1
                             ? static_cast<double>(n - 1) / static_cast<double>(reachable_sum)
                             : (r / (n - 1)) * (r / static_cast<double>(reachable_sum));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

struct GroundTruth {
  std::vector<vertex_t> cc_nodes;
  LayerSummary summary;  // of the aggregated graph
  std::size_t aggregate_edges = 0;
  double t_aggregate = 0.0;
  double t_cc = 0.0;
};

inline UndirectedGraph and_aggregate_layers(const HoMln& mln, std::span<const std::size_t> layers) {
  if (layers.empty()) throw ParameterError("no layers selected");
  UndirectedGraph acc = mln.layer(layers.front());
  for (auto i : layers.subspan(1)) acc = and_aggregate(acc, mln.layer(i));
  return acc;
}

/// CC nodes of the exact AND aggregate of the selected layers, computed by
/// the same per-layer analysis routine.
inline GroundTruth ground_truth(const HoMln& mln, std::span<const std::size_t> layers, unsigned threads = 1) {
  if (layers.size() < 2) throw ParameterError("ground truth needs at least two layers");
  for (auto i : layers) mln.layer(i);
  GroundTruth gt;
  Stopwatch agg_clock;
  UndirectedGraph g = and_aggregate_layers(mln, layers);
  gt.t_aggregate = agg_clock.seconds();
  gt.aggregate_edges = g.num_edges();
  Stopwatch cc_clock;
  gt.summary = analyze_layer(g, threads);
  gt.t_cc = cc_clock.seconds();
  gt.cc_nodes = gt.summary.cc_nodes;
  return gt;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Timing of one decoupled run against its ground truth. Totals are derived
/// from the parts on demand.
struct TimingBreakdown {
  std::vector<double> t_psi;
  double t_theta = 0.0;
  double t_gt_aggregate = 0.0;
  double t_gt_cc = 0.0;

  double max_psi() const { return t_psi.empty() ? 0.0 : *std::max_element(t_psi.begin(), t_psi.end()); }
  double min_psi() const { return t_psi.empty() ? 0.0 : *std::min_element(t_psi.begin(), t_psi.end()); }
  double t_decoupled() const { return max_psi() + t_theta; }
  double t_gt() const { return t_gt_aggregate + t_gt_cc; }
  // Worst-case comparison: composition time relative to the fastest layer analysis.
  double theta_to_min_psi() const { return min_psi() > 0.0 ? t_theta / min_psi() : 0.0; }
};

struct EvalReport {
  Method method = Method::naive;
  double jaccard = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t est_size = 0;
  std::size_t gt_size = 0;
  std::size_t common = 0;
  TimingBreakdown timing;
};

inline EvalReport evaluate(Method method, std::span<const vertex_t> est, std::span<const vertex_t> gt,
                           TimingBreakdown timing = {}) {
  EvalReport r;
  r.method = method;
  r.jaccard = jaccard(est, gt);
  auto p = prf1(est, gt);
  r.precision = p.precision;
  r.recall = p.recall;
  r.f1 = p.f1;
  r.est_size = est.size();
  r.gt_size = gt.size();
  r.common = intersection_size(est, gt);
  r.timing = std::move(timing);
  return r;
}

inline nlohmann::ordered_json to_json(const TimingBreakdown& t) {
  nlohmann::ordered_json j;
  j["t_psi"] = t.t_psi;
  j["t_theta"] = t.t_theta;
  j["t_decoupled"] = t.t_decoupled();
  j["t_gt_aggregate"] = t.t_gt_aggregate;
  j["t_gt_cc"] = t.t_gt_cc;
  j["t_gt"] = t.t_gt();
  j["theta_to_min_psi"] = t.theta_to_min_psi();
  return j;
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["method"] = std::string(to_string(r.method));
  j["jaccard"] = r.jaccard;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["sizes"] = {{"est", r.est_size}, {"gt", r.gt_size}, {"common", r.common}};
  j["timing"] = to_json(r.timing);
  return j;
}

inline constexpr const char* kReportCsvHeader =
    "instance,method,jaccard,precision,recall,f1,est,gt,common,"
    "t_psi_min,t_psi_max,t_theta,t_decoupled,t_gt_aggregate,t_gt_cc,t_gt,theta_to_min_psi";

inline void write_csv_row(std::ostream& out, const std::string& instance, const EvalReport& r) {
  const auto& t = r.timing;
  auto old = out.precision(17);
  out << instance << ',' << to_string(r.method) << ',' << r.jaccard << ',' << r.precision << ',' << r.recall
      << ',' << r.f1 << ',' << r.est_size << ',' << r.gt_size << ',' << r.common << ',' << t.min_psi() << ','
      << t.max_psi() << ',' << t.t_theta << ',' << t.t_decoupled() << ',' << t.t_gt_aggregate << ','
      << t.t_gt_cc << ',' << t.t_gt() << ',' << t.theta_to_min_psi() << '\n';
  out.precision(old);
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

struct ExperimentOptions {
  std::vector<Method> methods{Method::naive, Method::cc1, Method::cc2};
  Selection selection = Selection::above_average();
  std::vector<std::size_t> layers{0, 1};
  unsigned threads = 1;
  bool warmup = true;  // run each composition once untimed before timing it
};

struct Experiment {
  std::vector<LayerSummary> summaries;
  std::vector<double> t_psi;
  GroundTruth gt;
  std::vector<CompositionResult> results;
  std::vector<EvalReport> reports;
};

/// Per-layer analysis with independently recorded wall times. With enough
/// threads the layers run concurrently, sharing the thread budget.
inline void analyze_layers(const HoMln& mln, std::span<const std::size_t> layers, unsigned threads,
                           std::vector<LayerSummary>& summaries, std::vector<double>& times) {
  for (auto i : layers) mln.layer(i);
  summaries.assign(layers.size(), {});
  times.assign(layers.size(), 0.0);
  threads = std::max(1u, threads);
  auto run = [&](std::size_t slot, unsigned inner) {
    Stopwatch clock;
    summaries[slot] = analyze_layer(mln.layer(layers[slot]), inner);
    times[slot] = clock.seconds();
  };
  if (threads >= layers.size() && layers.size() > 1) {
    const auto inner = static_cast<unsigned>(threads / layers.size());
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex m;
    for (std::size_t slot = 0; slot < layers.size(); ++slot) {
      pool.emplace_back([&, slot] {
        try {
          run(slot, inner);
        } catch (...) {
          std::lock_guard lock(m);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t slot = 0; slot < layers.size(); ++slot) run(slot, threads);
  }
}

inline Experiment run_experiment(const HoMln& mln, const ExperimentOptions& opt = {}) {
  if (opt.layers.size() < 2) throw ParameterError("an experiment needs at least two layers");
  Experiment ex;
  analyze_layers(mln, opt.layers, opt.threads, ex.summaries, ex.t_psi);
  ex.gt = ground_truth(mln, opt.layers, opt.threads);

  for (Method method : opt.methods) {
    if (opt.warmup) compose_multi(ex.summaries, method, opt.selection);
    auto result = compose_multi(ex.summaries, method, opt.selection);
    TimingBreakdown timing;
    timing.t_psi = ex.t_psi;
    timing.t_theta = result.elapsed;
    timing.t_gt_aggregate = ex.gt.t_aggregate;
    timing.t_gt_cc = ex.gt.t_cc;
    ex.reports.push_back(evaluate(method, result.est_cc_nodes, ex.gt.cc_nodes, std::move(timing)));
    ex.results.push_back(std::move(result));
  }
  return ex;
}

}  // namespace mlncc

#endif  // MLNCC_EVAL_HPP
