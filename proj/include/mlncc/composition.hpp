#ifndef MLNCC_COMPOSITION_HPP
#define MLNCC_COMPOSITION_HPP

// Composition reads LayerSummary values only. This header must not depend
// on graph.hpp; the decoupling test checks that.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlncc/errors.hpp"
#include "mlncc/numeric.hpp"
#include "mlncc/summary.hpp"
#include "mlncc/types.hpp"

namespace mlncc {

enum class Method { naive, cc1, cc2 };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::naive: return "naive";
    case Method::cc1: return "cc1";
    case Method::cc2: return "cc2";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "naive") return Method::naive;
  if (s == "cc1") return Method::cc1;
  if (s == "cc2") return Method::cc2;
  throw ParameterError("unknown composition method '" + std::string(s) + "'");
}

struct Selection {
  enum class Kind { above_average, top_k };
  Kind kind = Kind::above_average;
  vertex_t k = 0;

  static Selection above_average() { return {}; }
  static Selection top_k(vertex_t k) { return {Kind::top_k, k}; }

  friend bool operator==(const Selection&, const Selection&) = default;
};

inline std::string_view to_string(Selection::Kind k) {
  return k == Selection::Kind::top_k ? "top-k" : "above-average";
}

struct CompositionResult {
  Method method = Method::naive;
  vertex_t n = 0;
  std::vector<vertex_t> est_cc_nodes;
  std::optional<std::vector<double>> est_scores;  // cc2 only
  std::optional<Selection> selection;             // cc2 only
  double elapsed = 0.0;                           // seconds
};

/// Degree-distance ratios of every vertex in both layers, each layer's
/// distance sum divided by the smaller of the two degrees. A vertex isolated
/// in either layer gets +inf and is left out of the layer means.
struct DegDistProfile {
  std::vector<double> ratio_x;
  std::vector<double> ratio_y;
  double avg_x = 0.0;
  double avg_y = 0.0;
  double avg_ratio_combined = 0.0;
};

namespace detail {

inline void require_same_n(const LayerSummary& a, const LayerSummary& b) {
  if (a.n != b.n) {
    throw DimensionError("summaries disagree on vertex count: " + std::to_string(a.n) + " vs " +
                         std::to_string(b.n));
  }
}

inline std::vector<vertex_t> intersect(std::span<const vertex_t> a, std::span<const vertex_t> b) {
  std::vector<vertex_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline double finite_mean(const std::vector<double>& values, bool& any) {
  std::vector<double> finite;
  finite.reserve(values.size());
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  any = !finite.empty();
  return stable_mean(finite);
}

inline const std::vector<vertex_t>& neighborhood(const LayerSummary& s, vertex_t u, const char* layer) {
  auto it = s.cc_neighborhoods.find(u);
  if (it == s.cc_neighborhoods.end()) {
    throw ContractError(std::string("layer ") + layer + " summary lacks the neighborhood of CC node " +
                        std::to_string(u));
  }
  return it->second;
}

}  // namespace detail

inline DegDistProfile deg_dist_profile(const LayerSummary& sx, const LayerSummary& sy) {
  detail::require_same_n(sx, sy);
  constexpr double inf = std::numeric_limits<double>::infinity();
  DegDistProfile p;
  p.ratio_x.resize(sx.n);
  p.ratio_y.resize(sx.n);
  for (vertex_t u = 0; u < sx.n; ++u) {
    const std::uint32_t d = std::min(sx.deg[u], sy.deg[u]);
    if (d == 0) {
      p.ratio_x[u] = p.ratio_y[u] = inf;
    } else {
      p.ratio_x[u] = static_cast<double>(sx.sum_dist[u]) / d;
      p.ratio_y[u] = static_cast<double>(sy.sum_dist[u]) / d;
    }
  }
  bool any_x = false;
  bool any_y = false;
  p.avg_x = detail::finite_mean(p.ratio_x, any_x);
  p.avg_y = detail::finite_mean(p.ratio_y, any_y);
  if (any_x && any_y) {
    p.avg_ratio_combined = std::max(p.avg_x, p.avg_y);
  } else if (any_x) {
    p.avg_ratio_combined = p.avg_x;
  } else if (any_y) {
    p.avg_ratio_combined = p.avg_y;
  }
  return p;
}

/// Baseline: hubs common to both layers.
inline CompositionResult compose_naive(const LayerSummary& sx, const LayerSummary& sy) {
  Stopwatch clock;
  detail::require_same_n(sx, sy);
  CompositionResult r;
  r.method = Method::naive;
  r.n = sx.n;
  r.est_cc_nodes = detail::intersect(sx.cc_nodes, sy.cc_nodes);
  r.elapsed = clock.seconds();
  return r;
}

/// Neighbourhood-overlap heuristic. Every hub common to both layers is kept;
/// in addition, when a common hub has at least two one-hop neighbours that
/// are "central" in both layers (degree-distance ratio below the combined
/// average), those neighbours are promoted too.
inline CompositionResult compose_cc1(const LayerSummary& sx, const LayerSummary& sy) {
  Stopwatch clock;
  detail::require_same_n(sx, sy);
  for (vertex_t u : sx.cc_nodes) detail::neighborhood(sx, u, "x");
  for (vertex_t u : sy.cc_nodes) detail::neighborhood(sy, u, "y");

  const DegDistProfile profile = deg_dist_profile(sx, sy);
  const double threshold = profile.avg_ratio_combined;
  auto central = [threshold](const std::vector<vertex_t>& nbd, const std::vector<double>& ratio) {
    std::vector<vertex_t> out;
    for (vertex_t v : nbd) {
      if (ratio[v] < threshold) out.push_back(v);
    }
    return out;
  };

  std::vector<vertex_t> est;
  for (vertex_t u : detail::intersect(sx.cc_nodes, sy.cc_nodes)) {
    auto cand_x = central(detail::neighborhood(sx, u, "x"), profile.ratio_x);
    auto cand_y = central(detail::neighborhood(sy, u, "y"), profile.ratio_y);
    auto overlap = detail::intersect(cand_x, cand_y);
    if (overlap.size() > 1) est.insert(est.end(), overlap.begin(), overlap.end());
    est.push_back(u);
  }
  std::sort(est.begin(), est.end());
  est.erase(std::unique(est.begin(), est.end()), est.end());

  CompositionResult r;
  r.method = Method::cc1;
  r.n = sx.n;
  r.est_cc_nodes = std::move(est);
  r.elapsed = clock.seconds();
  return r;
}

/// Max-over-layers distance-sum estimate for the AND graph: removing edges
/// can only lengthen paths, so each vertex's sum there is at least its
/// largest per-layer sum.
inline std::vector<std::uint64_t> estimate_sum_dist(std::span<const LayerSummary> summaries) {
  if (summaries.empty()) throw ParameterError("no summaries to compose");
  for (const auto& s : summaries) detail::require_same_n(summaries.front(), s);
  std::vector<std::uint64_t> est(summaries.front().sum_dist);
  for (const auto& s : summaries.subspan(1)) {
    for (vertex_t u = 0; u < s.n; ++u) est[u] = std::max(est[u], s.sum_dist[u]);
  }
  return est;
}

/// Closeness (n-1)/est_sum applied to the estimated sums; 0 when est_sum is 0.
inline std::vector<double> estimated_closeness(std::span<const std::uint64_t> est_sum) {
  const auto n = est_sum.size();
  std::vector<double> scores(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    if (est_sum[u] > 0) scores[u] = static_cast<double>(n - 1) / static_cast<double>(est_sum[u]);
  }
  return scores;
}

/// Hub selection over estimated scores. Top-k ranks by ascending estimated
/// sum (equivalently descending score), ties to the lower vertex id.
inline std::vector<vertex_t> select_hubs(std::span<const std::uint64_t> est_sum,
                                         std::span<const double> scores, const Selection& sel) {
  const auto n = static_cast<vertex_t>(scores.size());
  std::vector<vertex_t> out;
  if (sel.kind == Selection::Kind::above_average) {
    const double avg = stable_mean(scores);
    for (vertex_t u = 0; u < n; ++u) {
      if (scores[u] > avg) out.push_back(u);
    }
    return out;
  }
  if (sel.k < 1 || sel.k > n) {
    throw ParameterError("top-k needs 1 <= k <= n (k=" + std::to_string(sel.k) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<vertex_t> order(n);
  for (vertex_t u = 0; u < n; ++u) order[u] = u;
  std::partial_sort(order.begin(), order.begin() + sel.k, order.end(), [&](vertex_t a, vertex_t b) {
    bool a_zero = est_sum[a] == 0;
    bool b_zero = est_sum[b] == 0;
    if (a_zero != b_zero) return b_zero;  // zero sum scores 0: ranks last
    return est_sum[a] != est_sum[b] ? est_sum[a] < est_sum[b] : a < b;
  });
  out.assign(order.begin(), order.begin() + sel.k);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline CompositionResult cc2_from(std::vector<std::uint64_t> est_sum, vertex_t n, const Selection& sel) {
  auto scores = estimated_closeness(est_sum);
  CompositionResult r;
  r.method = Method::cc2;
  r.n = n;
  r.est_cc_nodes = select_hubs(est_sum, scores, sel);
  r.est_scores = std::move(scores);
  r.selection = sel;
  return r;
}

}  // namespace detail

/// Distance-sum envelope heuristic: estimate each vertex's AND-graph
/// distance sum as the larger layer sum, score it as closeness, and select.
inline CompositionResult compose_cc2(const LayerSummary& sx, const LayerSummary& sy,
                                     const Selection& sel = Selection::above_average()) {
  Stopwatch clock;
  detail::require_same_n(sx, sy);
  std::vector<std::uint64_t> est_sum(sx.n);
  for (vertex_t u = 0; u < sx.n; ++u) est_sum[u] = std::max(sx.sum_dist[u], sy.sum_dist[u]);
  auto r = detail::cc2_from(std::move(est_sum), sx.n, sel);
  r.elapsed = clock.seconds();
  return r;
}

/// Composition over more than two layers. naive intersects all hub sets;
/// cc2 takes the max over all layers, which is order independent. cc1 is
/// only defined for a pair of layers.
inline CompositionResult compose_multi(std::span<const LayerSummary> summaries, Method method,
                                       const Selection& sel = Selection::above_average()) {
  if (summaries.size() < 2) throw ParameterError("composition needs at least two summaries");
  for (const auto& s : summaries) detail::require_same_n(summaries.front(), s);
  switch (method) {
    case Method::cc1:
      if (summaries.size() != 2) {
        throw UnsupportedError("cc1 composition is unsupported for more than two layers");
      }
      return compose_cc1(summaries[0], summaries[1]);
    case Method::cc2: {
      Stopwatch clock;
      auto r = detail::cc2_from(estimate_sum_dist(summaries), summaries.front().n, sel);
      r.elapsed = clock.seconds();
      return r;
    }
    case Method::naive:
      break;
  }
  Stopwatch clock;
  std::vector<vertex_t> acc = summaries.front().cc_nodes;
  for (const auto& s : summaries.subspan(1)) acc = detail::intersect(acc, s.cc_nodes);
  CompositionResult r;
  r.method = Method::naive;
  r.n = summaries.front().n;
  r.est_cc_nodes = std::move(acc);
  r.elapsed = clock.seconds();
  return r;
}

inline CompositionResult compose(const LayerSummary& sx, const LayerSummary& sy, Method method,
                                 const Selection& sel = Selection::above_average()) {
  switch (method) {
    case Method::naive: return compose_naive(sx, sy);
    case Method::cc1: return compose_cc1(sx, sy);
    case Method::cc2: return compose_cc2(sx, sy, sel);
  }
  throw ParameterError("unknown method");
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const CompositionResult& r) {
  nlohmann::ordered_json j;
  j["method"] = std::string(to_string(r.method));
  j["n"] = r.n;
  j["est_cc_nodes"] = r.est_cc_nodes;
  j["est_scores"] = r.est_scores ? nlohmann::ordered_json(*r.est_scores) : nlohmann::ordered_json(nullptr);
  j["elapsed_s"] = r.elapsed;
  if (r.selection) {
    j["selection"] = std::string(to_string(r.selection->kind));
    j["k"] = r.selection->kind == Selection::Kind::top_k ? nlohmann::ordered_json(r.selection->k)
                                                          : nlohmann::ordered_json(nullptr);
  } else {
    j["selection"] = nullptr;
    j["k"] = nullptr;
  }
  return j;
}

inline CompositionResult composition_from_json(const nlohmann::ordered_json& doc) {
  if (!doc.is_object()) throw LoadError("composition result must be a JSON object");
  CompositionResult r;
  const auto& method = detail::json_field(doc, "method");
  if (!method.is_string()) throw LoadError("\"method\" must be a string");
  try {
    r.method = parse_method(method.get<std::string>());
  } catch (const ParameterError& e) {
    throw LoadError(e.what());
  }
  r.n = static_cast<vertex_t>(detail::json_uint(detail::json_field(doc, "n"), "n", UINT32_MAX - 1));
  r.est_cc_nodes = detail::json_vertex_set(detail::json_field(doc, "est_cc_nodes"), "est_cc_nodes", r.n);
  if (auto it = doc.find("est_scores"); it != doc.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != r.n) throw LoadError("\"est_scores\" must hold n numbers");
    std::vector<double> scores;
    for (const auto& v : *it) scores.push_back(detail::json_real(v, "est_scores"));
    r.est_scores = std::move(scores);
  }
  if (auto it = doc.find("elapsed_s"); it != doc.end()) r.elapsed = detail::json_real(*it, "elapsed_s");
  if (auto it = doc.find("selection"); it != doc.end() && !it->is_null()) {
    if (*it == "above-average") {
      r.selection = Selection::above_average();
    } else if (*it == "top-k") {
      r.selection = Selection::top_k(static_cast<vertex_t>(detail::json_uint(detail::json_field(doc, "k"), "k")));
    } else {
      throw LoadError("unknown selection " + it->dump());
    }
  }
  if (r.method == Method::naive && r.est_scores) throw LoadError("naive results carry no scores");
  return r;
}

}  // namespace mlncc

#endif  // MLNCC_COMPOSITION_HPP
