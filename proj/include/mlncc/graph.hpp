#ifndef MLNCC_GRAPH_HPP
#define MLNCC_GRAPH_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlncc/errors.hpp"
#include "mlncc/types.hpp"

namespace mlncc {

// Counts of input edges discarded while building a simple graph.
struct BuildStats {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;

  std::size_t dropped() const noexcept { return self_loops + duplicates; }
};

/// Immutable simple undirected graph over the dense vertex range [0, n).
///
/// Stored in compressed sparse row form: each vertex owns a strictly
/// ascending slice of the target array, and every edge {u, v} appears in
/// both u's and v's slice.
class UndirectedGraph {
 public:
  UndirectedGraph() : offsets_(1, 0) {}

  explicit UndirectedGraph(vertex_t n) : n_(n), offsets_(std::size_t{n} + 1, 0) {}

  /// Builds a graph from an arbitrary edge list. Orientation is ignored;
  /// self-loops and repeated pairs are dropped and tallied in `stats`.
  /// Throws BoundsError when an endpoint is outside [0, n).
  static UndirectedGraph from_edges(vertex_t n, std::span<const Edge> edges,
                                    BuildStats* stats = nullptr) {
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    BuildStats local;
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) {
        throw BoundsError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                          ") outside vertex range [0," + std::to_string(n) + ")");
      }
      if (u == v) {
        ++local.self_loops;
        continue;
      }
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    auto last = std::unique(canon.begin(), canon.end());
    local.duplicates = static_cast<std::size_t>(canon.end() - last);
    canon.erase(last, canon.end());
    if (stats != nullptr) *stats = local;
    return from_canonical(n, canon);
  }

  vertex_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return targets_.size() / 2; }

  std::span<const vertex_t> neighbors(vertex_t u) const {
    check_vertex(u);
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }

  // No range check; for hot loops whose callers already validated `u`.
  std::span<const vertex_t> neighbors_unchecked(vertex_t u) const noexcept {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }

  std::size_t degree(vertex_t u) const {
    check_vertex(u);
    return offsets_[u + 1] - offsets_[u];
  }

  bool has_edge(vertex_t u, vertex_t v) const {
    auto nb = neighbors(u);
    return v < n_ && std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (u, v) pairs with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (vertex_t u = 0; u < n_; ++u) {
      for (vertex_t v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  /// Same edges embedded in a larger vertex range; new vertices are isolated.
  UndirectedGraph with_vertex_count(vertex_t n) const {
    if (n < n_) {
      throw BoundsError("cannot shrink graph from " + std::to_string(n_) + " to " +
                        std::to_string(n) + " vertices");
    }
    UndirectedGraph g = *this;
    g.n_ = n;
    g.offsets_.resize(std::size_t{n} + 1, offsets_.back());
    return g;
  }

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  template <typename Op>
  friend UndirectedGraph merge_layers(const UndirectedGraph&, const UndirectedGraph&, Op);

  // `canon` must be sorted, unique, u < v, in range.
  static UndirectedGraph from_canonical(vertex_t n, const std::vector<Edge>& canon) {
    UndirectedGraph g(n);
    for (auto [u, v] : canon) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
    g.targets_.resize(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Lexicographic order fills every slice in ascending order: a vertex w
    // first receives its smaller neighbours (pairs (u, w)), then its larger
    // ones (pairs (w, v)).
    for (auto [u, v] : canon) {
      g.targets_[cursor[u]++] = v;
      g.targets_[cursor[v]++] = u;
    }
    return g;
  }

  void check_vertex(vertex_t u) const {
    if (u >= n_) {
      throw BoundsError("vertex " + std::to_string(u) + " outside [0," + std::to_string(n_) + ")");
    }
  }

  vertex_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<vertex_t> targets_;
};

// Per-vertex sorted-list merge of two layers over the same vertex set.
template <typename Op>
UndirectedGraph merge_layers(const UndirectedGraph& gx, const UndirectedGraph& gy, Op op) {
  if (gx.num_vertices() != gy.num_vertices()) {
    throw DimensionError("layer vertex counts differ: " + std::to_string(gx.num_vertices()) +
                         " vs " + std::to_string(gy.num_vertices()));
  }
  UndirectedGraph out(gx.num_vertices());
  out.targets_.reserve(std::max(gx.targets_.size(), gy.targets_.size()));
  for (vertex_t u = 0; u < gx.num_vertices(); ++u) {
    auto a = gx.neighbors(u);
    auto b = gy.neighbors(u);
    op(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.targets_));
    out.offsets_[u + 1] = out.targets_.size();
  }
  return out;
}

/// Boolean AND of two layers: an edge survives only if both layers have it.
inline UndirectedGraph and_aggregate(const UndirectedGraph& gx, const UndirectedGraph& gy) {
  return merge_layers(gx, gy, [](auto... args) { return std::set_intersection(args...); });
}

/// Boolean OR of two layers.
inline UndirectedGraph or_aggregate(const UndirectedGraph& gx, const UndirectedGraph& gy) {
  return merge_layers(gx, gy, [](auto... args) { return std::set_union(args...); });
}

/// Homogeneous multilayer network: one vertex set, several edge sets.
class HoMln {
 public:
  explicit HoMln(std::vector<UndirectedGraph> layers, std::vector<std::string> labels = {})
      : layers_(std::move(layers)), labels_(std::move(labels)) {
    if (layers_.empty()) throw ParameterError("a multilayer network needs at least one layer");
    for (const auto& g : layers_) {
      if (g.num_vertices() != layers_.front().num_vertices()) {
        throw DimensionError("all layers must share the same vertex count");
      }
    }
    if (labels_.empty()) {
      for (std::size_t i = 0; i < layers_.size(); ++i) labels_.push_back("L" + std::to_string(i + 1));
    }
    if (labels_.size() != layers_.size()) throw ParameterError("one label per layer required");
  }

  vertex_t num_vertices() const noexcept { return layers_.front().num_vertices(); }
  std::size_t num_layers() const noexcept { return layers_.size(); }
  const std::vector<UndirectedGraph>& layers() const noexcept { return layers_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  const UndirectedGraph& layer(std::size_t i) const {
    if (i >= layers_.size()) {
      throw BoundsError("layer index " + std::to_string(i) + " out of range (" +
                        std::to_string(layers_.size()) + " layers)");
    }
    return layers_[i];
  }

 private:
  std::vector<UndirectedGraph> layers_;
  std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   # n=<count>        optional vertex-count declaration
//   # anything         comment
//   <u><sep><v>        sep is ',', '\t' or spaces
// ---------------------------------------------------------------------------

struct ParsedEdgeList {
  UndirectedGraph graph;
  BuildStats stats;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<std::uint64_t> parse_uint(std::string_view tok) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
  return value;
}

// Recognizes "# n=<count>" (whitespace tolerant). Returns nullopt for other comments.
inline std::optional<std::uint64_t> declared_vertex_count(std::string_view comment) {
  auto body = trim(comment.substr(1));
  if (body.size() < 2 || body[0] != 'n') return std::nullopt;
  body = trim(body.substr(1));
  if (body.empty() || body[0] != '=') return std::nullopt;
  return parse_uint(trim(body.substr(1)));
}

}  // namespace detail

/// Reads an edge list. The vertex count is the largest of `n_hint`, a
/// `# n=` declaration, and one past the largest id seen. Self-loops and
/// repeated edges are dropped and counted.
inline ParsedEdgeList parse_edge_list(std::istream& in, std::optional<vertex_t> n_hint = std::nullopt) {
  constexpr std::uint64_t max_id = std::uint64_t{UINT32_MAX} - 1;
  std::vector<Edge> edges;
  std::optional<std::uint64_t> declared;
  std::uint64_t max_seen = 0;
  std::size_t max_seen_line = 0;
  bool any_edge = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (auto n = detail::declared_vertex_count(text)) {
        if (*n > max_id + 1) throw ParseError(line_no, "declared vertex count too large");
        declared = std::max(declared.value_or(0), *n);
      }
      continue;
    }
    std::string_view tokens[2];
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto start = text.find_first_not_of(" \t,", pos);
      if (start == std::string_view::npos) break;
      auto stop = text.find_first_of(" \t,", start);
      if (stop == std::string_view::npos) stop = text.size();
      if (count == 2) throw ParseError(line_no, "expected exactly two vertex ids");
      tokens[count++] = text.substr(start, stop - start);
      pos = stop;
    }
    if (count != 2) throw ParseError(line_no, "expected exactly two vertex ids");
    auto u = detail::parse_uint(tokens[0]);
    auto v = detail::parse_uint(tokens[1]);
    if (!u || !v) throw ParseError(line_no, "malformed vertex id in '" + std::string(text) + "'");
    if (*u > max_id || *v > max_id) throw ParseError(line_no, "vertex id too large");
    auto hi = std::max(*u, *v);
    if (!any_edge || hi > max_seen) {
      max_seen = hi;
      max_seen_line = line_no;
    }
    any_edge = true;
    edges.emplace_back(static_cast<vertex_t>(*u), static_cast<vertex_t>(*v));
  }
  if (in.bad()) throw Error("read failure while parsing edge list");

  if (declared && any_edge && max_seen >= *declared) {
    throw BoundsError("line " + std::to_string(max_seen_line) + ": vertex id " +
                      std::to_string(max_seen) + " >= declared n=" + std::to_string(*declared));
  }
  if (!any_edge && !declared && !n_hint) {
    throw ParseError(line_no, "edge list is empty and declares no vertex count");
  }
  std::uint64_t n = std::max<std::uint64_t>(n_hint.value_or(0), declared.value_or(0));
  if (any_edge) n = std::max(n, max_seen + 1);

  ParsedEdgeList out;
  out.graph = UndirectedGraph::from_edges(static_cast<vertex_t>(n), edges, &out.stats);
  return out;
}

/// Canonical text form: `# n=<n>` then `u\tv` per edge (u < v), sorted.
inline void write_edge_list(const UndirectedGraph& g, std::ostream& out) {
  out << "# n=" << g.num_vertices() << '\n';
  for (vertex_t u = 0; u < g.num_vertices(); ++u) {
    for (vertex_t v : g.neighbors(u)) {
      if (u < v) out << u << '\t' << v << '\n';
    }
  }
  out.flush();
  if (!out) throw Error("failed to write edge list");
}

}  // namespace mlncc

#endif  // MLNCC_GRAPH_HPP
