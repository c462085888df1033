#ifndef MLNCC_SYNTH_HPP
#define MLNCC_SYNTH_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlncc/errors.hpp"
#include "mlncc/graph.hpp"
#include "mlncc/summary.hpp"

namespace mlncc {

// Random streams: every generator call owns a std::mt19937_64 seeded from a
// 64-bit seed; independent sub-streams (one per layer) are derived from the
// top-level seed with SplitMix64. Draws use raw 64-bit outputs only, never
// the standard distributions, so sequences are identical across platforms.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of sub-stream `index` derived from `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= index; ++i) out = splitmix64(state);
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Recursive-matrix quadrant probabilities. Defaults are the usual skewed
/// choice that yields a heavy-tailed degree distribution.
struct PowerLaw {
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;

  void validate() const {
    if (a < 0 || b < 0 || c < 0 || d < 0) throw ParameterError("RMAT probabilities must be non-negative");
    if (std::abs(a + b + c + d - 1.0) > 1e-9) throw ParameterError("RMAT probabilities must sum to 1");
  }
  friend bool operator==(const PowerLaw&, const PowerLaw&) = default;
};

/// Uniform sampling of distinct vertex pairs (binomial, near-normal degrees).
struct Uniform {
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

using DegreeDistribution = std::variant<PowerLaw, Uniform>;

struct GenSpec {
  vertex_t n = 0;
  std::uint64_t base_edges = 0;
  double p1 = 50.0;
  double p2 = 50.0;
  DegreeDistribution dist1 = PowerLaw{};
  DegreeDistribution dist2 = Uniform{};
  bool path_overlay = true;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(p1 > 0) || !(p2 > 0)) throw ParameterError("split percentages must be positive");
    if (std::abs(p1 + p2 - 100.0) > 1e-9) throw ParameterError("split percentages must sum to 100");
    if (auto* p = std::get_if<PowerLaw>(&dist1)) p->validate();
    if (auto* p = std::get_if<PowerLaw>(&dist2)) p->validate();
  }

  std::uint64_t layer_edges(int layer) const {
    const double pct = layer == 0 ? p1 : p2;
    return static_cast<std::uint64_t>(std::llround(pct / 100.0 * static_cast<double>(base_edges)));
  }

  friend bool operator==(const GenSpec&, const GenSpec&) = default;
};

namespace detail {

inline std::uint64_t pair_capacity(vertex_t n) {
  return std::uint64_t{n} * (n > 0 ? n - 1 : 0) / 2;
}

inline void require_capacity(vertex_t n, std::uint64_t m) {
  if (m > pair_capacity(n)) {
    throw CapacityError("cannot place " + std::to_string(m) + " distinct edges on " + std::to_string(n) +
                        " vertices (at most " + std::to_string(pair_capacity(n)) + ")");
  }
}

inline std::uint64_t pair_key(vertex_t u, vertex_t v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t{u} << 32) | v;
}

}  // namespace detail

/// RMAT edges: each endpoint bit is chosen by descending into one of four
/// quadrants with probabilities (a, b, c, d). Ids are drawn in the enclosing
/// power-of-two domain; out-of-range ids, self-loops and repeats are redrawn.
/// Returns exactly `m` distinct undirected edges.
inline UndirectedGraph gen_rmat(vertex_t n, std::uint64_t m, const PowerLaw& p, std::uint64_t seed) {
  p.validate();
  detail::require_capacity(n, m);
  int levels = 0;
  while ((std::uint64_t{1} << levels) < n) ++levels;

  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  std::vector<Edge> edges;
  edges.reserve(m);
  const double ab = p.a + p.b;
  const double abc = ab + p.c;
  const std::uint64_t max_draws = std::max<std::uint64_t>(10'000'000, 1000 * m);
  for (std::uint64_t draws = 0; edges.size() < m; ++draws) {
    if (draws == max_draws) {
      throw CapacityError("RMAT could not place " + std::to_string(m) + " distinct edges after " +
                          std::to_string(draws) + " draws");
    }
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    for (int l = 0; l < levels; ++l) {
      const double r = rng.unit();
      const unsigned row = r >= ab ? 1 : 0;
      const unsigned col = (r >= p.a && r < ab) || r >= abc ? 1 : 0;
      u = (u << 1) | row;
      v = (v << 1) | col;
    }
    if (u >= n || v >= n || u == v) continue;
    auto a = static_cast<vertex_t>(u);
    auto b = static_cast<vertex_t>(v);
    if (seen.insert(detail::pair_key(a, b)).second) edges.emplace_back(a, b);
  }
  return UndirectedGraph::from_edges(n, edges);
}

/// `m` distinct vertex pairs sampled uniformly without replacement.
inline UndirectedGraph gen_uniform(vertex_t n, std::uint64_t m, std::uint64_t seed) {
  detail::require_capacity(n, m);
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m);
  const std::uint64_t capacity = detail::pair_capacity(n);
  if (m > capacity / 2) {
    // Dense: partial Fisher-Yates over the full pair list.
    std::vector<Edge> all;
    all.reserve(capacity);
    for (vertex_t u = 0; u < n; ++u) {
      for (vertex_t v = u + 1; v < n; ++v) all.emplace_back(u, v);
    }
    for (std::uint64_t i = 0; i < m; ++i) {
      std::swap(all[i], all[i + rng.below(capacity - i)]);
    }
    all.resize(m);
    return UndirectedGraph::from_edges(n, all);
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  while (edges.size() < m) {
    auto u = static_cast<vertex_t>(rng.below(n));
    auto v = static_cast<vertex_t>(rng.below(n));
    if (u == v) continue;
    if (seen.insert(detail::pair_key(u, v)).second) edges.emplace_back(u, v);
  }
  return UndirectedGraph::from_edges(n, edges);
}

inline UndirectedGraph gen_layer(vertex_t n, std::uint64_t m, const DegreeDistribution& dist,
                                 std::uint64_t seed) {
  if (const auto* p = std::get_if<PowerLaw>(&dist)) return gen_rmat(n, m, *p, seed);
  return gen_uniform(n, m, seed);
}

/// Path 0-1-...-(n-1) unioned into `g`.
inline UndirectedGraph overlay_path(const UndirectedGraph& g) {
  std::vector<Edge> edges = g.edges();
  for (vertex_t j = 0; j + 1 < g.num_vertices(); ++j) edges.emplace_back(j, j + 1);
  return UndirectedGraph::from_edges(g.num_vertices(), edges);
}

/// Two-layer synthetic network: layer i gets round(p_i% of base_edges)
/// random edges from its distribution, then (optionally) the shared path.
inline HoMln gen_mln(const GenSpec& spec) {
  spec.validate();
  std::vector<UndirectedGraph> layers;
  const DegreeDistribution* dists[] = {&spec.dist1, &spec.dist2};
  for (int i = 0; i < 2; ++i) {
    auto g = gen_layer(spec.n, spec.layer_edges(i), *dists[i], derive_seed(spec.seed, i));
    layers.push_back(spec.path_overlay ? overlay_path(g) : std::move(g));
  }
  return HoMln(std::move(layers), {"L1", "L2"});
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const DegreeDistribution& dist) {
  if (const auto* p = std::get_if<PowerLaw>(&dist)) {
    return {{"type", "powerlaw"}, {"a", p->a}, {"b", p->b}, {"c", p->c}, {"d", p->d}};
  }
  return {{"type", "uniform"}};
}

inline nlohmann::ordered_json to_json(const GenSpec& spec) {
  nlohmann::ordered_json j;
  j["n"] = spec.n;
  j["base_edges"] = spec.base_edges;
  j["split"] = {spec.p1, spec.p2};
  j["dist1"] = to_json(spec.dist1);
  j["dist2"] = to_json(spec.dist2);
  j["path_overlay"] = spec.path_overlay;
  j["seed"] = spec.seed;
  return j;
}

namespace detail {

inline DegreeDistribution distribution_from_json(const nlohmann::ordered_json& j, const std::string& key) {
  std::string type;
  if (j.is_string()) {
    type = j.get<std::string>();
  } else if (j.is_object() && j.contains("type") && j["type"].is_string()) {
    type = j["type"].get<std::string>();
  } else {
    throw ParameterError(key + ": expected \"powerlaw\", \"uniform\" or an object with a \"type\"");
  }
  if (type == "uniform") return Uniform{};
  if (type != "powerlaw") throw ParameterError(key + ": unknown distribution '" + type + "'");
  PowerLaw p;
  if (j.is_object()) {
    auto get = [&](const char* name, double& out) {
      if (auto it = j.find(name); it != j.end()) {
        if (!it->is_number()) throw ParameterError(key + "." + name + " must be a number");
        out = it->get<double>();
      }
    };
    get("a", p.a);
    get("b", p.b);
    get("c", p.c);
    get("d", p.d);
  }
  return p;
}

}  // namespace detail

/// Reads a generator configuration; all violations are ParameterError.
inline GenSpec genspec_from_json(const nlohmann::ordered_json& j) {
  try {
    if (!j.is_object()) throw ParameterError("generator spec must be a JSON object");
    GenSpec spec;
    spec.n = static_cast<vertex_t>(detail::json_uint(detail::json_field(j, "n"), "n", UINT32_MAX - 1));
    if (auto it = j.find("base_edges"); it != j.end()) spec.base_edges = detail::json_uint(*it, "base_edges");
    if (auto it = j.find("split"); it != j.end()) {
      if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
        throw ParameterError("split must be two numbers");
      }
      spec.p1 = (*it)[0].get<double>();
      spec.p2 = (*it)[1].get<double>();
    }
    if (auto it = j.find("dist1"); it != j.end()) spec.dist1 = detail::distribution_from_json(*it, "dist1");
    if (auto it = j.find("dist2"); it != j.end()) spec.dist2 = detail::distribution_from_json(*it, "dist2");
    if (auto it = j.find("path_overlay"); it != j.end()) {
      if (!it->is_boolean()) throw ParameterError("path_overlay must be a boolean");
      spec.path_overlay = it->get<bool>();
    }
    if (auto it = j.find("seed"); it != j.end()) spec.seed = detail::json_uint(*it, "seed");
    spec.validate();
    return spec;
  } catch (const LoadError& e) {
    throw ParameterError(e.what());
  }
}

}  // namespace mlncc

#endif  // MLNCC_SYNTH_HPP
