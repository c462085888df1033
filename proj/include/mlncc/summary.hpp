#ifndef MLNCC_SUMMARY_HPP
#define MLNCC_SUMMARY_HPP

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlncc/errors.hpp"
#include "mlncc/types.hpp"

namespace mlncc {

/// Everything the composition step is allowed to know about one layer.
///
/// `sum_dist` uses the n-penalty convention (an unreachable vertex counts as
/// distance n); `closeness` is the Wasserman-Faust normalized score.
/// `cc_nodes` holds exactly the vertices whose closeness is strictly above
/// `avg_closeness`, and `cc_neighborhoods` maps each of them to its sorted
/// one-hop neighbours.
struct LayerSummary {
  vertex_t n = 0;
  std::vector<std::uint32_t> deg;
  std::vector<std::uint64_t> sum_dist;
  std::vector<double> closeness;
  double avg_closeness = 0.0;
  std::vector<vertex_t> cc_nodes;
  std::map<vertex_t, std::vector<vertex_t>> cc_neighborhoods;

  friend bool operator==(const LayerSummary&, const LayerSummary&) = default;
};

inline constexpr int kSummaryVersion = 1;

namespace detail {

inline std::uint64_t json_uint(const nlohmann::ordered_json& j, const std::string& what,
                               std::uint64_t max_value = UINT64_MAX) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw LoadError(what + ": expected a non-negative integer");
  }
  auto v = j.get<std::uint64_t>();
  if (v > max_value) throw LoadError(what + ": value " + std::to_string(v) + " out of range");
  return v;
}

inline double json_real(const nlohmann::ordered_json& j, const std::string& what) {
  if (!j.is_number()) throw LoadError(what + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw LoadError(what + ": not finite");
  return v;
}

inline const nlohmann::ordered_json& json_field(const nlohmann::ordered_json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw LoadError(std::string("missing field \"") + key + "\"");
  return *it;
}

inline const nlohmann::ordered_json& json_array(const nlohmann::ordered_json& doc, const char* key,
                                                std::size_t expected_size) {
  const auto& a = json_field(doc, key);
  if (!a.is_array()) throw LoadError(std::string("\"") + key + "\" must be an array");
  if (a.size() != expected_size) {
    throw LoadError(std::string("\"") + key + "\" has " + std::to_string(a.size()) +
                    " entries, expected " + std::to_string(expected_size));
  }
  return a;
}

inline std::vector<vertex_t> json_vertex_set(const nlohmann::ordered_json& a, const std::string& what,
                                             vertex_t n) {
  if (!a.is_array()) throw LoadError(what + " must be an array");
  std::vector<vertex_t> out;
  out.reserve(a.size());
  for (const auto& e : a) {
    auto v = static_cast<vertex_t>(json_uint(e, what, n == 0 ? 0 : n - 1));
    if (n == 0) throw LoadError(what + ": vertex id in an empty graph");
    if (!out.empty() && v <= out.back()) throw LoadError(what + " must be strictly ascending");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const LayerSummary& s) {
  nlohmann::ordered_json j;
  j["version"] = kSummaryVersion;
  j["n"] = s.n;
  j["deg"] = s.deg;
  j["sum_dist"] = s.sum_dist;
  j["closeness"] = s.closeness;
  j["avg_closeness"] = s.avg_closeness;
  j["cc_nodes"] = s.cc_nodes;
  auto nbd = nlohmann::ordered_json::object();
  for (const auto& [u, nb] : s.cc_neighborhoods) nbd[std::to_string(u)] = nb;
  j["cc_neighborhoods"] = std::move(nbd);
  return j;
}

/// Parses and validates a summary document. Every structural invariant of
/// LayerSummary is checked; violations raise LoadError.
inline LayerSummary summary_from_json(const nlohmann::ordered_json& doc) {
  using detail::json_array;
  using detail::json_field;
  using detail::json_real;
  using detail::json_uint;
  if (!doc.is_object()) throw LoadError("summary document must be a JSON object");
  const auto& version = json_field(doc, "version");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kSummaryVersion) {
    throw LoadError("unsupported summary version " + version.dump());
  }
  LayerSummary s;
  s.n = static_cast<vertex_t>(json_uint(json_field(doc, "n"), "n", UINT32_MAX - 1));
  const std::size_t n = s.n;

  const auto& deg = json_array(doc, "deg", n);
  const auto& sum_dist = json_array(doc, "sum_dist", n);
  const auto& closeness = json_array(doc, "closeness", n);
  s.deg.reserve(n);
  s.sum_dist.reserve(n);
  s.closeness.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    s.deg.push_back(static_cast<std::uint32_t>(json_uint(deg[u], "deg", n - 1)));
    s.sum_dist.push_back(json_uint(sum_dist[u], "sum_dist"));
    double c = json_real(closeness[u], "closeness");
    if (c < 0.0 || c > 1.0) throw LoadError("closeness outside [0,1]");
    s.closeness.push_back(c);
  }
  s.avg_closeness = json_real(json_field(doc, "avg_closeness"), "avg_closeness");
  s.cc_nodes = detail::json_vertex_set(json_field(doc, "cc_nodes"), "cc_nodes", s.n);

  std::vector<vertex_t> expected;
  for (vertex_t u = 0; u < s.n; ++u) {
    if (s.closeness[u] > s.avg_closeness) expected.push_back(u);
  }
  if (expected != s.cc_nodes) throw LoadError("cc_nodes disagree with closeness > avg_closeness");

  const auto& nbd = json_field(doc, "cc_neighborhoods");
  if (!nbd.is_object()) throw LoadError("cc_neighborhoods must be an object");
  for (const auto& [key, list] : nbd.items()) {
    std::uint64_t u = 0;
    try {
      std::size_t used = 0;
      u = std::stoull(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw LoadError("cc_neighborhoods key \"" + key + "\" is not a vertex id");
    }
    if (u >= n) throw LoadError("cc_neighborhoods key " + key + " out of range");
    auto nb = detail::json_vertex_set(list, "cc_neighborhoods[" + key + "]", s.n);
    if (nb.size() != s.deg[u]) throw LoadError("cc_neighborhoods[" + key + "] size disagrees with deg");
    if (!s.cc_neighborhoods.emplace(static_cast<vertex_t>(u), std::move(nb)).second) {
      throw LoadError("duplicate cc_neighborhoods key " + key);
    }
  }
  if (s.cc_neighborhoods.size() != s.cc_nodes.size()) {
    throw LoadError("cc_neighborhoods must be keyed exactly by cc_nodes");
  }
  for (vertex_t u : s.cc_nodes) {
    if (!s.cc_neighborhoods.contains(u)) throw LoadError("cc_neighborhoods must be keyed exactly by cc_nodes");
  }
  return s;
}

inline void save_summary(const LayerSummary& s, std::ostream& out) {
  out << to_json(s).dump() << '\n';
  out.flush();
  if (!out) throw Error("failed to write layer summary");
}

inline LayerSummary load_summary(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("invalid JSON: ") + e.what());
  }
  return summary_from_json(doc);
}

}  // namespace mlncc

#endif  // MLNCC_SUMMARY_HPP
