#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/error.hpp"
#include "spl/graph.hpp"

namespace spl {

using NodeId = std::string;
using NodeIndex = std::uint32_t;

struct NodeParams {
  double threshold = 1.0;
  int refractory = 1;
  double energy_capacity = 10.0;
  double energy_recharge_rate = 1.0;
  double firing_cost = 1.0;

  bool operator==(const NodeParams&) const = default;
};

struct NodeSpec {
  NodeId id;
  NodeParams params;
  bool operator==(const NodeSpec&) const = default;
};

struct EdgeSpec {
  NodeId src;
  NodeId dst;
  double weight = 1.0;
  bool operator==(const EdgeSpec&) const = default;
};

/// Plain description of a network; what the JSON file holds.
struct NetworkSpec {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<NodeId> input_surface;
  std::vector<NodeId> output_surface;
  bool operator==(const NetworkSpec&) const = default;
};

struct Edge {
  NodeIndex src;
  NodeIndex dst;
  double weight;
};

/// Directed weighted activation graph. Immutable once built; growth
/// operations produce a fresh Network.
class Network {
 public:
  Network() = default;

  std::size_t node_count() const { return ids_.size(); }
  const std::vector<NodeId>& node_ids() const { return ids_; }
  const NodeId& id(NodeIndex i) const { return ids_[i]; }
  const NodeParams& params(NodeIndex i) const { return params_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeIndex>& input_surface() const { return inputs_; }
  const std::vector<NodeIndex>& output_surface() const { return outputs_; }

  std::optional<NodeIndex> find(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex index_of(const NodeId& id) const {
    auto i = find(id);
    if (!i) throw ContractError("unknown node " + id);
    return *i;
  }

  bool is_input(NodeIndex i) const { return is_input_[i] != 0; }

  /// Incoming (source, weight) pairs per node, in edge order.
  const std::vector<std::pair<NodeIndex, double>>& incoming(NodeIndex v) const { return in_[v]; }

  std::optional<double> weight(NodeIndex u, NodeIndex v) const {
    for (const auto& [src, w] : in_[v])
      if (src == u) return w;
    return std::nullopt;
  }

  const graph::Digraph& topology() const { return topo_; }

  NetworkSpec to_spec() const {
    NetworkSpec s;
    for (std::size_t i = 0; i < ids_.size(); ++i) s.nodes.push_back({ids_[i], params_[i]});
    for (const auto& e : edges_) s.edges.push_back({ids_[e.src], ids_[e.dst], e.weight});
    for (auto i : inputs_) s.input_surface.push_back(ids_[i]);
    for (auto i : outputs_) s.output_surface.push_back(ids_[i]);
    return s;
  }

  friend Network build_network(const NetworkSpec& spec);

 private:
  std::vector<NodeId> ids_;
  std::vector<NodeParams> params_;
  std::unordered_map<NodeId, NodeIndex> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<NodeIndex, double>>> in_;
  std::vector<NodeIndex> inputs_;
  std::vector<NodeIndex> outputs_;
  std::vector<char> is_input_;
  graph::Digraph topo_;
};

/// Validates `spec` and builds the network. Throws SchemaError naming the
/// offending element.
inline Network build_network(const NetworkSpec& spec) {
  Network net;
  for (const auto& n : spec.nodes) {
    if (n.id.empty()) throw SchemaError("empty node id");
    if (!net.index_.emplace(n.id, static_cast<NodeIndex>(net.ids_.size())).second)
      throw SchemaError("duplicate node " + n.id);
    const auto& p = n.params;
    if (!std::isfinite(p.threshold) || !std::isfinite(p.energy_capacity) ||
        !std::isfinite(p.energy_recharge_rate) || !std::isfinite(p.firing_cost))
      throw SchemaError("non-finite parameter on node " + n.id);
    if (p.refractory < 0) throw SchemaError("negative refractory on node " + n.id);
    if (p.energy_capacity < 0 || p.energy_recharge_rate < 0 || p.firing_cost < 0)
      throw SchemaError("negative energy parameter on node " + n.id);
    net.ids_.push_back(n.id);
    net.params_.push_back(p);
  }
  const std::size_t n = net.ids_.size();
  net.in_.resize(n);
  net.topo_ = graph::Digraph(n);
  auto lookup = [&](const NodeId& id) {
    auto it = net.index_.find(id);
    if (it == net.index_.end()) throw SchemaError("unknown node " + id);
    return it->second;
  };
  for (const auto& e : spec.edges) {
    NodeIndex u = lookup(e.src), v = lookup(e.dst);
    if (u == v) throw SchemaError("self-edge on node " + e.src);
    if (!std::isfinite(e.weight)) throw SchemaError("non-finite weight on edge " + e.src + "->" + e.dst);
    if (net.topo_.has_edge(u, v)) throw SchemaError("duplicate edge " + e.src + "->" + e.dst);
    net.topo_.add_edge(u, v);
    net.edges_.push_back({u, v, e.weight});
    net.in_[v].emplace_back(u, e.weight);
  }
  net.is_input_.assign(n, 0);
  std::set<NodeIndex> seen_in, seen_out;
  for (const auto& id : spec.input_surface) {
    NodeIndex i = lookup(id);
    if (!seen_in.insert(i).second) throw SchemaError("duplicate input-surface node " + id);
    net.inputs_.push_back(i);
    net.is_input_[i] = 1;
  }
  for (const auto& id : spec.output_surface) {
    NodeIndex i = lookup(id);
    if (!seen_out.insert(i).second) throw SchemaError("duplicate output-surface node " + id);
    net.outputs_.push_back(i);
  }
  return net;
}

/// Canonical identity of a directed cycle: the lexicographically smallest
/// rotation of its node-id sequence. Reflections are distinct loops.
struct LoopId {
  std::vector<NodeId> nodes;

  auto operator<=>(const LoopId&) const = default;
  bool operator==(const LoopId&) const = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i) s += ",";
      s += nodes[i];
    }
    return s + ")";
  }

  static LoopId canonical(std::vector<NodeId> seq) {
    if (seq.empty()) return {};
    std::size_t best = 0;
    const std::size_t n = seq.size();
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        const auto& a = seq[(r + k) % n];
        const auto& b = seq[(best + k) % n];
        if (a < b) {
          best = r;
          break;
        }
        if (b < a) break;
      }
    }
    std::rotate(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(best), seq.end());
    return {std::move(seq)};
  }
};

struct Loop {
  LoopId id;
  /// Node indices in the same (canonical) cyclic order as `id.nodes`.
  std::vector<NodeIndex> nodes;

  std::size_t length() const { return nodes.size(); }
};

inline constexpr std::size_t kDefaultMaxLoopLen = 8;

/// Simple directed cycles of length <= max_len, canonicalised and sorted by
/// LoopId (lexicographic over node ids).
inline std::vector<Loop> enumerate_simple_cycles(const Network& net,
                                                 std::size_t max_len = kDefaultMaxLoopLen) {
  if (max_len < 2) throw ContractError("max_len must be >= 2");
  std::vector<Loop> loops;
  for (auto& cyc : graph::simple_cycles(net.topology(), max_len)) {
    std::vector<NodeId> names;
    names.reserve(cyc.size());
    for (auto v : cyc) names.push_back(net.id(v));
    Loop l;
    l.id = LoopId::canonical(std::move(names));
    for (const auto& name : l.id.nodes) l.nodes.push_back(net.index_of(name));
    loops.push_back(std::move(l));
  }
  std::sort(loops.begin(), loops.end(), [](const Loop& a, const Loop& b) { return a.id < b.id; });
  return loops;
}

struct SccPartition {
  std::vector<std::set<NodeId>> components;
  std::map<NodeId, std::size_t> component_of;
};

inline SccPartition strongly_connected_components(const Network& net) {
  auto r = graph::strongly_connected_components(net.topology());
  SccPartition p;
  for (std::size_t c = 0; c < r.components.size(); ++c) {
    std::set<NodeId> comp;
    for (auto v : r.components[c]) {
      comp.insert(net.id(v));
      p.component_of[net.id(v)] = c;
    }
    p.components.push_back(std::move(comp));
  }
  return p;
}

// ---- JSON ---------------------------------------------------------------

namespace detail {
template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("field '") + key + "' has the wrong type");
  }
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}
}  // namespace detail

inline NetworkSpec network_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("network spec must be a JSON object");
  NetworkSpec s;
  NodeParams d;
  for (const auto& n : detail::require(j, "nodes")) {
    NodeSpec ns;
    ns.id = detail::require(n, "id").get<std::string>();
    ns.params.threshold = detail::get_or(n, "threshold", d.threshold);
    ns.params.refractory = detail::get_or(n, "refractory", d.refractory);
    ns.params.energy_capacity = detail::get_or(n, "energy_capacity", d.energy_capacity);
    ns.params.energy_recharge_rate = detail::get_or(n, "energy_recharge_rate", d.energy_recharge_rate);
    ns.params.firing_cost = detail::get_or(n, "firing_cost", d.firing_cost);
    s.nodes.push_back(std::move(ns));
  }
  if (auto it = j.find("edges"); it != j.end()) {
    for (const auto& e : *it) {
      s.edges.push_back({detail::require(e, "src").get<std::string>(),
                         detail::require(e, "dst").get<std::string>(),
                         detail::get_or(e, "weight", 1.0)});
    }
  }
  s.input_surface = detail::get_or(j, "input_surface", std::vector<std::string>{});
  s.output_surface = detail::get_or(j, "output_surface", std::vector<std::string>{});
  return s;
}

inline nlohmann::json to_json(const NetworkSpec& s) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : s.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"threshold", n.params.threshold},
                          {"refractory", n.params.refractory},
                          {"energy_capacity", n.params.energy_capacity},
                          {"energy_recharge_rate", n.params.energy_recharge_rate},
                          {"firing_cost", n.params.firing_cost}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : s.edges) j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"weight", e.weight}});
  j["input_surface"] = s.input_surface;
  j["output_surface"] = s.output_surface;
  return j;
}

}  // namespace spl
