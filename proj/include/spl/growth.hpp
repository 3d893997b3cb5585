#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/continuity.hpp"
#include "spl/dynamics.hpp"
#include "spl/error.hpp"
#include "spl/fixedset.hpp"
#include "spl/network.hpp"

namespace spl {

struct GrowthParams {
  std::size_t branch_factor = 2;
  std::size_t new_loop_len = 3;
  int coactivation_window = 1;
  double hebb_increment = 0.1;
  double link_weight = 1.0;
  /// Network edges with |weight| below this are dropped by prune.
  double prune_threshold = 0.0;
  /// Hebbian updates never push a weight above this.
  double max_weight = 5.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (branch_factor < 1) throw ContractError("branch_factor must be >= 1");
    if (new_loop_len < 2) throw ContractError("new_loop_len must be >= 2");
    if (coactivation_window < 1) throw ContractError("coactivation_window must be >= 1");
    if (!std::isfinite(hebb_increment) || hebb_increment < 0) throw ContractError("hebb_increment must be >= 0");
    if (!std::isfinite(link_weight)) throw ContractError("link_weight must be finite");
    if (!(max_weight > 0)) throw ContractError("max_weight must be positive");
  }
};

struct GrowthResult {
  Network net;
  FixedSetRegistry registry;
  std::vector<FixedSetId> added;
};

namespace detail {

inline std::vector<Loop> loops_of(const Network& net, const FixedSet& fs) {
  std::vector<Loop> out;
  for (const auto& id : fs.loop_ids) {
    Loop l{id, {}};
    for (const auto& n : id.nodes) {
      auto idx = net.find(n);
      if (!idx) throw ContractError("fixed set '" + fs.label + "' names node " + n + " absent from the network");
      l.nodes.push_back(*idx);
    }
    out.push_back(std::move(l));
  }
  return out;
}

/// Attachment point of a loop: its lowest-indexed node.
inline NodeIndex attach_node(const Loop& l) { return *std::min_element(l.nodes.begin(), l.nodes.end()); }

/// Inserts or overwrites u->v in `spec`.
inline void put_edge(NetworkSpec& spec, const NodeId& u, const NodeId& v, double w) {
  for (auto& e : spec.edges)
    if (e.src == u && e.dst == v) {
      e.weight = w;
      return;
    }
  spec.edges.push_back({u, v, w});
}

}  // namespace detail

/// Grows branch_factor fresh rings downstream of fixed set `fs`. The
/// attachment node of every loop in `fs` projects into the first node of each
/// ring and receives an edge back from its last node. Each ring is registered
/// as a meta fixed set with `fs` as parent.
inline GrowthResult extend_longitudinal(const Network& net, const FixedSetRegistry& registry, FixedSetId fs_id,
                                        const GrowthParams& gp) {
  gp.validate();
  const FixedSet& fs = registry.at(fs_id);
  const auto parents = detail::loops_of(net, fs);
  const Loop& lead = parents.front();
  const NodeParams np = net.params(lead.nodes.front());
  const double ring_w = net.weight(lead.nodes[0], lead.nodes[1]).value_or(1.0);

  NetworkSpec spec = net.to_spec();
  GrowthResult res{net, registry, {}};
  const std::string salt = fs.label + "#" + std::to_string(net.node_count());
  for (std::size_t k = 0; k < gp.branch_factor; ++k) {
    std::vector<NodeId> ring;
    for (std::size_t j = 0; j < gp.new_loop_len; ++j) {
      NodeId id = salt + "." + std::to_string(k) + "." + std::to_string(j);
      if (net.find(id)) throw ContractError("node id collision while growing: " + id);
      ring.push_back(id);
      spec.nodes.push_back({id, np});
    }
    for (std::size_t j = 0; j < ring.size(); ++j) spec.edges.push_back({ring[j], ring[(j + 1) % ring.size()], ring_w});
    for (const auto& p : parents) {
      const NodeId& a = net.id(detail::attach_node(p));
      detail::put_edge(spec, a, ring.front(), gp.link_weight);
      detail::put_edge(spec, ring.back(), a, gp.link_weight);
    }
    FixedSet child;
    child.label = fs.label + "/x" + std::to_string(k);
    child.kind = FixedSetKind::meta;
    child.parents = {fs_id};
    child.loop_ids = {LoopId::canonical(ring)};
    res.added.push_back(res.registry.add(std::move(child)));
  }
  res.net = build_network(spec);
  return res;
}

/// Bidirectional edges of weight link_weight between the attachment nodes of
/// every loop pair drawn from `a` and `b`; the link is recorded in the
/// registry.
inline GrowthResult associate_lateral(const Network& net, const FixedSetRegistry& registry, FixedSetId a, FixedSetId b,
                                      const GrowthParams& gp) {
  if (a == b) throw ContractError("cannot associate a fixed set with itself");
  const auto la = detail::loops_of(net, registry.at(a));
  const auto lb = detail::loops_of(net, registry.at(b));
  NetworkSpec spec = net.to_spec();
  for (const auto& x : la)
    for (const auto& y : lb) {
      const auto u = detail::attach_node(x), v = detail::attach_node(y);
      if (u == v) continue;
      detail::put_edge(spec, net.id(u), net.id(v), gp.link_weight);
      detail::put_edge(spec, net.id(v), net.id(u), gp.link_weight);
    }
  GrowthResult res{build_network(spec), registry, {}};
  res.registry.add_link(a, b, gp.link_weight);
  return res;
}

/// Co-firing count for u->v: pairs of firings with 0 < t_v - t_u <= window.
inline std::size_t cofiring_count(const std::vector<int>& tu, const std::vector<int>& tv, int window) {
  std::size_t c = 0;
  for (int a : tu) {
    auto lo = std::upper_bound(tv.begin(), tv.end(), a);
    auto hi = std::upper_bound(tv.begin(), tv.end(), a + window);
    c += static_cast<std::size_t>(hi - lo);
  }
  return c;
}

/// Strengthens existing edges by hebb_increment per co-firing, capped at
/// max_weight. Weights already above the cap are left as they are.
inline Network hebbian_update(const Network& net, const Trace& trace, const GrowthParams& gp) {
  if (trace.node_count != net.node_count()) throw ContractError("trace was not produced on this network");
  if (gp.coactivation_window < 1) throw ContractError("coactivation_window must be >= 1");
  const auto times = trace.fire_times();
  NetworkSpec spec = net.to_spec();
  for (auto& e : spec.edges) {
    const auto u = net.index_of(e.src), v = net.index_of(e.dst);
    const auto c = cofiring_count(times[u], times[v], gp.coactivation_window);
    if (c == 0) continue;
    const double grown = e.weight + gp.hebb_increment * static_cast<double>(c);
    e.weight = std::max(e.weight, std::min(grown, gp.max_weight));
  }
  return build_network(spec);
}

struct PruneResult {
  Network net;
  PredictionGraph graph;
  FixedSetRegistry registry;
  std::vector<std::pair<Context, Token>> removed;
  /// Counterexamples skipped because they contain unknown tokens.
  std::vector<TokenSeq> skipped;
};

/// Deletes successor pairs exercised by a counterexample and absent from the
/// training corpus. When both ends of a deleted pair map to fixed sets, the
/// lateral link between them is dropped along with its network edges.
inline PruneResult prune(const Network& net, const FixedSetRegistry& registry, const PredictionGraph& graph,
                         const std::vector<TokenSeq>& counterexamples, const GrowthParams& gp = {}) {
  PruneResult res{net, graph, registry, {}, {}};
  std::set<std::pair<FixedSetId, FixedSetId>> unlink;
  for (const auto& cx : counterexamples) {
    if (cx.empty()) continue;
    if (!std::all_of(cx.begin(), cx.end(), [&](const Token& t) { return graph.knows(t); })) {
      res.skipped.push_back(cx);
      continue;
    }
    TokenSeq padded{kSentenceStart};
    padded.insert(padded.end(), cx.begin(), cx.end());
    for (std::size_t end = 1; end < padded.size(); ++end) {
      for (std::size_t n = 1; n <= graph.max_order() && n <= end; ++n) {
        Context c(padded.begin() + static_cast<std::ptrdiff_t>(end - n), padded.begin() + static_cast<std::ptrdiff_t>(end));
        if (!res.graph.remove_link(c, padded[end])) continue;
        res.removed.emplace_back(c, padded[end]);
        auto fa = graph.token_to_fixedset.find(c.back());
        auto fb = graph.token_to_fixedset.find(padded[end]);
        if (fa != graph.token_to_fixedset.end() && fb != graph.token_to_fixedset.end() && fa->second != fb->second)
          unlink.insert(std::minmax(fa->second, fb->second));
      }
    }
  }

  NetworkSpec spec = net.to_spec();
  std::set<std::pair<NodeId, NodeId>> drop;
  for (const auto& [a, b] : unlink) {
    if (!res.registry.contains(a) || !res.registry.contains(b) || !res.registry.remove_link(a, b)) continue;
    for (const auto& x : detail::loops_of(net, registry.at(a)))
      for (const auto& y : detail::loops_of(net, registry.at(b))) {
        const auto& u = net.id(detail::attach_node(x));
        const auto& v = net.id(detail::attach_node(y));
        drop.insert({u, v});
        drop.insert({v, u});
      }
  }
  std::erase_if(spec.edges, [&](const EdgeSpec& e) {
    return drop.count({e.src, e.dst}) != 0 || std::abs(e.weight) < gp.prune_threshold;
  });
  res.net = build_network(spec);
  return res;
}

/// One entry of a replayable growth history.
struct GrowthOp {
  std::string op;
  std::vector<FixedSetId> targets;
  std::vector<FixedSetId> added;
};

inline nlohmann::json to_json(const std::vector<GrowthOp>& log) {
  auto j = nlohmann::json::array();
  for (const auto& o : log) {
    nlohmann::json e{{"op", o.op}, {"targets", nlohmann::json::array()}, {"added", nlohmann::json::array()}};
    for (auto t : o.targets) e["targets"].push_back(t.value);
    for (auto t : o.added) e["added"].push_back(t.value);
    j.push_back(std::move(e));
  }
  return j;
}

}  // namespace spl
