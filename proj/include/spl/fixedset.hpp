#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/dynamics.hpp"
#include "spl/error.hpp"
#include "spl/network.hpp"
#include "spl/parallel.hpp"

namespace spl {

struct FixedSetId {
  std::uint32_t value = 0;
  auto operator<=>(const FixedSetId&) const = default;
};

enum class FixedSetKind { direct, meta };

inline const char* to_string(FixedSetKind k) { return k == FixedSetKind::direct ? "direct" : "meta"; }

struct FixedSet {
  FixedSetId id;
  std::string label;
  std::set<LoopId> loop_ids;
  FixedSetKind kind = FixedSetKind::direct;
  std::set<FixedSetId> parents;

  bool operator==(const FixedSet&) const = default;
};

struct LateralLink {
  FixedSetId a;
  FixedSetId b;
  double weight = 0.0;

  auto operator<=>(const LateralLink&) const = default;
};

/// Registered fixed sets plus lateral associations between them.
class FixedSetRegistry {
 public:
  /// Registers `fs` under a fresh id (ids are assigned in insertion order) and
  /// returns that id.
  FixedSetId add(FixedSet fs) {
    if (fs.loop_ids.empty()) throw ContractError("fixed set '" + fs.label + "' has no loops");
    if ((fs.kind == FixedSetKind::meta) != !fs.parents.empty())
      throw ContractError("fixed set '" + fs.label + "': meta kind requires parents and vice versa");
    for (const auto& p : fs.parents)
      if (!contains(p)) throw ContractError("fixed set '" + fs.label + "' has an unregistered parent");
    fs.id = FixedSetId{next_++};
    auto id = fs.id;
    entries_.emplace(id, std::move(fs));
    return id;
  }

  /// Inserts with a given id; used when loading a serialized registry.
  void insert(FixedSet fs) {
    if (entries_.count(fs.id)) throw SchemaError("duplicate fixed set id " + std::to_string(fs.id.value));
    next_ = std::max(next_, fs.id.value + 1);
    auto id = fs.id;
    entries_.emplace(id, std::move(fs));
  }

  bool contains(FixedSetId id) const { return entries_.count(id) != 0; }

  const FixedSet& at(FixedSetId id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw ContractError("unknown fixed set " + std::to_string(id.value));
    return it->second;
  }

  std::optional<FixedSetId> find_label(const std::string& label) const {
    for (const auto& [id, fs] : entries_)
      if (fs.label == label) return id;
    return std::nullopt;
  }

  const std::map<FixedSetId, FixedSet>& entries() const { return entries_; }
  const std::set<LateralLink>& links() const { return links_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  void add_link(FixedSetId a, FixedSetId b, double weight) {
    if (!contains(a) || !contains(b)) throw ContractError("link endpoint not registered");
    if (b < a) std::swap(a, b);
    remove_link(a, b);
    links_.insert({a, b, weight});
  }

  bool remove_link(FixedSetId a, FixedSetId b) {
    if (b < a) std::swap(a, b);
    for (auto it = links_.begin(); it != links_.end(); ++it)
      if (it->a == a && it->b == b) {
        links_.erase(it);
        return true;
      }
    return false;
  }

  std::optional<double> link_weight(FixedSetId a, FixedSetId b) const {
    if (b < a) std::swap(a, b);
    for (const auto& l : links_)
      if (l.a == a && l.b == b) return l.weight;
    return std::nullopt;
  }

  bool has_meta() const {
    for (const auto& [id, fs] : entries_)
      if (fs.kind == FixedSetKind::meta) return true;
    return false;
  }

  bool operator==(const FixedSetRegistry&) const = default;

 private:
  std::map<FixedSetId, FixedSet> entries_;
  std::set<LateralLink> links_;
  std::uint32_t next_ = 0;
};

/// An average scenario plus its variations; each variation is a full
/// stimulus.
struct StimulusFamily {
  Stimulus average;
  std::vector<Stimulus> variations;
  std::string label;

  std::vector<Stimulus> scenarios() const {
    std::vector<Stimulus> all{average};
    all.insert(all.end(), variations.begin(), variations.end());
    return all;
  }
};

inline constexpr int kDefaultFixedSetHorizon = 48;

/// Triggered-loop set of each scenario in the family, in scenario order.
inline std::vector<std::set<LoopId>> family_triggered(const Network& net, const std::vector<Loop>& loops,
                                                      const StimulusFamily& family, const DynParams& params,
                                                      int horizon) {
  const auto runs = family.scenarios();
  std::vector<std::set<LoopId>> out(runs.size());
  parallel_for(runs.size(), [&](std::size_t k) {
    out[k] = triggered_loops(run(net, {runs[k]}, params, horizon), net, loops, params);
  });
  return out;
}

/// Loops triggered in at least `quorum` of the family's runs (quorum 1 is the
/// plain intersection). Returns nullopt when no loop qualifies.
inline std::optional<FixedSet> extract_fixed_set(const Network& net, const StimulusFamily& family,
                                                 const DynParams& params, double quorum = 1.0,
                                                 int horizon = kDefaultFixedSetHorizon) {
  if (family.variations.empty()) throw ContractError("stimulus family '" + family.label + "' has no variations");
  if (!(quorum > 0.0 && quorum <= 1.0)) throw ContractError("quorum must be in (0, 1]");
  const auto loops = enumerate_simple_cycles(net, params.max_loop_len);
  const auto per_run = family_triggered(net, loops, family, params, horizon);
  const double needed = quorum * static_cast<double>(per_run.size()) - 1e-9;
  std::map<LoopId, int> tally;
  for (const auto& s : per_run)
    for (const auto& l : s) ++tally[l];
  FixedSet fs;
  fs.label = family.label;
  fs.kind = FixedSetKind::direct;
  for (const auto& [l, c] : tally)
    if (static_cast<double>(c) >= needed) fs.loop_ids.insert(l);
  if (fs.loop_ids.empty()) return std::nullopt;
  return fs;
}

/// Meta fixed set over `parent_ids`: the loops that, in every run of the
/// family, first complete a traversal strictly after the earliest parent-loop
/// completion of that run. Parent loops themselves are excluded.
inline FixedSet promote_meta_fixed_set(const FixedSetRegistry& registry, const std::set<FixedSetId>& parent_ids,
                                       const Network& net, const StimulusFamily& family, const DynParams& params,
                                       int horizon = kDefaultFixedSetHorizon) {
  if (parent_ids.empty()) throw ContractError("meta promotion needs at least one parent");
  if (family.variations.empty()) throw ContractError("stimulus family '" + family.label + "' has no variations");
  std::set<LoopId> parent_loops;
  for (auto id : parent_ids) {
    const auto& p = registry.at(id);
    if (p.loop_ids.empty()) throw ContractError("parent fixed set '" + p.label + "' has no loops");
    parent_loops.insert(p.loop_ids.begin(), p.loop_ids.end());
  }
  const auto loops = enumerate_simple_cycles(net, params.max_loop_len);
  const auto runs = family.scenarios();
  std::optional<std::set<LoopId>> acc;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto first = first_completion(run(net, {runs[k]}, params, horizon), loops, params);
    int parent_time = -1;
    for (const auto& [l, t] : first)
      if (parent_loops.count(l)) parent_time = parent_time < 0 ? t : std::min(parent_time, t);
    if (parent_time < 0)
      throw PromotionError("no parent loop triggered in run " + std::to_string(k) + " of family '" + family.label +
                           "'");
    std::set<LoopId> downstream;
    for (const auto& [l, t] : first)
      if (t > parent_time && !parent_loops.count(l)) downstream.insert(l);
    if (!acc) {
      acc = std::move(downstream);
    } else {
      std::set<LoopId> keep;
      std::set_intersection(acc->begin(), acc->end(), downstream.begin(), downstream.end(),
                            std::inserter(keep, keep.end()));
      acc = std::move(keep);
    }
  }
  if (!acc || acc->empty()) throw PromotionError("no loop downstream of the parents in every run of '" + family.label + "'");
  FixedSet fs;
  fs.label = family.label;
  fs.kind = FixedSetKind::meta;
  fs.parents = parent_ids;
  fs.loop_ids = std::move(*acc);
  return fs;
}

struct Match {
  FixedSetId id;
  double overlap;
  std::size_t matched;
};

/// Registered fixed sets ranked by the fraction of their loops triggered by
/// `s`. Ties go to the set with more matched loops, then the lower id.
inline std::vector<Match> classify_stimulus(const Network& net, const FixedSetRegistry& registry, const Stimulus& s,
                                            const DynParams& params, int horizon = kDefaultFixedSetHorizon) {
  if (registry.empty()) throw ContractError("classify needs a nonempty registry");
  const auto loops = enumerate_simple_cycles(net, params.max_loop_len);
  const auto hit = triggered_loops(run(net, {s}, params, horizon), net, loops, params);
  std::vector<Match> out;
  for (const auto& [id, fs] : registry.entries()) {
    std::size_t m = 0;
    for (const auto& l : fs.loop_ids) m += hit.count(l);
    out.push_back({id, static_cast<double>(m) / static_cast<double>(fs.loop_ids.size()), m});
  }
  std::stable_sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.matched != b.matched) return a.matched > b.matched;
    return a.id < b.id;
  });
  return out;
}

// ---- JSON -------------------------------------------------------------------

inline std::string loop_key(const LoopId& l) {
  std::string s;
  for (std::size_t i = 0; i < l.nodes.size(); ++i) {
    if (i) s += ">";
    s += l.nodes[i];
  }
  return s;
}

inline LoopId loop_from_key(const std::string& key) {
  LoopId l;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    auto next = key.find('>', pos);
    if (next == std::string::npos) next = key.size();
    l.nodes.push_back(key.substr(pos, next - pos));
    pos = next + 1;
  }
  return l;
}

inline nlohmann::json to_json(const FixedSetRegistry& reg) {
  nlohmann::json j;
  j["fixed_sets"] = nlohmann::json::array();
  for (const auto& [id, fs] : reg.entries()) {
    nlohmann::json e;
    e["id"] = id.value;
    e["label"] = fs.label;
    e["kind"] = to_string(fs.kind);
    e["loops"] = nlohmann::json::array();
    for (const auto& l : fs.loop_ids) e["loops"].push_back(loop_key(l));
    e["parents"] = nlohmann::json::array();
    for (const auto& p : fs.parents) e["parents"].push_back(p.value);
    j["fixed_sets"].push_back(std::move(e));
  }
  j["links"] = nlohmann::json::array();
  for (const auto& l : reg.links()) j["links"].push_back({{"a", l.a.value}, {"b", l.b.value}, {"weight", l.weight}});
  return j;
}

inline FixedSetRegistry registry_from_json(const nlohmann::json& j) {
  FixedSetRegistry reg;
  try {
    for (const auto& e : j.at("fixed_sets")) {
      FixedSet fs;
      fs.id = FixedSetId{e.at("id").get<std::uint32_t>()};
      fs.label = e.value("label", std::string{});
      const auto kind = e.value("kind", std::string{"direct"});
      if (kind != "direct" && kind != "meta") throw SchemaError("unknown fixed set kind " + kind);
      fs.kind = kind == "meta" ? FixedSetKind::meta : FixedSetKind::direct;
      for (const auto& l : e.at("loops")) fs.loop_ids.insert(loop_from_key(l.get<std::string>()));
      for (const auto& p : e.value("parents", nlohmann::json::array())) fs.parents.insert(FixedSetId{p.get<std::uint32_t>()});
      reg.insert(std::move(fs));
    }
    for (const auto& l : j.value("links", nlohmann::json::array()))
      reg.add_link(FixedSetId{l.at("a").get<std::uint32_t>()}, FixedSetId{l.at("b").get<std::uint32_t>()},
                   l.at("weight").get<double>());
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("registry: ") + ex.what());
  } catch (const ContractError& ex) {
    throw SchemaError(std::string("registry: ") + ex.what());
  }
  return reg;
}

}  // namespace spl
