#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/continuity.hpp"
#include "spl/fixedset.hpp"
#include "spl/membrane.hpp"

namespace spl {

struct KnowParams {
  std::set<std::size_t> orders{1, 2, 3};
  double required_coverage = 0.9;
};

enum class KnowCondition { membrane, continuity, intersection };

inline const char* to_string(KnowCondition c) {
  switch (c) {
    case KnowCondition::membrane: return "a:membrane";
    case KnowCondition::continuity: return "b:continuity";
    case KnowCondition::intersection: return "c:intersection";
  }
  return "?";
}

struct KnowVerdict {
  bool knows = false;
  std::vector<KnowCondition> failed;
  ContinuityVerdict continuity;
  /// Loops shared by the sequence's fixed sets and the membrane.
  std::set<LoopId> shared_loops;
};

/// Loops of every fixed set named by `ids`.
inline std::set<LoopId> loops_of(const FixedSetRegistry& registry, const std::set<FixedSetId>& ids) {
  std::set<LoopId> out;
  for (auto id : ids)
    if (registry.contains(id)) {
      const auto& l = registry.at(id).loop_ids;
      out.insert(l.begin(), l.end());
    }
  return out;
}

/// Fixed sets reached by the tokens of `seq` through the graph's word map.
inline std::set<FixedSetId> fixed_sets_of(const PredictionGraph& graph, const TokenSeq& seq) {
  std::set<FixedSetId> out;
  for (const auto& t : seq)
    if (auto it = graph.token_to_fixedset.find(t); it != graph.token_to_fixedset.end()) out.insert(it->second);
  return out;
}

/// True iff a membrane exists, the sequence is abstractly continuous, and
/// some token's fixed set shares a loop with the membrane's active sets.
/// Every condition is evaluated, so `failed` lists all that do not hold.
inline KnowVerdict knows(const std::optional<Membrane>& membrane, const PredictionGraph& graph,
                         const FixedSetRegistry& registry, const TokenSeq& seq, const KnowParams& params = {}) {
  KnowVerdict v;
  if (!membrane) v.failed.push_back(KnowCondition::membrane);
  v.continuity = is_abstractly_continuous(graph, seq, params.orders, params.required_coverage);
  if (!v.continuity.continuous) v.failed.push_back(KnowCondition::continuity);
  if (membrane) {
    const auto active = loops_of(registry, membrane->active_sets);
    for (const auto& l : loops_of(registry, fixed_sets_of(graph, seq)))
      if (active.count(l)) v.shared_loops.insert(l);
  }
  if (v.shared_loops.empty()) v.failed.push_back(KnowCondition::intersection);
  v.knows = v.failed.empty();
  return v;
}

inline nlohmann::json to_json(const KnowVerdict& v) {
  nlohmann::json j;
  j["knows"] = v.knows;
  j["failed"] = nlohmann::json::array();
  for (auto c : v.failed) j["failed"].push_back(to_string(c));
  j["continuity"] = to_json(v.continuity);
  j["shared_loops"] = v.shared_loops.size();
  return j;
}

}  // namespace spl
