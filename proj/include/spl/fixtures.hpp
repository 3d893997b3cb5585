#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spl/dynamics.hpp"
#include "spl/fixedset.hpp"
#include "spl/continuity.hpp"
#include "spl/growth.hpp"
#include "spl/membrane.hpp"
#include "spl/network.hpp"

/// Small hand-built networks used by the tests, the examples and the CLI.
namespace spl::fixtures {

inline NodeParams input_params() {
  NodeParams p;
  p.refractory = 0;
  return p;
}

/// Loop nodes fire at most every third step and recharge fast enough to run
/// indefinitely under period-3 activity.
inline NodeParams loop_params(double recharge = 0.5) {
  NodeParams p;
  p.refractory = 2;
  p.energy_recharge_rate = recharge;
  return p;
}

inline void add_ring(NetworkSpec& s, const std::string& name, std::size_t len, const NodeParams& p, double w = 1.0) {
  for (std::size_t i = 0; i < len; ++i) s.nodes.push_back({name + static_cast<char>('a' + i), p});
  for (std::size_t i = 0; i < len; ++i)
    s.edges.push_back({name + static_cast<char>('a' + i), name + static_cast<char>('a' + (i + 1) % len), w});
}

inline LoopId ring_id(const std::string& name, std::size_t len = 3) {
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < len; ++i) ids.push_back(name + static_cast<char>('a' + i));
  return LoopId::canonical(ids);
}

inline Stimulus stim(const std::vector<NodeId>& nodes, int duration = 1, double value = 1.0) {
  Stimulus s;
  for (const auto& n : nodes) s.pattern[n] = value;
  s.duration = duration;
  return s;
}

inline std::string input(int i) { return "I" + std::to_string(i); }

/// Inputs I1..I5 all project into rings L1 and L2 (two coincident inputs
/// are needed). Ring X1 hangs off I1 alone and ring X5 off I5 alone.
inline NetworkSpec fig2_spec(double recharge = 0.5) {
  NetworkSpec s;
  for (int i = 1; i <= 5; ++i) {
    s.nodes.push_back({input(i), input_params()});
    s.input_surface.push_back(input(i));
  }
  for (const char* r : {"L1", "L2", "X1", "X5"}) add_ring(s, r, 3, loop_params(recharge));
  for (int i = 1; i <= 5; ++i) {
    s.edges.push_back({input(i), "L1a", 0.5});
    s.edges.push_back({input(i), "L2a", 0.5});
  }
  s.edges.push_back({"I1", "X1a", 1.0});
  s.edges.push_back({"I5", "X5a", 1.0});
  s.output_surface = {"L1c", "L2c"};
  return s;
}

inline Network fig2(double recharge = 0.5) { return build_network(fig2_spec(recharge)); }

/// Average view plus two translated views.
inline StimulusFamily fig2_family() {
  return {stim({"I1", "I2", "I3"}), {stim({"I2", "I3", "I4"}), stim({"I3", "I4", "I5"})}, "object"};
}

/// Inputs I1..I3 carry table features, I4..I6 chair features. Edge loop L1
/// and angle loop L2 respond to any two inputs. Table loops L3 and L4 need
/// their parent loop plus a table feature; chair loops L5 and L6 likewise.
inline NetworkSpec fig3_spec(double recharge = 0.5) {
  NetworkSpec s;
  for (int i = 1; i <= 6; ++i) {
    s.nodes.push_back({input(i), input_params()});
    s.input_surface.push_back(input(i));
  }
  for (const char* r : {"L1", "L2", "L3", "L4", "L5", "L6"}) add_ring(s, r, 3, loop_params(recharge));
  for (int i = 1; i <= 6; ++i) {
    s.edges.push_back({input(i), "L1a", 0.5});
    s.edges.push_back({input(i), "L2a", 0.5});
  }
  s.edges.push_back({"L1c", "L3a", 0.6});
  s.edges.push_back({"L2c", "L4a", 0.6});
  s.edges.push_back({"L1c", "L5a", 0.6});
  s.edges.push_back({"L2c", "L6a", 0.6});
  for (int i = 1; i <= 3; ++i) {
    s.edges.push_back({input(i), "L3a", 0.25});
    s.edges.push_back({input(i), "L4a", 0.25});
    s.edges.push_back({input(i + 3), "L5a", 0.25});
    s.edges.push_back({input(i + 3), "L6a", 0.25});
  }
  s.output_surface = {"L3c", "L5c"};
  return s;
}

inline Network fig3(double recharge = 0.5) { return build_network(fig3_spec(recharge)); }

/// Feature stimuli are held for four steps so they overlap the parent loops'
/// first completion.
inline constexpr int kFeatureDuration = 4;

inline StimulusFamily table_family() {
  return {stim({"I1", "I2", "I3"}, kFeatureDuration),
          {stim({"I1", "I2"}, kFeatureDuration), stim({"I2", "I3"}, kFeatureDuration)},
          "table"};
}

inline StimulusFamily chair_family() {
  return {stim({"I4", "I5", "I6"}, kFeatureDuration),
          {stim({"I4", "I5"}, kFeatureDuration), stim({"I5", "I6"}, kFeatureDuration)},
          "chair"};
}

/// A table view not seen during promotion.
inline Stimulus unseen_table_view() { return stim({"I1", "I3"}, kFeatureDuration); }

struct Fixture {
  Network net;
  FixedSetRegistry registry;
};

/// fig3 with the edge and angle fixed sets registered as direct sets.
inline Fixture fig3_with_parents(double recharge = 0.5) {
  Fixture f{fig3(recharge), {}};
  f.registry.add({{}, "edge", {ring_id("L1")}, FixedSetKind::direct, {}});
  f.registry.add({{}, "angle", {ring_id("L2")}, FixedSetKind::direct, {}});
  return f;
}

/// fig3 with table and chair promoted as meta fixed sets over edge and angle.
inline Fixture fig3_promoted(const DynParams& params = {}, double recharge = 0.5) {
  auto f = fig3_with_parents(recharge);
  const std::set<FixedSetId> parents{FixedSetId{0}, FixedSetId{1}};
  f.registry.add(promote_meta_fixed_set(f.registry, parents, f.net, table_family(), params));
  f.registry.add(promote_meta_fixed_set(f.registry, parents, f.net, chair_family(), params));
  return f;
}

/// fig3 plus a lateral table-chair association.
inline Fixture fig4(const DynParams& params = {}, double recharge = 0.5, double link_weight = 1.0) {
  auto f = fig3_promoted(params, recharge);
  GrowthParams gp;
  gp.link_weight = link_weight;
  auto g = associate_lateral(f.net, f.registry, *f.registry.find_label("table"), *f.registry.find_label("chair"), gp);
  return {std::move(g.net), std::move(g.registry)};
}

/// fig4 after `rounds` rounds of longitudinal growth, each extending every
/// fixed set added in the previous round (the first round extends them all).
inline Fixture fig4_grown(int rounds = 3, const DynParams& params = {}, double recharge = 0.5) {
  auto f = fig4(params, recharge);
  GrowthParams gp;
  gp.branch_factor = 2;
  std::vector<FixedSetId> frontier;
  for (const auto& [id, fs] : f.registry.entries()) frontier.push_back(id);
  for (int r = 0; r < rounds; ++r) {
    std::vector<FixedSetId> next;
    for (auto id : frontier) {
      auto g = extend_longitudinal(f.net, f.registry, id, gp);
      f.net = std::move(g.net);
      f.registry = std::move(g.registry);
      next.insert(next.end(), g.added.begin(), g.added.end());
    }
    frontier = std::move(next);
  }
  return f;
}

/// Output T-loop tail feeds back into two table inputs.
inline std::vector<FeedbackRoute> fig4_routing() { return {{"L3c", "I1", 1.0}, {"L3c", "I2", 1.0}}; }

/// Multiplies every edge weight by `factor`.
inline Network scale_weights(const Network& net, double factor) {
  auto spec = net.to_spec();
  for (auto& e : spec.edges) e.weight *= factor;
  return build_network(spec);
}

/// `base` with the fixed set extracted from `family` registered, after
/// `rounds` rounds of growth. A round extends every fixed set on the frontier
/// and then associates consecutive pairs of the newly grown sets.
inline Fixture grow_from(const Network& base, const StimulusFamily& family, int rounds, const DynParams& params = {},
                         const GrowthParams& gp = {}) {
  if (rounds < 0) throw ContractError("rounds must be >= 0");
  Fixture f{base, {}};
  auto fs = extract_fixed_set(f.net, family, params);
  if (!fs) throw ContractError("stimulus family '" + family.label + "' produced no fixed set");
  std::vector<FixedSetId> frontier{f.registry.add(*fs)};
  for (int r = 0; r < rounds; ++r) {
    std::vector<FixedSetId> next;
    for (auto id : frontier) {
      auto g = extend_longitudinal(f.net, f.registry, id, gp);
      f.net = std::move(g.net);
      f.registry = std::move(g.registry);
      next.insert(next.end(), g.added.begin(), g.added.end());
    }
    for (std::size_t i = 0; i + 1 < next.size(); i += 2) {
      auto g = associate_lateral(f.net, f.registry, next[i], next[i + 1], gp);
      f.net = std::move(g.net);
      f.registry = std::move(g.registry);
    }
    frontier = std::move(next);
  }
  return f;
}

inline Fixture fig2_grown(int rounds, const DynParams& params = {}, double recharge = 0.5) {
  return grow_from(fig2(recharge), fig2_family(), rounds, params);
}

// ---- language ---------------------------------------------------------------

inline constexpr const char* kPizzaCorpus =
    "I like to eat pizza tonight\n"
    "I want to eat pasta today\n"
    "I am hungry tonight\n"
    "I like to read books\n"
    "pizza is my favorite food\n"
    "pizza has cheese and tomato\n"
    "we like to cook dinner together\n"
    "you want to eat pizza now\n"
    "my friend likes pizza with olives\n"
    "the pizza is hot and fresh\n"
    "she wants to watch a movie tonight\n"
    "we eat dinner at home\n"
    "they like to play football on sunday\n"
    "the movie starts at eight\n"
    "I am going to the market today\n"
    "he bought fresh bread and milk\n"
    "the market sells fruit and vegetables\n"
    "children like to play in the park\n"
    "the park is green in spring\n"
    "we walk to school every morning\n"
    "my sister plays the piano well\n"
    "the teacher reads a story aloud\n"
    "dogs bark at night\n"
    "cats sleep during the day\n";

inline std::vector<TokenSeq> pizza_corpus() {
  std::istringstream in(kPizzaCorpus);
  return read_corpus(in);
}

inline const TokenSeq kPizzaSentence{"I", "like", "to", "eat", "pizza", "tonight"};
inline const TokenSeq kScrambledSentence{"pizza", "to", "like", "I", "tonight", "eat"};

/// The grown fig4 membrane plus a dormant ring that no stimulus reaches, and
/// a prediction graph over the pizza corpus whose words map round-robin onto
/// the grown fixed sets (the dormant set gets no word).
struct LanguageFixture {
  Network net;
  FixedSetRegistry registry;
  FixedSetId dormant;
  PredictionGraph graph;
  std::vector<Stimulus> drive;
  MembraneConfig membrane_config;
};

inline LanguageFixture language_fixture() {
  auto grown = fig4_grown(3);
  LanguageFixture lf;
  auto spec = grown.net.to_spec();
  add_ring(spec, "Z", 3, loop_params());
  lf.net = build_network(spec);
  lf.registry = grown.registry;
  std::vector<FixedSetId> ids;
  for (const auto& [id, fs] : lf.registry.entries()) ids.push_back(id);
  lf.dormant = lf.registry.add({{}, "dormant", {ring_id("Z")}, FixedSetKind::direct, {}});
  lf.graph = build_prediction_graph(pizza_corpus(), 3);
  std::size_t k = 0;
  for (const auto& w : lf.graph.vocabulary()) lf.graph.token_to_fixedset[w] = ids[k++ % ids.size()];
  lf.drive = {table_family().average};
  lf.membrane_config.routing = fig4_routing();
  return lf;
}

}  // namespace spl::fixtures
