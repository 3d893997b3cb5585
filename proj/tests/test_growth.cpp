#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spl/fixtures.hpp"
#include "spl/growth.hpp"

namespace {

using namespace spl;
using fixtures::ring_id;

TEST(ExtendLongitudinal, AddsMetaRingsDownstream) {
  const auto f = fixtures::fig3_promoted();
  const auto table = *f.registry.find_label("table");
  GrowthParams gp;
  gp.branch_factor = 3;
  gp.new_loop_len = 4;
  const auto g = extend_longitudinal(f.net, f.registry, table, gp);
  EXPECT_EQ(g.net.node_count(), f.net.node_count() + 12);
  ASSERT_EQ(g.added.size(), 3u);
  const auto loops = enumerate_simple_cycles(g.net);
  std::set<LoopId> all;
  for (const auto& l : loops) all.insert(l.id);
  for (auto id : g.added) {
    const auto& fs = g.registry.at(id);
    EXPECT_EQ(fs.kind, FixedSetKind::meta);
    EXPECT_EQ(fs.parents, std::set<FixedSetId>{table});
    ASSERT_EQ(fs.loop_ids.size(), 1u);
    EXPECT_EQ(fs.loop_ids.begin()->nodes.size(), 4u);
    EXPECT_TRUE(all.count(*fs.loop_ids.begin()));
  }
  // every original loop survives
  for (const auto& l : enumerate_simple_cycles(f.net)) EXPECT_TRUE(all.count(l.id));
  // attach nodes of table loops (L3a, L4a) feed each new ring
  const auto& first = *g.registry.at(g.added[0]).loop_ids.begin();
  bool fed = false;
  for (const auto& n : first.nodes) fed = fed || g.net.weight(g.net.index_of("L3a"), g.net.index_of(n)).has_value();
  EXPECT_TRUE(fed);
}

TEST(ExtendLongitudinal, RepeatedGrowthNeverCollides) {
  auto f = fixtures::fig3_promoted();
  const auto table = *f.registry.find_label("table");
  for (int k = 0; k < 3; ++k) {
    auto g = extend_longitudinal(f.net, f.registry, table, {});
    f.net = std::move(g.net);
    f.registry = std::move(g.registry);
  }
  EXPECT_EQ(f.registry.size(), 4u + 6u);
}

TEST(ExtendLongitudinal, GrownFig4Size) {
  const auto f = fixtures::fig4_grown(3);
  EXPECT_EQ(f.net.node_count(), 192u);
  EXPECT_EQ(f.registry.size(), 60u);
}

TEST(AssociateLateral, BidirectionalEdgesAndLink) {
  const auto f = fixtures::fig3_promoted();
  const auto t = *f.registry.find_label("table"), c = *f.registry.find_label("chair");
  const auto g = associate_lateral(f.net, f.registry, t, c, {});
  for (const char* a : {"L3a", "L4a"})
    for (const char* b : {"L5a", "L6a"}) {
      EXPECT_EQ(g.net.weight(g.net.index_of(a), g.net.index_of(b)), 1.0);
      EXPECT_EQ(g.net.weight(g.net.index_of(b), g.net.index_of(a)), 1.0);
    }
  EXPECT_EQ(g.registry.link_weight(t, c), 1.0);
  EXPECT_THROW(associate_lateral(f.net, f.registry, t, t, {}), ContractError);
}

bool table_triggers_chair(double link_weight) {
  const auto f = fixtures::fig4({}, 0.5, link_weight);
  const auto loops = enumerate_simple_cycles(f.net);
  const auto hit = triggered_loops(run(f.net, {fixtures::table_family().average}, {}, kDefaultFixedSetHorizon), f.net,
                                   loops, {});
  return hit.count(ring_id("L5")) && hit.count(ring_id("L6"));
}

TEST(AssociateLateral, TableRecallsChair) {
  EXPECT_TRUE(table_triggers_chair(1.0));
  EXPECT_FALSE(table_triggers_chair(0.0));
}

std::vector<int> random_train(std::mt19937_64& rng, int horizon, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<int> t;
  for (int s = 0; s < horizon; ++s)
    if (coin(rng)) t.push_back(s);
  return t;
}

TEST(Hebbian, CofiringCountMatchesOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_train(rng, 80, 0.05 + 0.01 * (trial % 30));
    const auto b = random_train(rng, 80, 0.05 + 0.01 * ((trial * 7) % 30));
    for (int w : {1, 2, 5}) EXPECT_EQ(cofiring_count(a, b, w), oracle::cofirings(a, b, w));
  }
}

TEST(Hebbian, UpdateFollowsCountsAndCap) {
  const auto net = fixtures::fig2();
  const auto tr = run(net, {fixtures::stim({"I1", "I2", "I3"})}, {}, 40);
  GrowthParams gp;
  gp.hebb_increment = 0.05;
  gp.coactivation_window = 2;
  gp.max_weight = 1.3;
  const auto after = hebbian_update(net, tr, gp);
  const auto ft = tr.fire_times();
  for (const auto& e : net.edges()) {
    const double w = *after.weight(e.src, e.dst);
    const auto c = oracle::cofirings(ft[e.src], ft[e.dst], 2);
    const double expect = c == 0 ? e.weight : std::max(e.weight, std::min(e.weight + 0.05 * c, 1.3));
    EXPECT_DOUBLE_EQ(w, expect);
    EXPECT_GE(w, e.weight);
  }
  EXPECT_THROW(hebbian_update(fixtures::fig3(), tr, gp), ContractError);
}

TEST(Prune, RemovesOnlyUntrainedPairs) {
  auto lf = fixtures::language_fixture();
  lf.graph.add_link({"pizza"}, "to");
  lf.graph.add_link({"like"}, "I");
  const auto trained_before = lf.graph.successors_of({"I"});
  const auto res = prune(lf.net, lf.registry, lf.graph, {fixtures::kScrambledSentence, {"qwerty", "pizza"}});
  EXPECT_TRUE(res.graph.successors_of({"pizza"}).count("to") == 0);
  EXPECT_TRUE(res.graph.successors_of({"like"}).count("I") == 0);
  EXPECT_EQ(res.graph.successors_of({"I"}), trained_before);
  EXPECT_EQ(res.removed.size(), 2u);
  ASSERT_EQ(res.skipped.size(), 1u);
  // every trained pair survives
  for (const auto& s : res.graph.training()) EXPECT_TRUE(is_abstractly_continuous(res.graph, s).continuous);
}

TEST(Prune, DropsLateralLinkOfPrunedPair) {
  auto lf = fixtures::language_fixture();
  const auto a = lf.graph.token_to_fixedset.at("pizza");
  const auto b = lf.graph.token_to_fixedset.at("to");
  ASSERT_NE(a, b);
  auto g = associate_lateral(lf.net, lf.registry, a, b, {});
  lf.graph.add_link({"pizza"}, "to");
  const auto res = prune(g.net, g.registry, lf.graph, {{"pizza", "to"}});
  EXPECT_FALSE(res.registry.link_weight(a, b));
  EXPECT_LT(res.net.edges().size(), g.net.edges().size());
}

TEST(Prune, ThresholdDropsWeakEdges) {
  auto lf = fixtures::language_fixture();
  auto spec = lf.net.to_spec();
  spec.edges.push_back({"Za", "Zc", 0.01});
  const auto net = build_network(spec);
  GrowthParams gp;
  gp.prune_threshold = 0.1;
  const auto res = prune(net, lf.registry, lf.graph, {}, gp);
  EXPECT_FALSE(res.net.weight(res.net.index_of("Za"), res.net.index_of("Zc")));
  EXPECT_EQ(res.net.node_count(), net.node_count());
}

TEST(GrowthLog, SerializesOps) {
  const std::vector<GrowthOp> log{{"extend", {FixedSetId{2}}, {FixedSetId{4}, FixedSetId{5}}},
                                  {"associate", {FixedSetId{2}, FixedSetId{3}}, {}}};
  const auto j = to_json(log);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["added"], nlohmann::json({4, 5}));
  EXPECT_EQ(j[1]["op"], "associate");
}

TEST(GrowthParams, Validation) {
  GrowthParams gp;
  gp.new_loop_len = 1;
  EXPECT_THROW(gp.validate(), ContractError);
  gp = {};
  gp.branch_factor = 0;
  EXPECT_THROW(gp.validate(), ContractError);
  gp = {};
  gp.max_weight = 0;
  EXPECT_THROW(gp.validate(), ContractError);
}

}  // namespace
