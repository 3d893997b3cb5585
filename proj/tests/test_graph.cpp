#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "spl/network.hpp"

namespace {

using spl::graph::Digraph;
using spl::graph::Vertex;

TEST(SimpleCycles, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const double p = 0.15 + 0.1 * (trial % 5);
    const auto g = oracle::random_digraph(n, p, rng);
    for (std::size_t max_len : {2ul, 3ul, n}) {
      const auto got = spl::graph::simple_cycles(g, max_len);
      std::set<std::vector<Vertex>> got_set(got.begin(), got.end());
      EXPECT_EQ(got_set.size(), got.size()) << "duplicate cycle reported";
      EXPECT_EQ(got_set, oracle::cycles(g, max_len)) << "trial " << trial << " max_len " << max_len;
    }
  }
}

TEST(SimpleCycles, CompleteGraphCount) {
  // K4 has 6 two-cycles, 8 three-cycles and 6 four-cycles
  Digraph g(4);
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = 0; v < 4; ++v)
      if (u != v) g.add_edge(u, v);
  EXPECT_EQ(spl::graph::simple_cycles(g, 4).size(), 20u);
  EXPECT_EQ(spl::graph::simple_cycles(g, 2).size(), 6u);
  EXPECT_TRUE(spl::graph::simple_cycles(g, 0).empty());
}

TEST(Scc, MatchesReachabilityOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const auto g = oracle::random_digraph(n, 0.05 + 0.05 * (trial % 6), rng);
    const auto r = spl::graph::strongly_connected_components(g);
    std::set<std::vector<Vertex>> got(r.components.begin(), r.components.end());
    EXPECT_EQ(got, oracle::scc(g)) << "trial " << trial;
    for (std::size_t c = 0; c < r.components.size(); ++c)
      for (auto v : r.components[c]) EXPECT_EQ(r.component_of[v], c);
    // sinks first: no edge leads into an earlier component
    for (Vertex u = 0; u < n; ++u)
      for (auto v : g.successors(u)) EXPECT_LE(r.component_of[v], r.component_of[u]);
  }
}

TEST(Scc, CyclicComponents) {
  Digraph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  g.add_edge(1, 2);
  g.add_edge(3, 3);
  EXPECT_TRUE(spl::graph::component_is_cyclic(g, {0, 1}));
  EXPECT_FALSE(spl::graph::component_is_cyclic(g, {2}));
  EXPECT_TRUE(spl::graph::component_is_cyclic(g, {3}));
}

TEST(LoopId, CanonicalIsRotationInvariant) {
  const std::vector<spl::NodeId> ring{"c", "a", "d", "b"};
  const auto id = spl::LoopId::canonical(ring);
  EXPECT_EQ(id.nodes.front(), "a");
  for (std::size_t r = 0; r < ring.size(); ++r) {
    auto rot = ring;
    std::rotate(rot.begin(), rot.begin() + static_cast<std::ptrdiff_t>(r), rot.end());
    EXPECT_EQ(spl::LoopId::canonical(rot), id);
  }
  auto rev = ring;
  std::reverse(rev.begin(), rev.end());
  EXPECT_NE(spl::LoopId::canonical(rev), id);
  EXPECT_EQ(id.str(), "(a,d,b,c)");
}

TEST(LoopId, RepeatedNamesPickSmallestRotation) {
  EXPECT_EQ(spl::LoopId::canonical({"b", "a", "b", "a", "a"}).nodes, (std::vector<spl::NodeId>{"a", "a", "b", "a", "b"}));
}

spl::NetworkSpec triangle_spec() {
  spl::NetworkSpec s;
  for (const char* n : {"a", "b", "c"}) s.nodes.push_back({n, {}});
  s.edges = {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "a", 1.0}, {"b", "a", 0.5}};
  s.input_surface = {"a"};
  s.output_surface = {"c"};
  return s;
}

TEST(Network, EnumeratesCanonicalLoops) {
  const auto net = spl::build_network(triangle_spec());
  const auto loops = spl::enumerate_simple_cycles(net, 8);
  ASSERT_EQ(loops.size(), 2u);
  EXPECT_EQ(loops[0].id.str(), "(a,b)");
  EXPECT_EQ(loops[1].id.str(), "(a,b,c)");
  for (const auto& l : loops)
    for (std::size_t i = 0; i < l.length(); ++i) EXPECT_EQ(net.id(l.nodes[i]), l.id.nodes[i]);
  EXPECT_THROW(spl::enumerate_simple_cycles(net, 1), spl::ContractError);
}

TEST(Network, RejectsMalformedSpecs) {
  auto dup = triangle_spec();
  dup.nodes.push_back({"a", {}});
  EXPECT_THROW(spl::build_network(dup), spl::SchemaError);
  auto unknown = triangle_spec();
  unknown.edges.push_back({"a", "zz", 1.0});
  EXPECT_THROW(spl::build_network(unknown), spl::SchemaError);
  auto self = triangle_spec();
  self.edges.push_back({"a", "a", 1.0});
  EXPECT_THROW(spl::build_network(self), spl::SchemaError);
  auto twice = triangle_spec();
  twice.edges.push_back({"a", "b", 2.0});
  EXPECT_THROW(spl::build_network(twice), spl::SchemaError);
  auto nan = triangle_spec();
  nan.edges[0].weight = std::nan("");
  EXPECT_THROW(spl::build_network(nan), spl::SchemaError);
  auto neg = triangle_spec();
  neg.nodes[0].params.refractory = -1;
  EXPECT_THROW(spl::build_network(neg), spl::SchemaError);
}

TEST(Network, JsonRoundTrip) {
  const auto spec = triangle_spec();
  const auto back = spl::network_spec_from_json(spl::to_json(spec));
  EXPECT_EQ(back, spec);
  EXPECT_EQ(spl::build_network(back).to_spec(), spec);
  EXPECT_THROW(spl::network_spec_from_json(nlohmann::json::array()), spl::SchemaError);
  EXPECT_THROW(spl::network_spec_from_json({{"edges", nlohmann::json::array()}}), spl::SchemaError);
}

TEST(Network, SccPartitionNamesNodes) {
  const auto net = spl::build_network(triangle_spec());
  const auto p = spl::strongly_connected_components(net);
  ASSERT_EQ(p.components.size(), 1u);
  EXPECT_EQ(p.components[0], (std::set<spl::NodeId>{"a", "b", "c"}));
}

}  // namespace
