#include <gtest/gtest.h>

#include <sstream>

#include "spl/physical.hpp"

namespace {

using namespace spl::physical;

TrackSimParams short_sim(std::uint64_t seed, double horizon = 200.0) {
  TrackSimParams p;
  p.seed = seed;
  p.horizon = horizon;
  return p;
}

TEST(Operators, AddValleysAtHalfDepth) {
  const auto b = design_b();
  const auto c = add_valleys(b, 3);
  ASSERT_EQ(c.segments().size(), 5u);
  std::size_t fresh = 0;
  for (const auto& f : c.segments())
    if (f.kind == FeatureKind::valley && f.value == 0.5) ++fresh;
  EXPECT_EQ(fresh, 3u);
  EXPECT_EQ(c.segments().front(), b.segments().front());
  EXPECT_THROW(add_valleys(b, 0), spl::ContractError);
}

TEST(Operators, ValleyToLoop) {
  const auto c = design_c();
  const auto d = all_valleys_to_loops(c);
  for (std::size_t i = 0; i < c.segments().size(); ++i) {
    if (c.segments()[i].kind == FeatureKind::valley) {
      EXPECT_EQ(d.segments()[i].kind, FeatureKind::loop);
      EXPECT_EQ(d.segments()[i].value, c.segments()[i].value);
      EXPECT_EQ(d.segments()[i].loop_friction, kLubricatedFriction);
    } else {
      EXPECT_EQ(d.segments()[i], c.segments()[i]);
    }
  }
  EXPECT_EQ(d, design_d());
  EXPECT_THROW(valley_to_loop(c, 0), spl::ContractError);  // a hill
  EXPECT_THROW(valley_to_loop(c, 99), spl::ContractError);
}

TEST(Operators, CycleCounts) {
  EXPECT_EQ(design_b().cycle_count(), 1u);
  EXPECT_EQ(design_c().cycle_count(), 1u);
  EXPECT_EQ(design_d().cycle_count(), 5u);
}

TEST(Operators, MergeAndLink) {
  const auto m = merge_blueprints(design_b(), design_c(), {{0, 1}});
  EXPECT_EQ(m.rings.size(), 2u);
  EXPECT_EQ(m.n_balls, 8u);
  ASSERT_EQ(m.junctions.size(), 1u);
  EXPECT_FALSE(m.junctions[0].directed);
  EXPECT_THROW(merge_blueprints(design_b(), design_b(), {{0, 0}}), spl::ContractError);
  EXPECT_THROW(merge_blueprints(design_b(), design_c(), {}), spl::ContractError);
  EXPECT_THROW(merge_blueprints(design_b(), design_c(), {{7, 0}}), spl::ContractError);
  const auto l = link_blueprints(design_b(), design_b(), {1, 0});
  ASSERT_EQ(l.junctions.size(), 1u);
  EXPECT_TRUE(l.junctions[0].directed);
  EXPECT_EQ(l.cycle_count(), 2u);
}

TEST(Simulation, EnergyAuditHolds) {
  for (const auto& bp : {design_b(), design_c(), design_d(), merge_blueprints(design_c(), design_d(), {{0, 0}, {2, 3}})}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto p = short_sim(seed);
      p.energy_burst_rate = 0.2;
      const auto tr = simulate_track(bp, p);
      EXPECT_LT(tr.max_audit_error, 1e-9);
      const double balance =
          tr.initial_energy + tr.burst_input - tr.friction_loss - tr.collision_loss - tr.final_energy;
      EXPECT_NEAR(balance, 0.0, 1e-9 * static_cast<double>(tr.steps));
      EXPECT_GE(tr.friction_loss, 0.0);
      EXPECT_GE(tr.collision_loss, 0.0);
    }
  }
}

TEST(Simulation, DeterministicPerSeed) {
  const auto a = simulate_track(design_d(), short_sim(5));
  const auto b = simulate_track(design_d(), short_sim(5));
  EXPECT_EQ(a, b);
  EXPECT_NE(simulate_track(design_d(), short_sim(6)), a);
}

TEST(Simulation, AtRestWithoutBurstsStaysAtRest) {
  auto p = short_sim(1);
  p.energy_burst_rate = 0.0;
  const auto tr = simulate_track(design_b(), p);
  EXPECT_EQ(tr.moving_time, 0.0);
  EXPECT_EQ(tr.bursts, 0u);
  EXPECT_FALSE(spl_test(tr, design_b()).is_spl);
}

TEST(Simulation, JunctionsTransferBalls) {
  const auto m = merge_blueprints(design_b(), design_c(), {{0, 0}, {1, 2}});
  auto p = short_sim(2, 400.0);
  p.energy_burst_rate = 0.2;
  p.burst_magnitude = 0.8;
  const auto tr = simulate_track(m, p);
  EXPECT_FALSE(tr.transfers.empty());
  EXPECT_LT(tr.max_audit_error, 1e-9);
  for (const auto& t : tr.transfers) EXPECT_NE(t.from_ring, t.to_ring);
}

TEST(SplTest, LoopedDesignQualifies) {
  const auto bp = design_d();
  const auto v = spl_test(simulate_track(bp, short_sim(0, 1000.0)), bp);
  EXPECT_TRUE(v.is_spl);
  EXPECT_TRUE(v.recurring);
  EXPECT_TRUE(v.stable);
  EXPECT_TRUE(v.interacting);
  EXPECT_FALSE(v.b_waived);
  EXPECT_GE(v.ratio, kLongevityFactor);
}

TEST(SplTest, SingleCycleWaivesInteraction) {
  const auto bp = design_b();
  const auto v = spl_test(simulate_track(bp, short_sim(0, 500.0)), bp);
  EXPECT_TRUE(v.b_waived);
  EXPECT_FALSE(v.interacting);
}

TEST(Autocorrelation, RecoversPeriod) {
  std::vector<double> events;
  for (double t = 0.3; t < 500.0; t += 5.0) events.push_back(t);
  EXPECT_NEAR(autocorrelation_period(events, 500.0, 0.01), 5.0, 0.15);
  EXPECT_EQ(autocorrelation_period({1.0, 2.0}, 500.0, 0.01), 0.0);
}

TEST(Json, BlueprintRoundTrip) {
  for (const auto& bp : {design_b(), design_d(), merge_blueprints(design_b(), design_c(), {{0, 1}})})
    EXPECT_EQ(blueprint_from_json(to_json(bp)), bp);
  EXPECT_THROW(blueprint_from_json({{"segments", {{{"kind", "cliff"}, {"value", 1.0}}}}}), spl::SchemaError);
  EXPECT_THROW(blueprint_from_json({{"segments", nlohmann::json::array()}}), spl::SchemaError);
}

TEST(Csv, SamplesHaveHeader) {
  std::ostringstream out;
  write_csv(out, simulate_track(design_b(), short_sim(0, 20.0)));
  EXPECT_EQ(out.str().rfind("time,ball,ring,position,speed,energy\n", 0), 0u);
}

TEST(Params, Validation) {
  TrackSimParams p;
  p.step_dt = 0;
  EXPECT_THROW(simulate_track(design_b(), p), spl::ContractError);
}

}  // namespace
