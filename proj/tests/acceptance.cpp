// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "spl/spl.hpp"

namespace {

namespace fs = std::filesystem;
using namespace spl;
using fixtures::ring_id;

const fs::path kSource{SPL_SOURCE_DIR};

/// Collects failed checks for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    if (ok()) return notes_;
    std::string s = failures_.front();
    if (failures_.size() > 1) s += " (+" + std::to_string(failures_.size() - 1) + " more)";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// ---- 1 ---------------------------------------------------------------------------

void linked_loops_outlast_isolated(Checks& c) {
  LinkedLoopConfig cfg;
  cfg.replicates = 100;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = claim3_experiment(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(rep.median_ratio >= 1.2, "median ratio " + num(rep.median_ratio) + " < 1.2");
  c.expect(secs < 30.0, "took " + num(secs) + " s");
  c.note("linked " + num(rep.median_linked) + " vs isolated " + num(rep.median_isolated) + ", ratio " +
         num(rep.median_ratio) + ", " + num(secs) + " s");
}

// ---- 2 ---------------------------------------------------------------------------

void fig2_fixed_set(Checks& c) {
  const std::set<LoopId> want{ring_id("L1"), ring_id("L2")};
  auto fam = fixtures::fig2_family();
  std::sort(fam.variations.begin(), fam.variations.end(),
            [](const Stimulus& a, const Stimulus& b) { return a.pattern < b.pattern; });
  int perms = 0;
  do {
    const auto fs = extract_fixed_set(fixtures::fig2(), fam, {});
    c.expect(fs && fs->loop_ids == want, "permutation " + std::to_string(perms) + " differs");
    ++perms;
  } while (std::next_permutation(fam.variations.begin(), fam.variations.end(),
                                 [](const Stimulus& a, const Stimulus& b) { return a.pattern < b.pattern; }));
  c.note(std::to_string(perms) + " orderings yield {L1, L2}");
}

// ---- 3 ---------------------------------------------------------------------------

void fig3_discrimination(Checks& c) {
  const auto f = fixtures::fig3_promoted();
  const auto& table = f.registry.at(*f.registry.find_label("table"));
  const auto& chair = f.registry.at(*f.registry.find_label("chair"));
  c.expect(table.kind == FixedSetKind::meta && chair.kind == FixedSetKind::meta, "not meta");
  c.expect(table.loop_ids == std::set<LoopId>{ring_id("L3"), ring_id("L4")}, "table set differs");
  c.expect(chair.loop_ids == std::set<LoopId>{ring_id("L5"), ring_id("L6")}, "chair set differs");
  std::set<LoopId> both;
  std::set_intersection(table.loop_ids.begin(), table.loop_ids.end(), chair.loop_ids.begin(), chair.loop_ids.end(),
                        std::inserter(both, both.end()));
  c.expect(both.empty(), "meta sets intersect");
  const auto net = fixtures::fig3();
  const auto t = extract_fixed_set(net, fixtures::table_family(), {});
  const auto h = extract_fixed_set(net, fixtures::chair_family(), {});
  std::set<LoopId> shared;
  if (t && h)
    std::set_intersection(t->loop_ids.begin(), t->loop_ids.end(), h->loop_ids.begin(), h->loop_ids.end(),
                          std::inserter(shared, shared.end()));
  c.expect(shared == std::set<LoopId>{ring_id("L1"), ring_id("L2")}, "shared shallow loops differ");
  c.note("table {L3,L4}, chair {L5,L6}, shared {L1,L2}");
}

// ---- 4 ---------------------------------------------------------------------------

bool table_triggers_chair(double link_weight) {
  const auto f = fixtures::fig4({}, 0.5, link_weight);
  const auto hit = triggered_loops(run(f.net, {fixtures::table_family().average}, {}, kDefaultFixedSetHorizon), f.net,
                                   enumerate_simple_cycles(f.net), {});
  return hit.count(ring_id("L5")) && hit.count(ring_id("L6"));
}

void fig4_association(Checks& c) {
  c.expect(table_triggers_chair(1.0), "linked table does not trigger chair");
  c.expect(!table_triggers_chair(0.0), "unlinked table triggers chair");
  c.note("chair recalled with link, silent without");
}

// ---- 5 ---------------------------------------------------------------------------

void membrane_predicate(Checks& c) {
  const auto grown = fixtures::fig4_grown(3);
  const std::vector<Stimulus> drive{fixtures::table_family().average};
  MembraneConfig routed;
  routed.routing = fixtures::fig4_routing();
  const auto m = detect_membrane(grown.net, grown.registry, drive, {}, routed);
  c.expect(m.has_value(), "grown fig4 has no membrane");
  if (m) {
    c.expect(m->band == Band::gamma, std::string("band ") + to_string(m->band));
    c.expect(m->sustained_for >= default_min_sustain(grown.registry), "sustained too briefly");
  }
  c.expect(!detect_membrane(fixtures::scale_weights(grown.net, 0.2), grown.registry, drive, {}, routed),
           "anesthesia analog has a membrane");
  std::mt19937_64 rng(2024);
  std::size_t agree = 0, conscious = 0;
  for (int k = 0; k < 50; ++k) {
    const double scale = 0.2 + 0.1 * static_cast<double>(rng() % 11);
    const auto net = fixtures::scale_weights(grown.net, scale);
    DynParams p;
    p.seed = rng();
    p.noise_rate = rng() % 2 ? 0.0 : 0.02;
    p.initial_energy_min_fraction = 0.3 + 0.1 * static_cast<double>(rng() % 7);
    const auto cfg = rng() % 4 == 0 ? MembraneConfig{} : routed;
    const bool pred = is_minimally_conscious(net, grown.registry, drive, p, cfg).conscious;
    const bool det = detect_membrane(net, grown.registry, drive, p, cfg).has_value();
    agree += pred == det;
    conscious += pred;
  }
  c.expect(agree == 50, "predicate disagrees on " + std::to_string(50 - agree) + " scenarios");
  if (m) c.note("rate " + num(m->rate) + ", sustained " + std::to_string(m->sustained_for));
  c.note("50/50 agree (" + std::to_string(conscious) + " conscious)");
}

// ---- 6 ---------------------------------------------------------------------------

void continuity_pair(Checks& c) {
  std::ifstream in(kSource / "fixtures" / "pizza_corpus.txt");
  c.expect(static_cast<bool>(in), "shipped corpus missing");
  const auto corpus = read_corpus(in);
  const auto g = build_prediction_graph(corpus, 3);
  const auto ok = is_abstractly_continuous(g, fixtures::kPizzaSentence);
  c.expect(ok.continuous, "pizza sentence discontinuous");
  const auto bad = is_abstractly_continuous(g, fixtures::kScrambledSentence);
  c.expect(!bad.continuous, "scrambled sentence continuous");
  c.expect(bad.first_break && bad.first_break->context == Context{"pizza", "to"}, "first break is not (pizza, to)");
  for (const auto& s : corpus) {
    const auto v = is_abstractly_continuous(g, s);
    c.expect(v.continuous && v.coverage == 1.0, "training sentence '" + join(s) + "' not fully covered");
  }
  c.note(std::to_string(corpus.size()) + " training sentences at coverage 1");
}

// ---- 7 ---------------------------------------------------------------------------

void knowing_toggles(Checks& c) {
  const auto lf = fixtures::language_fixture();
  const auto m = detect_membrane(lf.net, lf.registry, lf.drive, {}, lf.membrane_config);
  c.expect(m.has_value(), "language fixture has no membrane");
  if (!m) return;
  auto detached = lf.graph;
  for (auto& [w, id] : detached.token_to_fixedset) id = lf.dormant;
  for (int mask = 0; mask < 8; ++mask) {
    const bool mem = mask & 1, cont = mask & 2, inter = mask & 4;
    const auto v = knows(mem ? m : std::nullopt, inter ? lf.graph : detached, lf.registry,
                         cont ? fixtures::kPizzaSentence : fixtures::kScrambledSentence);
    c.expect(v.knows == (mem && cont && inter), "mask " + std::to_string(mask));
  }
  c.note("true only with membrane, continuity and intersection");
}

// ---- 8 ---------------------------------------------------------------------------

void physical_ordering(Checks& c) {
  const std::vector<std::pair<std::string, physical::TrackBlueprint>> designs{
      {"b", physical::design_b()}, {"c", physical::design_c()}, {"d", physical::design_d()}};
  const std::size_t seeds = 50;
  double worst_audit = 0;
  for (const auto& setting : physical::burst_grid()) {
    physical::TrackSimParams sim;
    sim.energy_burst_rate = setting.rate;
    sim.burst_magnitude = setting.magnitude;
    std::vector<double> med;
    for (const auto& [name, bp] : designs) {
      std::vector<double> sustain(seeds), audit(seeds);
      parallel_for(seeds, [&](std::size_t s) {
        auto p = sim;
        p.seed = s;
        const auto tr = physical::simulate_track(bp, p);
        sustain[s] = physical::spl_test(tr, bp).sustain_time;
        audit[s] = tr.max_audit_error;
      });
      worst_audit = std::max(worst_audit, *std::max_element(audit.begin(), audit.end()));
      med.push_back(stats::median(sustain));
    }
    const std::string tag = "rate " + num(setting.rate) + " mag " + num(setting.magnitude);
    c.expect(med[0] <= med[1] && med[1] <= med[2] && med[0] < med[2],
             tag + ": b " + num(med[0]) + " c " + num(med[1]) + " d " + num(med[2]));
    c.note(tag + ": " + num(med[0]) + " <= " + num(med[1]) + " <= " + num(med[2]));
  }
  c.expect(worst_audit < 1e-9, "audit error " + num(worst_audit));
  c.note("max audit " + num(worst_audit));
}

// ---- 9 ---------------------------------------------------------------------------

void chemical_mapping(Checks& c) {
  const auto net = chemical::map_physical_to_chemical(chemical::three_level_blueprint());
  std::size_t species = 0, enzymes = 0;
  for (const auto& s : net.species) (s.enzyme ? enzymes : species)++;
  c.expect(species == 3 && enzymes == 3, std::to_string(species) + " species, " + std::to_string(enzymes) + " enzymes");
  auto level = [&](const std::string& id) {
    const auto i = net.index_of(id);
    return i ? net.species[*i].energy_level : std::nan("");
  };
  c.expect(level("M1") > level("M2") && level("M2") > level("M3"), "levels not ordered");
  const auto gen = chemical::generator_sets(chemical::three_by_four());
  c.expect(gen.total_count == 64, "generator count " + std::to_string(gen.total_count));
  c.note("3 species + 3 enzymes, 64 generator sets");
}

// ---- 10 --------------------------------------------------------------------------

void persistence_and_ctmc(Checks& c) {
  const auto rep = chemical::persistence_experiment(chemical::m1m2m3_loop(), chemical::m1m2m3_chain(), {50.0, 0, 0.0}, 100);
  c.expect(rep.survival_loop > rep.survival_chain,
           "loop " + num(rep.survival_loop) + " not above chain " + num(rep.survival_chain));

  using chemical::Direction;
  chemical::ReactionNetwork net;
  net.energy_limited = false;
  net.species = {{"A", 0, 5, false}, {"B", 0, 1, false}, {"C", 0, 0, false}};
  net.reactions = {{{{"A", 1}}, {{"B", 1}}, std::nullopt, 0.0, Direction::downhill, 0.8},
                   {{{"B", 1}}, {{"C", 1}}, std::nullopt, 0.0, Direction::downhill, 0.5},
                   {{{"C", 1}}, {{"A", 1}}, std::nullopt, 1.0, Direction::uphill, 0.3}};
  net.decay["B"] = 0.1;
  const double horizon = 3.0;
  const auto exact = oracle::ctmc_distribution({5, 1, 0}, {{0, 1, 0.8}, {1, 2, 0.5}, {2, 0, 0.3}, {1, -1, 0.1}}, horizon);
  std::vector<double> mean(3, 0.0), sq(3, 0.0);
  double p_alive = 0;
  for (const auto& [x, p] : exact) {
    for (std::size_t i = 0; i < 3; ++i) {
      mean[i] += p * static_cast<double>(x[i]);
      sq[i] += p * static_cast<double>(x[i] * x[i]);
    }
    if (x[0] > 0 && x[1] > 0 && x[2] > 0) p_alive += p;
  }
  const std::size_t runs = 10000;
  std::vector<double> sum(3, 0.0);
  double alive = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto tr = chemical::simulate_reactions(net, {horizon, 1000 + r, 0.0});
    for (std::size_t i = 0; i < 3; ++i) sum[i] += static_cast<double>(tr.final_counts[i]);
    alive += chemical::all_tracked_present(net, tr.final_counts);
  }
  const double n = static_cast<double>(runs);
  double worst = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double se = std::sqrt((sq[i] - mean[i] * mean[i]) / n);
    worst = std::max(worst, std::abs(sum[i] / n - mean[i]) / se);
  }
  worst = std::max(worst, std::abs(alive / n - p_alive) / std::sqrt(p_alive * (1 - p_alive) / n));
  c.expect(worst <= 3.0, "CTMC deviation " + num(worst) + " SE");
  c.note("survival loop " + num(rep.survival_loop) + " vs chain " + num(rep.survival_chain) + "; CTMC within " +
         num(worst) + " SE");
}

// ---- 11 --------------------------------------------------------------------------

void split_regeneration(Checks& c) {
  const auto net = chemical::m1m2m3_loop();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rep = chemical::split_regeneration_test(net, {50.0, 0, 0.0}, seed);
    c.expect(rep.part_a_regenerates && rep.part_b_regenerates, "split " + std::to_string(seed) + " fails");
  }
  std::vector<chemical::Count> all(net.species.size(), 0), none(net.species.size(), 0);
  for (auto i : net.tracked()) all[i] = 10;
  const auto adv = chemical::split_regeneration_test(net, {50.0, 0, 0.0}, all, none);
  c.expect(!adv.part_b_regenerates, "empty half regenerates");
  c.expect(adv.part_b_regenerates == adv.part_b_covers && adv.part_a_regenerates == adv.part_a_covers,
           "coverage does not predict regeneration");
  c.note("20 fair splits regenerate; empty half fails as predicted");
}

// ---- 12 --------------------------------------------------------------------------

void oracle_equivalences(Checks& c) {
  std::mt19937_64 rng(99);
  std::size_t instances = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto g = oracle::random_digraph(n, 0.1 + 0.1 * (trial % 5), rng);
    for (std::size_t max_len : {2ul, 3ul, n}) {
      const auto got = graph::simple_cycles(g, max_len);
      c.expect(std::set<std::vector<graph::Vertex>>(got.begin(), got.end()) == oracle::cycles(g, max_len) &&
                   got.size() == oracle::cycles(g, max_len).size(),
               "cycles trial " + std::to_string(trial));
      ++instances;
    }
    const auto scc = graph::strongly_connected_components(g);
    c.expect(std::set<std::vector<graph::Vertex>>(scc.components.begin(), scc.components.end()) == oracle::scc(g),
             "scc trial " + std::to_string(trial));
    ++instances;
  }
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<TokenSeq> corpus;
    for (int s = 0; s < 1 + trial % 10; ++s) {
      TokenSeq seq;
      for (std::size_t i = 0, len = 1 + rng() % 6; i < len; ++i) seq.push_back("w" + std::to_string(rng() % 5));
      corpus.push_back(seq);
    }
    for (std::size_t order : {1ul, 2ul, 3ul}) {
      c.expect(build_prediction_graph(corpus, order).successors() ==
                   oracle::ngram_successors(corpus, order, kSentenceStart),
               "n-gram trial " + std::to_string(trial));
      ++instances;
    }
  }
  std::bernoulli_distribution coin(0.1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> a, b;
    for (int t = 0; t < 100; ++t) {
      if (coin(rng)) a.push_back(t);
      if (coin(rng)) b.push_back(t);
    }
    for (int w : {1, 3}) {
      c.expect(cofiring_count(a, b, w) == oracle::cofirings(a, b, w), "cofiring trial " + std::to_string(trial));
      ++instances;
    }
  }
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    std::vector<std::size_t> sizes;
    for (std::size_t left = n; left > 0;) {
      std::size_t s = left < 4 ? left : 2 + rng() % (left - 1);
      if (left - s == 1) ++s;
      sizes.push_back(s);
      left -= s;
    }
    chemical::ReactionNetwork net;
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> rx;
    std::size_t base = 0;
    for (auto size : sizes) {
      for (std::size_t i = 0; i < size; ++i) net.species.push_back({"X" + std::to_string(base + i), 0.0, 1, false});
      auto add = [&](std::size_t a, std::size_t b) {
        net.reactions.push_back({{{"X" + std::to_string(base + a), 1}}, {{"X" + std::to_string(base + b), 1}}, std::nullopt});
        rx.push_back({{base + a}, {base + b}});
      };
      for (std::size_t i = 0; i < size; ++i) add(i, (i + 1) % size);
      const std::size_t a = rng() % size, b = rng() % size;
      if (a != b) add(a, b);
      base += size;
    }
    c.expect(chemical::generator_sets(net).total_count == oracle::minimal_generators(n, rx),
             "generator trial " + std::to_string(trial));
    ++instances;
  }
  c.note(std::to_string(instances) + " instances match");
}

// ---- 13 --------------------------------------------------------------------------

void determinism(Checks& c) {
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(kSource / "fixtures" / "scenarios"))
    if (e.path().extension() == ".json") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    auto s = load_scenario(p);
    apply_overrides(s, {std::nullopt, std::min<std::size_t>(s.replicates, 3), std::nullopt, std::nullopt});
    const auto a = run_experiment(s), b = run_experiment(s);
    for (auto f : {MetricsFormat::json, MetricsFormat::csv})
      c.expect(render_metrics(a, f) == render_metrics(b, f), p.filename().string() + " differs as " + to_string(f));
  }
  c.note(std::to_string(paths.size()) + " scenarios byte-identical");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Checks&)>>> criteria{
      {"linked loops outlast isolated loops", linked_loops_outlast_isolated},
      {"fig2 fixed set is {L1, L2}", fig2_fixed_set},
      {"fig3 table and chair meta sets", fig3_discrimination},
      {"fig4 lateral association", fig4_association},
      {"membrane predicate", membrane_predicate},
      {"continuity pair", continuity_pair},
      {"knows toggles", knowing_toggles},
      {"physical design ordering", physical_ordering},
      {"chemical mapping arithmetic", chemical_mapping},
      {"loop persistence and CTMC oracle", persistence_and_ctmc},
      {"split regeneration", split_regeneration},
      {"oracle equivalences", oracle_equivalences},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !c.ok();
    std::printf("%s %2zu %s (%.1f s): %s\n", c.ok() ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                c.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
