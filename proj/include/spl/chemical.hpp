#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/error.hpp"
#include "spl/graph.hpp"
#include "spl/parallel.hpp"
#include "spl/physical.hpp"

namespace spl::chemical {

using SpeciesId = std::string;
using Count = std::int64_t;

struct Species {
  SpeciesId id;
  double energy_level = 0.0;
  Count initial_count = 0;
  /// Enzymes gate reactions by presence and are never consumed.
  bool enzyme = false;

  bool operator==(const Species&) const = default;
};

enum class Direction { downhill, uphill };

inline const char* to_string(Direction d) { return d == Direction::downhill ? "downhill" : "uphill"; }

struct Reaction {
  std::map<SpeciesId, int> reactants;
  std::map<SpeciesId, int> products;
  std::optional<SpeciesId> enzyme;
  double activation_energy = 0.0;
  Direction direction = Direction::downhill;
  double rate_constant = 1.0;

  bool operator==(const Reaction&) const = default;
};

struct ReactionNetwork {
  std::vector<Species> species;
  std::vector<Reaction> reactions;
  /// External energy delivered per unit time; uphill reactions draw their
  /// activation energy from a reservoir fed at this rate.
  double energy_supply = 0.0;
  /// Reservoir cap.
  double energy_capacity = 10.0;
  /// When false, uphill reactions are not energy-gated.
  bool energy_limited = true;
  /// Species held at a fixed count (reset after every event).
  std::map<SpeciesId, Count> abundant_species;
  /// Optional first-order loss per species.
  std::map<SpeciesId, double> decay;

  bool operator==(const ReactionNetwork&) const = default;

  std::optional<std::size_t> index_of(const SpeciesId& id) const {
    for (std::size_t i = 0; i < species.size(); ++i)
      if (species[i].id == id) return i;
    return std::nullopt;
  }

  void validate() const {
    std::set<SpeciesId> ids;
    for (const auto& s : species) {
      if (!ids.insert(s.id).second) throw SchemaError("duplicate species " + s.id);
      if (s.initial_count < 0) throw SchemaError("negative count for " + s.id);
    }
    auto known = [&](const SpeciesId& id) {
      if (!ids.count(id)) throw SchemaError("unknown species " + id);
    };
    for (const auto& r : reactions) {
      if (r.reactants.empty() || r.products.empty()) throw SchemaError("reaction with empty side");
      for (const auto& [id, n] : r.reactants) {
        known(id);
        if (n < 1) throw SchemaError("stoichiometry must be >= 1");
      }
      for (const auto& [id, n] : r.products) {
        known(id);
        if (n < 1) throw SchemaError("stoichiometry must be >= 1");
      }
      if (r.enzyme) known(*r.enzyme);
      if (!(r.rate_constant >= 0) || r.activation_energy < 0) throw SchemaError("bad rate or activation energy");
    }
    for (const auto& [id, c] : abundant_species) {
      known(id);
      if (c < 0) throw SchemaError("negative abundant count for " + id);
    }
    for (const auto& [id, k] : decay) {
      known(id);
      if (k < 0) throw SchemaError("negative decay for " + id);
    }
    if (energy_supply < 0 || energy_capacity < 0) throw SchemaError("energy supply and capacity must be >= 0");
  }

  /// Non-enzyme, non-abundant species: the ones whose survival is tracked.
  std::vector<std::size_t> tracked() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < species.size(); ++i)
      if (!species[i].enzyme && !abundant_species.count(species[i].id)) out.push_back(i);
    return out;
  }
};

// ---- physical -> chemical ---------------------------------------------------

inline constexpr double kActivationScale = 1.0;

/// Each stable feature (valley or loop) of each ring becomes a species whose
/// energy level is minus its depth; species are named M1, M2, ... from the
/// highest level down. Consecutive stable features are joined by one reaction
/// with a fresh enzyme E<i><j>; its activation energy is the source depth plus
/// the tallest hill in between. Loop features also get a circulating form
/// M<i>* joined to M<i> by a catalysed reaction pair.
inline ReactionNetwork map_physical_to_chemical(const physical::TrackBlueprint& bp,
                                                double activation_scale = kActivationScale) {
  bp.validate();
  struct Level {
    std::size_t ring, index;
    double depth;
    bool loop;
    double hill_after;  ///< tallest hill up to the next stable feature
  };
  std::vector<std::vector<Level>> per_ring;
  for (std::size_t r = 0; r < bp.rings.size(); ++r) {
    const auto& ring = bp.rings[r];
    std::vector<Level> levels;
    for (std::size_t i = 0; i < ring.size(); ++i)
      if (ring[i].kind != physical::FeatureKind::hill)
        levels.push_back({r, i, ring[i].value, ring[i].kind == physical::FeatureKind::loop, 0.0});
    if (levels.size() < 2) throw ContractError("ring " + std::to_string(r) + " has fewer than two stable features; no loop to map");
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const std::size_t from = levels[k].index, to = levels[(k + 1) % levels.size()].index;
      double h = 0;
      for (std::size_t i = (from + 1) % ring.size(); i != to; i = (i + 1) % ring.size())
        if (ring[i].kind == physical::FeatureKind::hill) h = std::max(h, ring[i].value);
      levels[k].hill_after = h;
    }
    per_ring.push_back(std::move(levels));
  }
  // rank by level, highest first; ties by track order
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t r = 0; r < per_ring.size(); ++r)
    for (std::size_t k = 0; k < per_ring[r].size(); ++k) order.emplace_back(r, k);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return per_ring[a.first][a.second].depth < per_ring[b.first][b.second].depth;
  });
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i + 1;
  auto name = [&](std::size_t r, std::size_t k) { return "M" + std::to_string(rank.at({r, k})); };

  ReactionNetwork net;
  for (const auto& o : order) {
    const auto& l = per_ring[o.first][o.second];
    net.species.push_back({name(o.first, o.second), -l.depth, 0, false});
  }
  std::vector<Species> enzymes;
  for (std::size_t r = 0; r < per_ring.size(); ++r) {
    const auto& levels = per_ring[r];
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const std::size_t n = (k + 1) % levels.size();
      const auto& a = levels[k];
      const auto& b = levels[n];
      const auto ra = rank.at({r, k}), rb = rank.at({r, n});
      const SpeciesId e = "E" + std::to_string(ra) + (ra > 9 || rb > 9 ? "_" : "") + std::to_string(rb);
      enzymes.push_back({e, 0.0, 1, true});
      Reaction rx;
      rx.reactants[name(r, k)] = 1;
      rx.products[name(r, n)] = 1;
      rx.enzyme = e;
      rx.activation_energy = a.depth + a.hill_after;
      rx.direction = b.depth > a.depth ? Direction::downhill : Direction::uphill;
      rx.rate_constant = rx.direction == Direction::downhill ? 1.0 : std::exp(-rx.activation_energy / activation_scale);
      net.reactions.push_back(std::move(rx));
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (!levels[k].loop) continue;
      const SpeciesId m = name(r, k), star = m + "*", e = "E" + m.substr(1) + "*";
      net.species.push_back({star, -levels[k].depth, 0, false});
      enzymes.push_back({e, 0.0, 1, true});
      net.reactions.push_back({{{m, 1}}, {{star, 1}}, e, 0.0, Direction::downhill, 1.0});
      net.reactions.push_back({{{star, 1}}, {{m, 1}}, e, 0.0, Direction::downhill, 1.0});
    }
  }
  net.species.insert(net.species.end(), enzymes.begin(), enzymes.end());
  for (const auto& e : enzymes) net.abundant_species[e.id] = 1;
  return net;
}

// ---- species graph ----------------------------------------------------------

/// Edge reactant -> product for every reaction; enzymes are not part of it.
inline graph::Digraph species_graph(const ReactionNetwork& net) {
  graph::Digraph g(net.species.size());
  for (const auto& r : net.reactions)
    for (const auto& [a, na] : r.reactants)
      for (const auto& [b, nb] : r.products) {
        const auto u = *net.index_of(a), v = *net.index_of(b);
        if (u != v) g.add_edge(static_cast<graph::Vertex>(u), static_cast<graph::Vertex>(v));
      }
  return g;
}

inline std::size_t chemical_loop_count(const ReactionNetwork& net) {
  return graph::simple_cycles(species_graph(net), net.species.size()).size();
}

struct GeneratorReport {
  /// Cyclic strongly connected components, each sorted by species id.
  std::vector<std::vector<SpeciesId>> components;
  std::vector<std::size_t> per_component_choices;
  std::uint64_t total_count = 0;
  std::vector<std::vector<SpeciesId>> sample_generators;
};

inline constexpr std::size_t kGeneratorSampleCap = 16;

/// One species per cyclic component regenerates the network when the
/// components do not feed each other; total_count is the product of the
/// component sizes.
inline GeneratorReport generator_sets(const ReactionNetwork& net, std::size_t sample_cap = kGeneratorSampleCap) {
  net.validate();
  const auto g = species_graph(net);
  const auto scc = graph::strongly_connected_components(g);
  GeneratorReport rep;
  for (const auto& comp : scc.components) {
    if (!graph::component_is_cyclic(g, comp)) continue;
    std::vector<SpeciesId> ids;
    for (auto v : comp) ids.push_back(net.species[v].id);
    std::sort(ids.begin(), ids.end());
    rep.components.push_back(std::move(ids));
  }
  std::sort(rep.components.begin(), rep.components.end());
  rep.total_count = rep.components.empty() ? 0 : 1;
  for (const auto& c : rep.components) {
    rep.per_component_choices.push_back(c.size());
    rep.total_count *= c.size();
  }
  if (rep.components.empty()) return rep;
  std::vector<std::size_t> pick(rep.components.size(), 0);
  while (rep.sample_generators.size() < std::min<std::uint64_t>(sample_cap, rep.total_count)) {
    std::vector<SpeciesId> gen;
    for (std::size_t c = 0; c < pick.size(); ++c) gen.push_back(rep.components[c][pick[c]]);
    rep.sample_generators.push_back(std::move(gen));
    for (std::size_t c = pick.size(); c-- > 0;) {
      if (++pick[c] < rep.components[c].size()) break;
      pick[c] = 0;
    }
  }
  return rep;
}

// ---- stochastic simulation --------------------------------------------------

struct ChemSimParams {
  double horizon = 50.0;
  std::uint64_t seed = 0;
  /// Spacing of recorded samples; 0 means horizon / 100.
  double sample_interval = 0.0;
};

struct ConcentrationTrace {
  std::vector<SpeciesId> species;
  std::vector<double> sample_times;
  /// samples[k][i]: count of species i at sample_times[k]
  std::vector<std::vector<Count>> samples;
  std::vector<Count> final_counts;
  /// Species that were present at some point up to the horizon.
  std::vector<bool> ever_present;
  std::size_t events = 0;
  std::size_t uphill_events = 0;
  double energy_supplied = 0;
  double energy_spent = 0;
  /// Largest count seen per species.
  std::vector<Count> peak;

  bool operator==(const ConcentrationTrace&) const = default;
};

/// Exact event-by-event simulation. Propensity of a reaction is
/// rate_constant x the falling-factorial product of reactant counts, zero
/// when its enzyme is absent; uphill reactions additionally need their
/// activation energy in the reservoir, which they consume. Times at which
/// the reservoir crosses a gating level are treated as pseudo-events.
inline ConcentrationTrace simulate_reactions(const ReactionNetwork& net, const ChemSimParams& sim,
                                             std::optional<std::vector<Count>> initial = std::nullopt) {
  net.validate();
  if (sim.horizon < 0) throw ContractError("horizon must be >= 0");
  const std::size_t ns = net.species.size();
  struct Rx {
    std::vector<std::pair<std::size_t, int>> in, out;
    std::optional<std::size_t> enzyme;
    bool uphill;
    double cost, k;
  };
  std::vector<Rx> rx;
  for (const auto& r : net.reactions) {
    Rx x{{}, {}, std::nullopt, r.direction == Direction::uphill, r.activation_energy, r.rate_constant};
    for (const auto& [id, n] : r.reactants) x.in.emplace_back(*net.index_of(id), n);
    for (const auto& [id, n] : r.products) x.out.emplace_back(*net.index_of(id), n);
    if (r.enzyme) x.enzyme = *net.index_of(*r.enzyme);
    rx.push_back(std::move(x));
  }
  for (const auto& [id, k] : net.decay)
    if (k > 0) rx.push_back({{{*net.index_of(id), 1}}, {}, std::nullopt, false, 0.0, k});
  std::vector<std::pair<std::size_t, Count>> abundant;
  for (const auto& [id, c] : net.abundant_species) abundant.emplace_back(*net.index_of(id), c);

  std::vector<Count> x(ns);
  if (initial) {
    if (initial->size() != ns) throw ContractError("initial count vector has the wrong size");
    x = *initial;
  } else {
    for (std::size_t i = 0; i < ns; ++i) x[i] = net.species[i].initial_count;
  }
  for (const auto& [i, c] : abundant) x[i] = c;

  ConcentrationTrace tr;
  for (const auto& s : net.species) tr.species.push_back(s.id);
  tr.ever_present.resize(ns);
  tr.peak = x;
  for (std::size_t i = 0; i < ns; ++i) tr.ever_present[i] = x[i] > 0;

  const double interval = sim.sample_interval > 0 ? sim.sample_interval : std::max(sim.horizon / 100.0, 1e-9);
  double next_sample = 0.0;
  auto record_until = [&](double t) {
    while (next_sample <= t && next_sample <= sim.horizon + 1e-12) {
      tr.sample_times.push_back(next_sample);
      tr.samples.push_back(x);
      next_sample += interval;
    }
  };

  std::mt19937_64 rng(sim.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double t = 0.0, reservoir = 0.0;
  std::vector<double> a(rx.size());
  const bool gated = net.energy_limited;
  auto refill = [&](double dt) {
    if (!gated) return;
    const double room = net.energy_capacity - reservoir;
    const double add = std::min(room, net.energy_supply * dt);
    if (add > 0) {
      reservoir += add;
      tr.energy_supplied += add;
    }
  };

  while (true) {
    double total = 0.0;
    double next_gate = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rx.size(); ++j) {
      const auto& r = rx[j];
      double p = r.k;
      if (r.enzyme && x[*r.enzyme] <= 0) p = 0;
      for (const auto& [i, n] : r.in)
        for (int m = 0; m < n && p > 0; ++m) p *= static_cast<double>(std::max<Count>(0, x[i] - m));
      if (p > 0 && r.uphill && gated && reservoir < r.cost) {
        if (net.energy_supply > 0 && r.cost <= net.energy_capacity)
          next_gate = std::min(next_gate, (r.cost - reservoir) / net.energy_supply);
        p = 0;
      }
      a[j] = p;
      total += p;
    }
    const double wait = total > 0 ? -std::log(1.0 - unit(rng)) / total : std::numeric_limits<double>::infinity();
    if (next_gate < wait) {
      // the reservoir reaches a gating level first; no reaction fires
      if (t + next_gate >= sim.horizon) break;
      record_until(t + next_gate);
      refill(next_gate);
      t += next_gate;
      // land exactly on the gate despite rounding
      for (const auto& r : rx)
        if (r.uphill && reservoir < r.cost && r.cost - reservoir < 1e-9) {
          tr.energy_supplied += r.cost - reservoir;
          reservoir = r.cost;
        }
      continue;
    }
    if (t + wait >= sim.horizon) break;
    record_until(t + wait);
    refill(wait);
    t += wait;
    double pick = unit(rng) * total;
    std::size_t j = 0, last = 0;
    for (std::size_t q = 0; q < rx.size(); ++q)
      if (a[q] > 0) last = q;
    while (j < last && (a[j] <= 0 || pick >= a[j])) {
      pick -= a[j];
      ++j;
    }
    const auto& r = rx[j];
    for (const auto& [i, n] : r.in) x[i] -= n;
    for (const auto& [i, n] : r.out) x[i] += n;
    if (r.uphill) {
      ++tr.uphill_events;
      if (gated) {
        reservoir -= r.cost;
        tr.energy_spent += r.cost;
      }
    }
    for (const auto& [i, c] : abundant) x[i] = c;
    for (std::size_t i = 0; i < ns; ++i) {
      tr.ever_present[i] = tr.ever_present[i] || x[i] > 0;
      tr.peak[i] = std::max(tr.peak[i], x[i]);
    }
    ++tr.events;
  }
  refill(sim.horizon - t);
  record_until(sim.horizon);
  tr.final_counts = x;
  return tr;
}

inline void write_csv(std::ostream& out, const ConcentrationTrace& tr) {
  out << "time,species,count\n";
  char buf[128];
  for (std::size_t k = 0; k < tr.samples.size(); ++k)
    for (std::size_t i = 0; i < tr.species.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.9g,", tr.sample_times[k]);
      out << buf << tr.species[i] << ',' << tr.samples[k][i] << '\n';
    }
}

// ---- persistence --------------------------------------------------------------

struct PersistenceReport {
  std::vector<bool> loop_survived;
  std::vector<bool> chain_survived;
  double survival_loop = 0;
  double survival_chain = 0;
};

inline bool all_tracked_present(const ReactionNetwork& net, const std::vector<Count>& counts) {
  for (auto i : net.tracked())
    if (counts[i] <= 0) return false;
  return true;
}

/// `chain` must be `loop` minus exactly one uphill reaction.
inline void check_chain_of(const ReactionNetwork& loop, const ReactionNetwork& chain) {
  auto same_except_reactions = loop;
  same_except_reactions.reactions = chain.reactions;
  if (!(same_except_reactions == chain)) throw ContractError("loop and chain networks differ beyond one reaction");
  if (chain.reactions.size() + 1 != loop.reactions.size())
    throw ContractError("chain must drop exactly one reaction of the loop");
  for (std::size_t skip = 0; skip < loop.reactions.size(); ++skip) {
    if (loop.reactions[skip].direction != Direction::uphill) continue;
    auto rest = loop.reactions;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(skip));
    if (rest == chain.reactions) return;
  }
  throw ContractError("chain is not the loop minus its closing uphill reaction");
}

inline ReactionNetwork drop_closing_reaction(const ReactionNetwork& loop) {
  for (std::size_t j = 0; j < loop.reactions.size(); ++j)
    if (loop.reactions[j].direction == Direction::uphill) {
      auto chain = loop;
      chain.reactions.erase(chain.reactions.begin() + static_cast<std::ptrdiff_t>(j));
      return chain;
    }
  throw ContractError("network has no uphill reaction to remove");
}

/// Survival (every tracked species present at the horizon) of the loop and
/// chain networks for seeds sim.seed .. sim.seed + replicates - 1.
inline PersistenceReport persistence_experiment(const ReactionNetwork& loop, const ReactionNetwork& chain,
                                                const ChemSimParams& sim, std::size_t replicates = 100) {
  check_chain_of(loop, chain);
  PersistenceReport rep;
  std::vector<char> ls(replicates), cs(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    auto p = sim;
    p.seed = sim.seed + r;
    ls[r] = all_tracked_present(loop, simulate_reactions(loop, p).final_counts);
    cs[r] = all_tracked_present(chain, simulate_reactions(chain, p).final_counts);
  });
  for (std::size_t r = 0; r < replicates; ++r) {
    rep.loop_survived.push_back(ls[r] != 0);
    rep.chain_survived.push_back(cs[r] != 0);
  }
  const auto frac = [&](const std::vector<bool>& v) {
    return v.empty() ? 0.0 : static_cast<double>(std::count(v.begin(), v.end(), true)) / static_cast<double>(v.size());
  };
  rep.survival_loop = frac(rep.loop_survived);
  rep.survival_chain = frac(rep.chain_survived);
  return rep;
}

// ---- split regeneration -------------------------------------------------------

struct SplitReport {
  std::vector<Count> part_a, part_b;
  bool part_a_regenerates = false;
  bool part_b_regenerates = false;
  /// Whether each half's seed touches every cyclic component.
  bool part_a_covers = false;
  bool part_b_covers = false;
};

inline bool covers_generators(const ReactionNetwork& net, const GeneratorReport& gen, const std::vector<Count>& counts) {
  for (const auto& comp : gen.components) {
    bool hit = false;
    for (const auto& id : comp) hit = hit || counts[*net.index_of(id)] > 0;
    if (!hit) return false;
  }
  return true;
}

/// Simulates two halves given explicit tracked-species counts; enzymes and
/// abundant species are supplied to both.
inline SplitReport split_regeneration_test(const ReactionNetwork& net, const ChemSimParams& sim,
                                           const std::vector<Count>& part_a, const std::vector<Count>& part_b) {
  net.validate();
  const std::size_t ns = net.species.size();
  if (part_a.size() != ns || part_b.size() != ns) throw ContractError("split vectors have the wrong size");
  const auto gen = generator_sets(net);
  SplitReport rep;
  rep.part_a = part_a;
  rep.part_b = part_b;
  for (std::size_t i = 0; i < ns; ++i)
    if (net.species[i].enzyme) rep.part_a[i] = rep.part_b[i] = std::max<Count>(1, net.species[i].initial_count);
  auto regenerates = [&](const std::vector<Count>& start, std::uint64_t seed) {
    auto p = sim;
    p.seed = seed;
    const auto tr = simulate_reactions(net, p, start);
    for (auto i : net.tracked())
      if (!tr.ever_present[i]) return false;
    return true;
  };
  rep.part_a_regenerates = regenerates(rep.part_a, sim.seed);
  rep.part_b_regenerates = regenerates(rep.part_b, sim.seed + 1);
  rep.part_a_covers = covers_generators(net, gen, rep.part_a);
  rep.part_b_covers = covers_generators(net, gen, rep.part_b);
  return rep;
}

/// Every tracked molecule goes to either half with probability 1/2.
inline SplitReport split_regeneration_test(const ReactionNetwork& net, const ChemSimParams& sim, std::uint64_t seed) {
  const auto gen = generator_sets(net);
  for (const auto& comp : gen.components)
    if (comp.size() < 2)
      throw ContractError("cyclic component {" + comp.front() + "} has a single species; a split cannot guarantee coverage");
  std::mt19937_64 rng(seed);
  std::vector<Count> a(net.species.size(), 0), b(net.species.size(), 0);
  for (auto i : net.tracked()) {
    std::binomial_distribution<Count> half(net.species[i].initial_count, 0.5);
    a[i] = half(rng);
    b[i] = net.species[i].initial_count - a[i];
  }
  auto p = sim;
  p.seed = seed;
  return split_regeneration_test(net, p, a, b);
}

// ---- fixtures -----------------------------------------------------------------

/// Three stable levels at increasing depth with low hills between them.
inline physical::TrackBlueprint three_level_blueprint() {
  using physical::FeatureKind;
  return physical::single_ring({{FeatureKind::valley, 1.0, 0.0},
                                {FeatureKind::hill, 0.25, 0.0},
                                {FeatureKind::valley, 1.5, 0.0},
                                {FeatureKind::hill, 0.25, 0.0},
                                {FeatureKind::valley, 2.0, 0.0},
                                {FeatureKind::hill, 0.25, 0.0}});
}

/// The M1 -> M2 -> M3 -> M1 loop with ten molecules of each species and an
/// energy supply comfortably above the uphill demand.
inline ReactionNetwork m1m2m3_loop(Count each = 10, double energy_supply = 20.0) {
  auto net = map_physical_to_chemical(three_level_blueprint());
  for (auto& s : net.species)
    if (!s.enzyme) s.initial_count = each;
  net.energy_supply = energy_supply;
  return net;
}

inline ReactionNetwork m1m2m3_chain(Count each = 10, double energy_supply = 20.0) {
  return drop_closing_reaction(m1m2m3_loop(each, energy_supply));
}

/// Disjoint unimolecular rings; ring c has sizes[c] species named
/// S<c>_<i>, each starting with `each` molecules. The last reaction of every
/// ring is uphill.
inline ReactionNetwork ring_network(const std::vector<std::size_t>& sizes, Count each = 10,
                                    double energy_supply = 20.0) {
  ReactionNetwork net;
  net.energy_supply = energy_supply;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    auto id = [&](std::size_t i) { return "S" + std::to_string(c) + "_" + std::to_string(i % sizes[c]); };
    for (std::size_t i = 0; i < sizes[c]; ++i)
      net.species.push_back({id(i), -static_cast<double>(i), each, false});
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      const bool up = i + 1 == sizes[c];
      const double ea = up ? 1.0 : 0.0;
      net.reactions.push_back({{{id(i), 1}}, {{id(i + 1), 1}}, std::nullopt, ea,
                               up ? Direction::uphill : Direction::downhill, up ? std::exp(-ea) : 1.0});
    }
  }
  return net;
}

/// Three strongly connected components of four species each.
inline ReactionNetwork three_by_four() { return ring_network({4, 4, 4}); }

/// Two independent loops.
inline ReactionNetwork two_scc() { return ring_network({3, 2}); }

// ---- JSON ---------------------------------------------------------------------

inline nlohmann::json to_json(const ReactionNetwork& net) {
  nlohmann::json j;
  j["species"] = nlohmann::json::array();
  for (const auto& s : net.species)
    j["species"].push_back(
        {{"id", s.id}, {"energy_level", s.energy_level}, {"initial_count", s.initial_count}, {"enzyme", s.enzyme}});
  j["reactions"] = nlohmann::json::array();
  for (const auto& r : net.reactions) {
    nlohmann::json e{{"reactants", r.reactants},
                     {"products", r.products},
                     {"activation_energy", r.activation_energy},
                     {"direction", to_string(r.direction)},
                     {"rate_constant", r.rate_constant}};
    e["enzyme"] = r.enzyme ? nlohmann::json(*r.enzyme) : nlohmann::json(nullptr);
    j["reactions"].push_back(std::move(e));
  }
  j["energy_supply"] = net.energy_supply;
  j["energy_capacity"] = net.energy_capacity;
  j["energy_limited"] = net.energy_limited;
  j["abundant_species"] = net.abundant_species;
  j["decay"] = net.decay;
  return j;
}

inline ReactionNetwork reaction_network_from_json(const nlohmann::json& j) {
  ReactionNetwork net;
  try {
    for (const auto& s : j.at("species"))
      net.species.push_back({s.at("id").get<std::string>(), s.value("energy_level", 0.0),
                             s.value("initial_count", Count{0}), s.value("enzyme", false)});
    for (const auto& r : j.at("reactions")) {
      Reaction rx;
      rx.reactants = r.at("reactants").get<std::map<SpeciesId, int>>();
      rx.products = r.at("products").get<std::map<SpeciesId, int>>();
      if (auto it = r.find("enzyme"); it != r.end() && !it->is_null()) rx.enzyme = it->get<std::string>();
      rx.activation_energy = r.value("activation_energy", 0.0);
      const auto dir = r.value("direction", std::string{"downhill"});
      if (dir != "downhill" && dir != "uphill") throw SchemaError("unknown direction " + dir);
      rx.direction = dir == "uphill" ? Direction::uphill : Direction::downhill;
      rx.rate_constant = r.value("rate_constant", 1.0);
      net.reactions.push_back(std::move(rx));
    }
    net.energy_supply = j.value("energy_supply", 0.0);
    net.energy_capacity = j.value("energy_capacity", net.energy_capacity);
    net.energy_limited = j.value("energy_limited", true);
    net.abundant_species = j.value("abundant_species", std::map<SpeciesId, Count>{});
    net.decay = j.value("decay", std::map<SpeciesId, double>{});
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("reaction network: ") + ex.what());
  }
  net.validate();
  return net;
}

}  // namespace spl::chemical
