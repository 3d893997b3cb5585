#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spl/error.hpp"
#include "spl/network.hpp"
#include "spl/parallel.hpp"
#include "spl/stats.hpp"

namespace spl {

/// External drive on input-surface nodes, active for steps
/// [onset, onset + duration).
struct Stimulus {
  std::map<NodeId, double> pattern;
  int duration = 1;
  int onset = 0;

  bool operator==(const Stimulus&) const = default;
};

/// Feedback from an output-surface node to an input-surface node: when
/// `from` fires at t, `to` receives `weight` at t + 1.
struct FeedbackRoute {
  NodeId from;
  NodeId to;
  double weight = 1.0;

  bool operator==(const FeedbackRoute&) const = default;
};

struct DynParams {
  /// Fraction of sub-threshold potential lost per step (1 = no carry-over).
  double activation_decay = 1.0;
  /// Steps a single traversal may span; 0 means 2 x loop length.
  int trigger_window = 0;
  int min_traversals = 2;
  /// Steps observed after cutoff by self_sustain_time; 0 means
  /// 10 x the longest enumerated loop.
  int sustain_horizon = 0;
  double noise_rate = 0.0;
  std::uint64_t seed = 0;
  /// Initial energy per node is capacity x U(min_fraction, 1).
  double initial_energy_min_fraction = 1.0;
  std::size_t max_loop_len = kDefaultMaxLoopLen;

  void validate() const {
    if (activation_decay < 0 || activation_decay > 1) throw ContractError("activation_decay must be in [0,1]");
    if (min_traversals < 2) throw ContractError("min_traversals must be >= 2");
    if (noise_rate < 0 || noise_rate > 1) throw ContractError("noise_rate must be in [0,1]");
    if (trigger_window < 0) throw ContractError("trigger_window must be >= 0");
    if (sustain_horizon < 0) throw ContractError("sustain_horizon must be >= 0");
    if (initial_energy_min_fraction < 0 || initial_energy_min_fraction > 1)
      throw ContractError("initial_energy_min_fraction must be in [0,1]");
  }

  int window_for(std::size_t loop_len) const {
    return trigger_window > 0 ? trigger_window : static_cast<int>(2 * loop_len);
  }
};

/// Time-indexed record of one run.
struct Trace {
  int horizon = 0;
  std::uint64_t seed = 0;
  std::size_t node_count = 0;
  /// firings[t]: ascending indices of nodes that fired at step t.
  std::vector<std::vector<NodeIndex>> firings;
  /// Input nodes whose firing at t received feedback-route input.
  std::vector<std::vector<NodeIndex>> feedback_firings;
  /// Filled by annotate_loops: loops whose traversal completed at step t,
  /// as indices into `loop_ids`.
  std::vector<LoopId> loop_ids;
  std::vector<std::vector<std::size_t>> loop_activations;

  bool operator==(const Trace&) const = default;

  std::vector<std::vector<int>> fire_times() const {
    std::vector<std::vector<int>> ft(node_count);
    for (int t = 0; t < static_cast<int>(firings.size()); ++t)
      for (auto v : firings[static_cast<std::size_t>(t)]) ft[v].push_back(t);
    return ft;
  }

  std::size_t total_firings() const {
    std::size_t n = 0;
    for (const auto& f : firings) n += f.size();
    return n;
  }
};

/// Synchronous discrete-time dynamics. A node fires at step t iff its
/// potential (weighted input from firings at t-1, plus stimulus, plus
/// feedback, plus decayed residual) reaches threshold, it is outside its
/// refractory period and it holds at least firing_cost energy. Energy
/// recharges by recharge_rate each step (from t = 1), capped at capacity.
inline Trace run(const Network& net, const std::vector<Stimulus>& stimuli, const DynParams& params,
                 int horizon, const std::vector<FeedbackRoute>& routing = {}) {
  params.validate();
  if (horizon < 1) throw ContractError("horizon must be >= 1");
  const std::size_t n = net.node_count();

  struct Applied {
    NodeIndex node;
    double value;
    int onset, end;
  };
  std::vector<Applied> drive;
  for (const auto& s : stimuli) {
    if (s.duration < 0) throw ContractError("stimulus duration must be >= 0");
    for (const auto& [id, value] : s.pattern) {
      auto i = net.find(id);
      if (!i || !net.is_input(*i)) throw ContractError("stimulus node " + id + " is not on the input surface");
      drive.push_back({*i, value, s.onset, s.onset + s.duration});
    }
  }
  std::vector<std::vector<std::pair<NodeIndex, double>>> routes(n);
  for (const auto& r : routing) {
    auto from = net.find(r.from), to = net.find(r.to);
    if (!from || !to) throw ContractError("feedback route references unknown node " + (from ? r.to : r.from));
    if (!net.is_input(*to)) throw ContractError("feedback route target " + r.to + " is not on the input surface");
    const auto& outs = net.output_surface();
    if (std::find(outs.begin(), outs.end(), *from) == outs.end())
      throw ContractError("feedback route source " + r.from + " is not on the output surface");
    routes[*from].emplace_back(*to, r.weight);
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> energy(n), residual(n, 0.0), potential(n), feedback(n);
  std::vector<int> last_fire(n, -1'000'000);
  for (std::size_t v = 0; v < n; ++v) {
    const double cap = net.params(static_cast<NodeIndex>(v)).energy_capacity;
    const double lo = params.initial_energy_min_fraction;
    energy[v] = lo >= 1.0 ? cap : cap * (lo + (1.0 - lo) * unit(rng));
  }

  Trace tr;
  tr.horizon = horizon;
  tr.seed = params.seed;
  tr.node_count = n;
  tr.firings.resize(static_cast<std::size_t>(horizon));
  tr.feedback_firings.resize(static_cast<std::size_t>(horizon));
  std::vector<char> fired_prev(n, 0), fired_now(n, 0);

  for (int t = 0; t < horizon; ++t) {
    std::fill(potential.begin(), potential.end(), 0.0);
    std::fill(feedback.begin(), feedback.end(), 0.0);
    if (t > 0) {
      for (const auto& e : net.edges())
        if (fired_prev[e.src]) potential[e.dst] += e.weight;
      for (std::size_t u = 0; u < n; ++u)
        if (fired_prev[u])
          for (const auto& [to, w] : routes[u]) feedback[to] += w;
    }
    for (const auto& d : drive)
      if (t >= d.onset && t < d.end) potential[d.node] += d.value;

    auto& out = tr.firings[static_cast<std::size_t>(t)];
    for (std::size_t v = 0; v < n; ++v) {
      const auto& p = net.params(static_cast<NodeIndex>(v));
      if (t > 0) energy[v] = std::min(p.energy_capacity, energy[v] + p.energy_recharge_rate);
      const double pot = potential[v] + feedback[v] + residual[v];
      const bool ready = t - last_fire[v] > p.refractory && energy[v] >= p.firing_cost;
      bool fire = ready && pot >= p.threshold - 1e-12;
      if (!fire && ready && params.noise_rate > 0.0) fire = unit(rng) < params.noise_rate;
      else if (params.noise_rate > 0.0) (void)unit(rng);
      fired_now[v] = fire ? 1 : 0;
      if (fire) {
        energy[v] -= p.firing_cost;
        last_fire[v] = t;
        residual[v] = 0.0;
        out.push_back(static_cast<NodeIndex>(v));
        if (feedback[v] > 0.0) tr.feedback_firings[static_cast<std::size_t>(t)].push_back(static_cast<NodeIndex>(v));
      } else {
        residual[v] = (1.0 - params.activation_decay) * pot;
      }
    }
    std::swap(fired_prev, fired_now);
  }
  return tr;
}

/// One complete traversal of a loop: its first node fired at `start`, and
/// each following node fired strictly later, ending at `end`.
struct Traversal {
  int start;
  int end;
  bool operator==(const Traversal&) const = default;
};

/// For every firing of the loop's first node, the earliest cyclic-order
/// completion; kept when it spans at most `window` steps (end - start + 1).
inline std::vector<Traversal> loop_traversals(const std::vector<std::vector<int>>& fire_times,
                                              const Loop& loop, int window) {
  std::vector<Traversal> out;
  const auto& first = fire_times[loop.nodes[0]];
  for (int t0 : first) {
    int t = t0;
    bool ok = true;
    for (std::size_t i = 1; i < loop.nodes.size(); ++i) {
      const auto& ft = fire_times[loop.nodes[i]];
      auto it = std::upper_bound(ft.begin(), ft.end(), t);
      if (it == ft.end() || *it - t0 + 1 > window) {
        ok = false;
        break;
      }
      t = *it;
    }
    if (ok) out.push_back({t0, t});
  }
  return out;
}

/// Records, per step, which loops completed a traversal at that step.
inline void annotate_loops(Trace& trace, const std::vector<Loop>& loops, const DynParams& params) {
  const auto ft = trace.fire_times();
  trace.loop_ids.clear();
  trace.loop_activations.assign(static_cast<std::size_t>(trace.horizon), {});
  for (std::size_t k = 0; k < loops.size(); ++k) {
    trace.loop_ids.push_back(loops[k].id);
    for (const auto& tv : loop_traversals(ft, loops[k], params.window_for(loops[k].length())))
      trace.loop_activations[static_cast<std::size_t>(tv.end)].push_back(k);
  }
  for (auto& step : trace.loop_activations) std::sort(step.begin(), step.end());
}

/// Loops with at least min_traversals complete traversals, each within the
/// trigger window.
inline std::set<LoopId> triggered_loops(const Trace& trace, const Network& net, const std::vector<Loop>& loops,
                                        const DynParams& params) {
  if (trace.node_count != net.node_count()) throw ContractError("trace was not produced on this network");
  const auto ft = trace.fire_times();
  std::set<LoopId> out;
  for (const auto& l : loops)
    if (static_cast<int>(loop_traversals(ft, l, params.window_for(l.length())).size()) >= params.min_traversals)
      out.insert(l.id);
  return out;
}

/// Per loop, the step at which its first traversal completed, for triggered
/// loops only.
inline std::map<LoopId, int> first_completion(const Trace& trace, const std::vector<Loop>& loops,
                                              const DynParams& params) {
  const auto ft = trace.fire_times();
  std::map<LoopId, int> out;
  for (const auto& l : loops) {
    auto tv = loop_traversals(ft, l, params.window_for(l.length()));
    if (static_cast<int>(tv.size()) >= params.min_traversals) {
      int first = tv.front().end;
      for (const auto& x : tv) first = std::min(first, x.end);
      out[l.id] = first;
    }
  }
  return out;
}

inline int default_sustain_horizon(const std::vector<Loop>& loops) {
  std::size_t longest = 2;
  for (const auto& l : loops) longest = std::max(longest, l.length());
  return static_cast<int>(10 * longest);
}

/// Steps after `cutoff` during which at least one triggered loop keeps
/// completing traversals: last completion step minus cutoff, or 0. All drive
/// is removed after cutoff; observation stops after sustain_horizon steps.
inline int self_sustain_time(const Network& net, const std::vector<Stimulus>& stimuli, int cutoff,
                             const DynParams& params) {
  for (const auto& s : stimuli)
    if (s.onset + s.duration - 1 > cutoff && s.duration > 0)
      throw ContractError("cutoff precedes a stimulus offset");
  const auto loops = enumerate_simple_cycles(net, params.max_loop_len);
  if (loops.empty()) return 0;
  const int observe = params.sustain_horizon > 0 ? params.sustain_horizon : default_sustain_horizon(loops);
  const int horizon = cutoff + observe + 1;
  std::vector<Stimulus> clipped;
  for (auto s : stimuli) {
    s.duration = std::max(0, std::min(s.duration, cutoff + 1 - s.onset));
    clipped.push_back(std::move(s));
  }
  const auto tr = run(net, clipped, params, horizon);
  const auto ft = tr.fire_times();
  int last = -1;
  for (const auto& l : loops) {
    auto tv = loop_traversals(ft, l, params.window_for(l.length()));
    if (static_cast<int>(tv.size()) < params.min_traversals) continue;
    for (const auto& x : tv) last = std::max(last, x.end);
  }
  return std::max(0, last - cutoff);
}

// ---- linked vs isolated loops ---------------------------------------------

struct LinkedLoopConfig {
  int loop_a_len = 3;
  int loop_b_len = 3;
  double loop_weight = 1.0;
  /// Weight of the two cross-links (last node of one loop into the first node
  /// of the other). Negative is inhibitory; zero means no link edges.
  double link_weight = 1.0;
  double threshold = 1.0;
  int refractory = 1;
  double energy_capacity = 10.0;
  double energy_recharge_rate = 0.2;
  double firing_cost = 1.0;
  double initial_energy_min_fraction = 0.2;
  int sustain_horizon = 1000;
  int replicates = 100;
  std::uint64_t seed = 1;
};

struct ComparisonRow {
  int replicate;
  std::uint64_t seed;
  std::string variant;
  int sustain_steps;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  ///< ordered by (replicate, variant)
  double median_linked = 0;
  double median_isolated = 0;
  double median_ratio = 0;  ///< median_linked / median_isolated

  std::vector<double> sustain(const std::string& variant) const {
    std::vector<double> xs;
    for (const auto& r : rows)
      if (r.variant == variant) xs.push_back(r.sustain_steps);
    return xs;
  }
};

/// Two rings A and B whose first nodes are on the input surface, optionally
/// cross-linked (a_last -> b_0, b_last -> a_0).
inline Network two_loop_network(const LinkedLoopConfig& cfg, bool linked) {
  NetworkSpec s;
  NodeParams p;
  p.threshold = cfg.threshold;
  p.refractory = cfg.refractory;
  p.energy_capacity = cfg.energy_capacity;
  p.energy_recharge_rate = cfg.energy_recharge_rate;
  p.firing_cost = cfg.firing_cost;
  auto ring = [&](const std::string& prefix, int len) {
    for (int i = 0; i < len; ++i) s.nodes.push_back({prefix + std::to_string(i), p});
    for (int i = 0; i < len; ++i)
      s.edges.push_back({prefix + std::to_string(i), prefix + std::to_string((i + 1) % len), cfg.loop_weight});
  };
  ring("a", cfg.loop_a_len);
  ring("b", cfg.loop_b_len);
  if (linked && cfg.link_weight != 0.0) {
    s.edges.push_back({"a" + std::to_string(cfg.loop_a_len - 1), "b0", cfg.link_weight});
    s.edges.push_back({"b" + std::to_string(cfg.loop_b_len - 1), "a0", cfg.link_weight});
  }
  s.input_surface = {"a0", "b0"};
  return build_network(s);
}

/// Self-sustain times of the linked and isolated two-loop systems for each
/// replicate. Replicate r uses seed cfg.seed + r for both variants.
inline ComparisonReport claim3_experiment(const LinkedLoopConfig& cfg) {
  if (cfg.loop_a_len < 2 || cfg.loop_b_len < 2) throw ContractError("loop sizes must be >= 2");
  if (cfg.replicates < 0) throw ContractError("replicates must be >= 0");
  const Network linked = two_loop_network(cfg, true);
  const Network isolated = two_loop_network(cfg, false);
  Stimulus kick;
  kick.pattern = {{"a0", cfg.threshold}, {"b0", cfg.threshold}};
  kick.onset = 0;
  kick.duration = 1;

  const auto n = static_cast<std::size_t>(cfg.replicates);
  std::vector<int> s_linked(n), s_isolated(n);
  parallel_for(n, [&](std::size_t r) {
    DynParams dp;
    dp.seed = cfg.seed + r;
    dp.initial_energy_min_fraction = cfg.initial_energy_min_fraction;
    dp.sustain_horizon = cfg.sustain_horizon;
    s_linked[r] = self_sustain_time(linked, {kick}, 0, dp);
    s_isolated[r] = self_sustain_time(isolated, {kick}, 0, dp);
  });

  ComparisonReport rep;
  for (std::size_t r = 0; r < n; ++r) {
    rep.rows.push_back({static_cast<int>(r), cfg.seed + r, "isolated", s_isolated[r]});
    rep.rows.push_back({static_cast<int>(r), cfg.seed + r, "linked", s_linked[r]});
  }
  rep.median_linked = stats::median(rep.sustain("linked"));
  rep.median_isolated = stats::median(rep.sustain("isolated"));
  rep.median_ratio = rep.median_isolated > 0 ? rep.median_linked / rep.median_isolated : 0.0;
  return rep;
}

}  // namespace spl
