#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/dynamics.hpp"
#include "spl/error.hpp"
#include "spl/fixedset.hpp"
#include "spl/network.hpp"

namespace spl {

enum class Band { delta, theta, alpha, beta, gamma };

inline const char* to_string(Band b) {
  switch (b) {
    case Band::gamma: return "gamma";
    case Band::beta: return "beta";
    case Band::alpha: return "alpha";
    case Band::theta: return "theta";
    case Band::delta: return "delta";
  }
  return "?";
}

struct RateInterval {
  double lo;
  double hi;
};

/// Rates are fixed-set activations per rate window. Intervals are half-open
/// [lo, hi) except beta, which includes its upper edge so that gamma is
/// strictly above gamma_min.
struct BandThresholds {
  double gamma_min = 30.0;
  RateInterval beta_range{12.0, 30.0};
  RateInterval alpha_range{8.0, 12.0};
  RateInterval theta_range{4.0, 8.0};
  double delta_max = 4.0;

  void validate() const {
    const bool ordered = delta_max > 0 && delta_max == theta_range.lo && theta_range.lo < theta_range.hi &&
                         theta_range.hi == alpha_range.lo && alpha_range.lo < alpha_range.hi &&
                         alpha_range.hi == beta_range.lo && beta_range.lo < beta_range.hi &&
                         beta_range.hi == gamma_min;
    if (!ordered) throw ContractError("band thresholds must be contiguous and increasing");
  }
};

inline Band band_classify(double rate, const BandThresholds& thr = {}) {
  if (rate < 0) throw ContractError("rate must be non-negative");
  if (rate > thr.gamma_min) return Band::gamma;
  if (rate >= thr.beta_range.lo) return Band::beta;
  if (rate >= thr.alpha_range.lo) return Band::alpha;
  if (rate >= thr.theta_range.lo) return Band::theta;
  return Band::delta;
}

inline constexpr int kDefaultRateWindow = 100;

namespace detail {

/// Completion steps of each registered fixed set's loops, looked up in an
/// annotated trace. A loop missing from the annotation never completes.
struct SetCompletions {
  std::vector<FixedSetId> ids;
  std::vector<bool> meta;
  /// per fixed set, per loop: sorted completion steps
  std::vector<std::vector<std::vector<int>>> times;
  /// every completion of any registered loop
  std::vector<int> any;
};

inline SetCompletions set_completions(const Trace& trace, const FixedSetRegistry& registry) {
  std::map<LoopId, std::vector<int>> per_loop;
  for (std::size_t t = 0; t < trace.loop_activations.size(); ++t)
    for (auto k : trace.loop_activations[t]) per_loop[trace.loop_ids[k]].push_back(static_cast<int>(t));
  SetCompletions sc;
  std::set<LoopId> registered;
  for (const auto& [id, fs] : registry.entries()) {
    sc.ids.push_back(id);
    sc.meta.push_back(fs.kind == FixedSetKind::meta);
    auto& slot = sc.times.emplace_back();
    for (const auto& l : fs.loop_ids) {
      auto it = per_loop.find(l);
      slot.push_back(it == per_loop.end() ? std::vector<int>{} : it->second);
      registered.insert(l);
    }
  }
  for (const auto& l : registered)
    if (auto it = per_loop.find(l); it != per_loop.end()) sc.any.insert(sc.any.end(), it->second.begin(), it->second.end());
  std::sort(sc.any.begin(), sc.any.end());
  return sc;
}

inline bool hit(const std::vector<int>& ts, int lo, int hi) {
  auto it = std::lower_bound(ts.begin(), ts.end(), lo);
  return it != ts.end() && *it <= hi;
}

/// Indices (into sc.ids) of sets whose every loop completed in [lo, hi].
inline std::vector<std::size_t> active_in(const SetCompletions& sc, int lo, int hi) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sc.ids.size(); ++i)
    if (std::all_of(sc.times[i].begin(), sc.times[i].end(), [&](const auto& ts) { return hit(ts, lo, hi); }))
      out.push_back(i);
  return out;
}

}  // namespace detail

/// Distinct fixed sets fully active in each consecutive window of `window`
/// steps (the final window may be partial). Reads loop completions from an
/// annotated trace.
inline std::vector<double> activation_rate(const Trace& trace, const FixedSetRegistry& registry, int window) {
  if (window < 1) throw ContractError("window must be >= 1");
  const auto sc = detail::set_completions(trace, registry);
  std::vector<double> out;
  for (int lo = 0; lo < trace.horizon; lo += window)
    out.push_back(static_cast<double>(detail::active_in(sc, lo, std::min(lo + window, trace.horizon) - 1).size()));
  return out;
}

struct Membrane {
  std::set<FixedSetId> active_sets;
  double rate = 0;
  Band band = Band::delta;
  int sustained_for = 0;
  bool closed_loop = false;
  /// First and last step of the sustained stretch.
  int from = 0;
  int to = 0;
};

enum class MembraneCondition { gamma, closed_loop, meta, duration };

inline const char* to_string(MembraneCondition c) {
  switch (c) {
    case MembraneCondition::gamma: return "a:gamma";
    case MembraneCondition::closed_loop: return "b:closed_loop";
    case MembraneCondition::meta: return "c:meta";
    case MembraneCondition::duration: return "sustain";
  }
  return "?";
}

struct MembraneConfig {
  BandThresholds thresholds;
  int rate_window = kDefaultRateWindow;
  /// 0 means 10 x the longest registered loop.
  int min_sustain = 0;
  /// 0 means 3 x rate_window + min_sustain.
  int horizon = 0;
  std::vector<FeedbackRoute> routing;
};

inline int default_min_sustain(const FixedSetRegistry& registry) {
  std::size_t longest = 2;
  for (const auto& [id, fs] : registry.entries())
    for (const auto& l : fs.loop_ids) longest = std::max(longest, l.nodes.size());
  return static_cast<int>(10 * longest);
}

/// Per-step condition flags over a sliding window ending at each step, plus
/// the longest stretch where all three hold.
struct MembraneScan {
  std::vector<char> gamma, closed, meta;
  std::vector<std::set<FixedSetId>> active;
  std::vector<double> rate;
  int min_sustain = 0;
  int window = 0;

  static int longest_run(const std::vector<char>& ok, int* end = nullptr) {
    int best = 0, cur = 0;
    for (std::size_t t = 0; t < ok.size(); ++t) {
      cur = ok[t] ? cur + 1 : 0;
      if (cur > best) {
        best = cur;
        if (end) *end = static_cast<int>(t);
      }
    }
    return best;
  }
};

inline MembraneScan scan_membrane(const Trace& trace, const FixedSetRegistry& registry, const MembraneConfig& cfg) {
  cfg.thresholds.validate();
  if (cfg.rate_window < 1) throw ContractError("rate_window must be >= 1");
  MembraneScan s;
  s.window = cfg.rate_window;
  s.min_sustain = cfg.min_sustain > 0 ? cfg.min_sustain : default_min_sustain(registry);
  const auto sc = detail::set_completions(trace, registry);
  std::vector<int> fb;
  for (std::size_t t = 0; t < trace.feedback_firings.size(); ++t)
    if (!trace.feedback_firings[t].empty()) fb.push_back(static_cast<int>(t));
  const auto n = static_cast<std::size_t>(trace.horizon);
  s.gamma.assign(n, 0);
  s.closed.assign(n, 0);
  s.meta.assign(n, 0);
  s.active.resize(n);
  s.rate.assign(n, 0.0);
  for (int t = cfg.rate_window - 1; t < trace.horizon; ++t) {
    const int lo = t - cfg.rate_window + 1;
    const auto act = detail::active_in(sc, lo, t);
    const auto ut = static_cast<std::size_t>(t);
    s.rate[ut] = static_cast<double>(act.size());
    s.gamma[ut] = band_classify(s.rate[ut], cfg.thresholds) == Band::gamma;
    for (auto i : act) {
      s.active[ut].insert(sc.ids[i]);
      if (sc.meta[i]) s.meta[ut] = 1;
    }
    // a feedback-driven input firing followed, inside the window, by a
    // registered loop completion
    auto f = std::lower_bound(fb.begin(), fb.end(), lo);
    s.closed[ut] = f != fb.end() && *f < t && detail::hit(sc.any, *f + 1, t);
  }
  return s;
}

struct ConsciousnessVerdict {
  bool conscious = false;
  std::optional<Membrane> membrane;
  std::vector<MembraneCondition> failed;
};

/// Runs `drive` (with the configured feedback routing) and looks for a
/// stretch of at least min_sustain steps where the windowed rate is gamma,
/// the feedback loop is closed and some active set is meta.
inline ConsciousnessVerdict evaluate_membrane(const Network& net, const FixedSetRegistry& registry,
                                              const std::vector<Stimulus>& drive, const DynParams& params,
                                              const MembraneConfig& cfg = {}) {
  ConsciousnessVerdict v;
  const int min_sustain = cfg.min_sustain > 0 ? cfg.min_sustain : default_min_sustain(registry);
  const int horizon = cfg.horizon > 0 ? cfg.horizon : 3 * cfg.rate_window + min_sustain;
  auto trace = run(net, drive, params, horizon, cfg.routing);
  annotate_loops(trace, enumerate_simple_cycles(net, params.max_loop_len), params);
  const auto s = scan_membrane(trace, registry, cfg);

  if (MembraneScan::longest_run(s.gamma) < s.min_sustain) v.failed.push_back(MembraneCondition::gamma);
  if (MembraneScan::longest_run(s.closed) < s.min_sustain) v.failed.push_back(MembraneCondition::closed_loop);
  if (!registry.has_meta() || MembraneScan::longest_run(s.meta) < s.min_sustain)
    v.failed.push_back(MembraneCondition::meta);

  std::vector<char> all(s.gamma.size());
  for (std::size_t t = 0; t < all.size(); ++t) all[t] = s.gamma[t] && s.closed[t] && s.meta[t];
  int end = -1;
  const int len = MembraneScan::longest_run(all, &end);
  if (len >= s.min_sustain && v.failed.empty()) {
    Membrane m;
    const auto ue = static_cast<std::size_t>(end);
    m.active_sets = s.active[ue];
    m.rate = s.rate[ue];
    m.band = band_classify(m.rate, cfg.thresholds);
    m.sustained_for = len;
    m.closed_loop = true;
    m.from = end - len + 1;
    m.to = end;
    v.membrane = m;
    v.conscious = true;
  } else if (v.failed.empty()) {
    v.failed.push_back(MembraneCondition::duration);
  }
  return v;
}

inline std::optional<Membrane> detect_membrane(const Network& net, const FixedSetRegistry& registry,
                                               const std::vector<Stimulus>& drive, const DynParams& params,
                                               const MembraneConfig& cfg = {}) {
  return evaluate_membrane(net, registry, drive, params, cfg).membrane;
}

inline ConsciousnessVerdict is_minimally_conscious(const Network& net, const FixedSetRegistry& registry,
                                                   const std::vector<Stimulus>& drive, const DynParams& params,
                                                   const MembraneConfig& cfg = {}) {
  return evaluate_membrane(net, registry, drive, params, cfg);
}

inline nlohmann::json to_json(const Membrane& m) {
  nlohmann::json j;
  j["active_sets"] = nlohmann::json::array();
  for (auto id : m.active_sets) j["active_sets"].push_back(id.value);
  j["rate"] = m.rate;
  j["band"] = to_string(m.band);
  j["sustained_for"] = m.sustained_for;
  j["closed_loop"] = m.closed_loop;
  return j;
}

inline nlohmann::json to_json(const ConsciousnessVerdict& v) {
  nlohmann::json j;
  j["conscious"] = v.conscious;
  j["membrane"] = v.membrane ? to_json(*v.membrane) : nlohmann::json(nullptr);
  j["failed"] = nlohmann::json::array();
  for (auto c : v.failed) j["failed"].push_back(to_string(c));
  return j;
}

}  // namespace spl
