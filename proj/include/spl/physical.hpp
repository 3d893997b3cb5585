#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/error.hpp"
#include "spl/parallel.hpp"
#include "spl/stats.hpp"

namespace spl::physical {

enum class FeatureKind { hill, valley, loop };

inline const char* to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::hill: return "hill";
    case FeatureKind::valley: return "valley";
    case FeatureKind::loop: return "loop";
  }
  return "?";
}

inline FeatureKind feature_kind_from(const std::string& s) {
  if (s == "hill") return FeatureKind::hill;
  if (s == "valley") return FeatureKind::valley;
  if (s == "loop") return FeatureKind::loop;
  throw SchemaError("unknown feature kind " + s);
}

/// Friction inside a freshly converted loop feature.
inline constexpr double kLubricatedFriction = 0.001;
/// Arc length of the side ring of a loop feature.
inline constexpr double kLoopCircumference = 0.25;

/// One unit of arc length. Hills raise the potential by `value` at their
/// midpoint, valleys and loops lower it by `value`; every feature is zero at
/// both ends.
struct Feature {
  FeatureKind kind = FeatureKind::valley;
  double value = 1.0;
  /// Only meaningful for loops.
  double loop_friction = 0.0;

  bool operator==(const Feature&) const = default;
};

/// Ball transfer point between two rings, located at segment boundaries
/// (boundary i is the start of segment i). Undirected junctions let balls
/// cross both ways; directed ones only from a to b.
struct Junction {
  std::size_t ring_a = 0, boundary_a = 0;
  std::size_t ring_b = 0, boundary_b = 0;
  bool directed = false;

  bool operator==(const Junction&) const = default;
};

struct TrackBlueprint {
  /// Each ring is a cyclic list of features.
  std::vector<std::vector<Feature>> rings;
  std::vector<Junction> junctions;
  double base_friction = 0.5;
  std::size_t n_balls = 4;

  bool operator==(const TrackBlueprint&) const = default;

  const std::vector<Feature>& segments() const { return rings.at(0); }

  void validate() const {
    if (rings.empty()) throw ContractError("blueprint has no rings");
    for (const auto& r : rings) {
      if (r.empty()) throw ContractError("blueprint ring has no segments");
      for (const auto& f : r) {
        if (!(f.value > 0) || !std::isfinite(f.value)) throw ContractError("feature heights and depths must be > 0");
        if (f.loop_friction < 0) throw ContractError("loop_friction must be >= 0");
      }
    }
    if (base_friction < 0) throw ContractError("base_friction must be >= 0");
    for (const auto& j : junctions)
      if (j.ring_a >= rings.size() || j.ring_b >= rings.size() || j.boundary_a >= rings[j.ring_a].size() ||
          j.boundary_b >= rings[j.ring_b].size())
        throw ContractError("junction index out of range");
  }

  /// Main rings plus the side ring of every loop feature.
  std::size_t cycle_count() const {
    std::size_t c = rings.size();
    for (const auto& r : rings)
      for (const auto& f : r) c += f.kind == FeatureKind::loop;
    return c;
  }
};

inline TrackBlueprint single_ring(std::vector<Feature> segments, double base_friction = 0.5, std::size_t n_balls = 4) {
  TrackBlueprint bp{{std::move(segments)}, {}, base_friction, n_balls};
  bp.validate();
  return bp;
}

// ---- rewrite operators -----------------------------------------------------

/// Inserts k valleys into ring 0, spread evenly after the existing features.
/// New valleys are half as deep as the deepest existing valley or loop.
inline TrackBlueprint add_valleys(const TrackBlueprint& bp, std::size_t k) {
  if (k < 1) throw ContractError("add_valleys needs k >= 1");
  bp.validate();
  double deepest = 0.0;
  for (const auto& f : bp.segments())
    if (f.kind != FeatureKind::hill) deepest = std::max(deepest, f.value);
  const Feature fresh{FeatureKind::valley, deepest > 0 ? deepest / 2 : 0.5, 0.0};
  const auto& old = bp.segments();
  const std::size_t n = old.size();
  // after_count[i]: new valleys placed right after original feature i
  std::vector<std::size_t> after_count(n, 0);
  for (std::size_t j = 0; j < k; ++j) ++after_count[(j * n) / k];
  std::vector<Feature> out;
  std::vector<std::size_t> new_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    new_index[i] = out.size();
    out.push_back(old[i]);
    for (std::size_t c = 0; c < after_count[i]; ++c) out.push_back(fresh);
  }
  TrackBlueprint res = bp;
  res.rings[0] = std::move(out);
  for (auto& jn : res.junctions) {
    if (jn.ring_a == 0) jn.boundary_a = new_index[jn.boundary_a];
    if (jn.ring_b == 0) jn.boundary_b = new_index[jn.boundary_b];
  }
  return res;
}

inline TrackBlueprint valley_to_loop(const TrackBlueprint& bp, std::size_t index, std::size_t ring = 0,
                                     double loop_friction = kLubricatedFriction) {
  bp.validate();
  if (ring >= bp.rings.size() || index >= bp.rings[ring].size()) throw ContractError("feature index out of range");
  const auto& f = bp.rings[ring][index];
  if (f.kind != FeatureKind::valley)
    throw ContractError("feature " + std::to_string(index) + " is a " + to_string(f.kind) + ", not a valley");
  TrackBlueprint res = bp;
  res.rings[ring][index].kind = FeatureKind::loop;
  res.rings[ring][index].loop_friction = loop_friction;
  return res;
}

inline TrackBlueprint all_valleys_to_loops(TrackBlueprint bp, double loop_friction = kLubricatedFriction) {
  for (std::size_t r = 0; r < bp.rings.size(); ++r)
    for (std::size_t i = 0; i < bp.rings[r].size(); ++i)
      if (bp.rings[r][i].kind == FeatureKind::valley) bp = valley_to_loop(bp, i, r, loop_friction);
  return bp;
}

namespace detail {

inline TrackBlueprint concat(const TrackBlueprint& a, const TrackBlueprint& b) {
  TrackBlueprint out = a;
  const std::size_t off = a.rings.size();
  out.rings.insert(out.rings.end(), b.rings.begin(), b.rings.end());
  for (auto j : b.junctions) {
    j.ring_a += off;
    j.ring_b += off;
    out.junctions.push_back(j);
  }
  out.n_balls = a.n_balls + b.n_balls;
  return out;
}

inline void check_boundary(const TrackBlueprint& bp, std::size_t i, const char* which) {
  if (i >= bp.segments().size()) throw ContractError(std::string("junction index out of range in ") + which);
}

}  // namespace detail

/// Both blueprints side by side, sharing undirected junctions between ring 0
/// of `a` and ring 0 of `b`.
inline TrackBlueprint merge_blueprints(const TrackBlueprint& a, const TrackBlueprint& b,
                                       const std::vector<std::pair<std::size_t, std::size_t>>& junctions) {
  a.validate();
  b.validate();
  if (a == b) throw ContractError("cannot merge a blueprint with itself");
  if (junctions.empty()) throw ContractError("merge needs at least one junction");
  auto out = detail::concat(a, b);
  for (const auto& [i, j] : junctions) {
    detail::check_boundary(a, i, "first blueprint");
    detail::check_boundary(b, j, "second blueprint");
    out.junctions.push_back({0, i, a.rings.size(), j, false});
  }
  return out;
}

/// Both blueprints joined by a one-way channel from ring 0 of `a` to ring 0
/// of `b`.
inline TrackBlueprint link_blueprints(const TrackBlueprint& a, const TrackBlueprint& b,
                                      std::pair<std::size_t, std::size_t> channel) {
  a.validate();
  b.validate();
  detail::check_boundary(a, channel.first, "first blueprint");
  detail::check_boundary(b, channel.second, "second blueprint");
  auto out = detail::concat(a, b);
  out.junctions.push_back({0, channel.first, a.rings.size(), channel.second, true});
  return out;
}

// ---- simulation ------------------------------------------------------------

struct TrackSimParams {
  double step_dt = 0.01;
  /// Poisson rate of energy bursts per unit time.
  double energy_burst_rate = 0.02;
  /// Kinetic energy added per burst.
  double burst_magnitude = 0.3;
  double horizon = 1000.0;
  std::uint64_t seed = 0;
  /// Steps between recorded samples.
  std::size_t sample_every = 100;

  void validate() const {
    if (!(horizon > 0)) throw ContractError("horizon must be > 0");
    if (!(step_dt > 0)) throw ContractError("step_dt must be > 0");
    if (energy_burst_rate < 0 || burst_magnitude < 0) throw ContractError("burst parameters must be >= 0");
    if (sample_every < 1) throw ContractError("sample_every must be >= 1");
  }
};

inline constexpr double kMotionEps = 1e-3;

struct TrackSample {
  double time;
  std::size_t ball;
  std::size_t ring;
  double position;
  double speed;
  double energy;

  bool operator==(const TrackSample&) const = default;
};

struct Transfer {
  double time;
  std::size_t ball;
  std::size_t from_ring;
  std::size_t to_ring;

  bool operator==(const Transfer&) const = default;
};

struct TrackTrace {
  std::uint64_t seed = 0;
  double dt = 0;
  std::size_t steps = 0;
  std::size_t n_balls = 0;
  double initial_energy = 0;
  double final_energy = 0;
  double friction_loss = 0;
  double collision_loss = 0;
  double burst_input = 0;
  /// Largest per-step violation of the energy balance.
  double max_audit_error = 0;
  double max_speed = 0;
  /// Total time during which some ball moved faster than kMotionEps.
  double moving_time = 0;
  std::size_t bursts = 0;
  std::size_t collisions = 0;
  /// Entries into and exits from loop side rings.
  std::size_t ring_switches = 0;
  std::vector<Transfer> transfers;
  /// Per ball: passage times through valley/loop bottoms and side-ring
  /// revolutions.
  std::vector<std::vector<double>> passages;
  std::vector<TrackSample> samples;

  bool operator==(const TrackTrace&) const = default;
};

namespace detail {

inline double wrap(double s, double len) {
  s = std::fmod(s, len);
  return s < 0 ? s + len : s;
}

inline double feature_potential(const Feature& f, double u) {
  const double b = std::sin(std::numbers::pi * u);
  return (f.kind == FeatureKind::hill ? f.value : -f.value) * b * b;
}

inline double feature_slope(const Feature& f, double u) {
  const double d = std::numbers::pi * std::sin(2 * std::numbers::pi * u);
  return (f.kind == FeatureKind::hill ? f.value : -f.value) * d;
}

struct Ball {
  std::size_t ring = 0;
  double s = 0;  ///< arc position on the ring (parked spot while in a side ring)
  double v = 0;
  bool in_side = false;
  double phase = 0;  ///< distance travelled around the side ring
};

class Track {
 public:
  explicit Track(const TrackBlueprint& bp) : bp_(bp) {}

  double length(std::size_t r) const { return static_cast<double>(bp_.rings[r].size()); }

  const Feature& feature_at(std::size_t r, double s) const {
    const auto& ring = bp_.rings[r];
    auto i = static_cast<std::size_t>(std::floor(wrap(s, length(r))));
    return ring[std::min(i, ring.size() - 1)];
  }

  double potential(std::size_t r, double s) const {
    const double w = wrap(s, length(r));
    return feature_potential(feature_at(r, w), w - std::floor(w));
  }

  double slope(std::size_t r, double s) const {
    const double w = wrap(s, length(r));
    return feature_slope(feature_at(r, w), w - std::floor(w));
  }

  /// Discrete gradient of the potential between s0 and s1 (unwrapped).
  double secant(std::size_t r, double s0, double s1) const {
    const double ds = s1 - s0;
    if (std::abs(ds) < 1e-9) return slope(r, 0.5 * (s0 + s1));
    return (potential(r, s1) - potential(r, s0)) / ds;
  }

  double energy(const Ball& b) const { return 0.5 * b.v * b.v + potential(b.ring, b.s); }

  const TrackBlueprint& blueprint() const { return bp_; }

 private:
  const TrackBlueprint& bp_;
};

/// Integer points k + offset crossed strictly between a and b (a != b).
inline std::vector<double> crossed(double a, double b, double offset) {
  std::vector<double> out;
  const double lo = std::min(a, b), hi = std::max(a, b);
  for (double k = std::ceil(lo - offset) + offset; k < hi; k += 1.0)
    if (k > lo) out.push_back(k);
  if (b < a) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Evolves the balls with a discrete-gradient implicit midpoint scheme, so
/// that kinetic + potential energy changes exactly by the friction work each
/// step. Balls that roll through the bottom of a loop feature enter its side
/// ring and circulate there with the loop's own friction until a burst kicks
/// them back onto the track. Collisions are perfectly inelastic between
/// equal masses.
inline TrackTrace simulate_track(const TrackBlueprint& bp, const TrackSimParams& sim) {
  bp.validate();
  sim.validate();
  detail::Track track(bp);
  const double dt = sim.step_dt;
  const double gamma = bp.base_friction;

  // stable points, in ring order
  std::vector<std::pair<std::size_t, std::size_t>> wells;
  for (std::size_t r = 0; r < bp.rings.size(); ++r)
    for (std::size_t i = 0; i < bp.rings[r].size(); ++i)
      if (bp.rings[r][i].kind != FeatureKind::hill) wells.emplace_back(r, i);
  std::vector<detail::Ball> balls(bp.n_balls);
  for (std::size_t k = 0; k < balls.size(); ++k) {
    auto& b = balls[k];
    if (wells.empty()) {
      b.ring = k % bp.rings.size();
      b.s = 0.0;
    } else {
      const auto [r, i] = wells[k % wells.size()];
      b.ring = r;
      b.s = static_cast<double>(i) + 0.5;
      b.in_side = bp.rings[r][i].kind == FeatureKind::loop;
    }
  }

  TrackTrace tr;
  tr.seed = sim.seed;
  tr.dt = dt;
  tr.n_balls = balls.size();
  tr.passages.resize(balls.size());
  auto total_energy = [&] {
    double e = 0;
    for (const auto& b : balls) e += track.energy(b);
    return e;
  };
  tr.initial_energy = total_energy();

  std::mt19937_64 rng(sim.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> gap(sim.energy_burst_rate > 0 ? sim.energy_burst_rate : 1.0);
  double next_burst = sim.energy_burst_rate > 0 ? gap(rng) : std::numeric_limits<double>::infinity();

  const auto steps = static_cast<std::size_t>(std::ceil(sim.horizon / dt - 1e-9));
  tr.steps = steps;
  std::vector<double> s_prev(balls.size());
  for (std::size_t step = 0; step < steps; ++step) {
    const double t0 = static_cast<double>(step) * dt;
    const double t1 = t0 + dt;

    // bursts arriving during this step act at its start
    while (next_burst < t1) {
      if (!balls.empty()) {
        auto& b = balls[static_cast<std::size_t>(unit(rng) * static_cast<double>(balls.size())) % balls.size()];
        const double dir = b.v > 0 ? 1.0 : b.v < 0 ? -1.0 : (unit(rng) < 0.5 ? -1.0 : 1.0);
        b.v = dir * std::sqrt(b.v * b.v + 2.0 * sim.burst_magnitude);
        if (b.in_side) {
          b.in_side = false;
          ++tr.ring_switches;
        }
        tr.burst_input += sim.burst_magnitude;
        ++tr.bursts;
      }
      next_burst += gap(rng);
    }

    for (std::size_t k = 0; k < balls.size(); ++k) {
      auto& b = balls[k];
      s_prev[k] = b.s;
      if (b.in_side) {
        const double gl = track.feature_at(b.ring, b.s).loop_friction;
        const double v1 = b.v * (1.0 - 0.5 * dt * gl) / (1.0 + 0.5 * dt * gl);
        const double vbar = 0.5 * (b.v + v1);
        tr.friction_loss += gl * dt * vbar * vbar;
        const double before = std::floor(std::abs(b.phase) / kLoopCircumference);
        b.phase += dt * vbar;
        const double after = std::floor(std::abs(b.phase) / kLoopCircumference);
        for (double c = before; c < after; c += 1.0) tr.passages[k].push_back(t1);
        b.v = v1;
        continue;
      }
      // fixed-point solve of the implicit step
      double s1 = b.s + dt * b.v, v1 = b.v;
      for (int it = 0; it < 100; ++it) {
        const double g = track.secant(b.ring, b.s, s1);
        v1 = (b.v - dt * g - 0.5 * dt * gamma * b.v) / (1.0 + 0.5 * dt * gamma);
        const double next = b.s + 0.5 * dt * (b.v + v1);
        const bool done = std::abs(next - s1) < 1e-15;
        s1 = next;
        if (done) break;
      }
      v1 = (b.v - dt * track.secant(b.ring, b.s, s1) - 0.5 * dt * gamma * b.v) / (1.0 + 0.5 * dt * gamma);
      const double vbar = (s1 - b.s) / dt;
      tr.friction_loss += gamma * dt * vbar * vbar;
      // the remaining mismatch is rounding only; fold it into v1 exactly
      const double s_old = b.s;
      b.v = v1;
      b.s = s1;

      // bottoms crossed: passages, and capture by loop side rings
      for (double x : detail::crossed(s_old, s1, 0.5)) {
        tr.passages[k].push_back(t1);
        if (track.feature_at(b.ring, x).kind == FeatureKind::loop) {
          b.in_side = true;
          b.phase = 0;
          ++tr.ring_switches;
          break;
        }
      }
      if (b.in_side) continue;

      // junction transfers at segment boundaries
      for (double x : detail::crossed(s_old, s1, 0.0)) {
        const auto boundary = static_cast<std::size_t>(detail::wrap(x, track.length(b.ring)) + 0.5) %
                              bp.rings[b.ring].size();
        for (const auto& jn : bp.junctions) {
          std::size_t to_ring, to_boundary;
          if (jn.ring_a == b.ring && jn.boundary_a == boundary) {
            to_ring = jn.ring_b;
            to_boundary = jn.boundary_b;
          } else if (!jn.directed && jn.ring_b == b.ring && jn.boundary_b == boundary) {
            to_ring = jn.ring_a;
            to_boundary = jn.boundary_a;
          } else {
            continue;
          }
          if (unit(rng) >= 0.5) continue;
          const double s_new = detail::wrap(static_cast<double>(to_boundary) + (s1 - x), track.length(to_ring));
          const double ke = 0.5 * b.v * b.v + track.potential(b.ring, s1) - track.potential(to_ring, s_new);
          if (ke < 0) continue;
          tr.transfers.push_back({t1, k, b.ring, to_ring});
          b.v = (b.v >= 0 ? 1.0 : -1.0) * std::sqrt(2.0 * ke);
          b.ring = to_ring;
          b.s = s_new;
          s_prev[k] = s_new - (s1 - s_old);
          break;
        }
        break;
      }
    }

    // inelastic collisions between balls that passed each other on a ring
    for (std::size_t i = 0; i < balls.size(); ++i)
      for (std::size_t j = i + 1; j < balls.size(); ++j) {
        auto& a = balls[i];
        auto& c = balls[j];
        if (a.in_side || c.in_side || a.ring != c.ring) continue;
        const double len = track.length(a.ring);
        auto rel = [&](double x, double y) {
          double d = detail::wrap(y - x, len);
          return d > len / 2 ? d - len : d;
        };
        const double d0 = rel(s_prev[i], s_prev[j]), d1 = rel(a.s, c.s);
        if (d0 * d1 < 0 && std::abs(d0) < 0.5 && std::abs(d1) < 0.5) {
          const double m = 0.5 * (a.v + c.v);
          tr.collision_loss += 0.25 * (a.v - c.v) * (a.v - c.v);
          a.v = m;
          c.v = m;
          ++tr.collisions;
        }
      }

    for (auto& b : balls) b.s = detail::wrap(b.s, track.length(b.ring));

    bool moving = false;
    for (const auto& b : balls) {
      tr.max_speed = std::max(tr.max_speed, std::abs(b.v));
      moving = moving || std::abs(b.v) > kMotionEps;
    }
    if (moving) tr.moving_time += dt;
    const double e = total_energy();
    tr.max_audit_error = std::max(
        tr.max_audit_error, std::abs(e + tr.friction_loss + tr.collision_loss - tr.burst_input - tr.initial_energy));
    if ((step + 1) % sim.sample_every == 0)
      for (std::size_t k = 0; k < balls.size(); ++k)
        tr.samples.push_back({t1, k, balls[k].ring, balls[k].s, std::abs(balls[k].v), track.energy(balls[k])});
  }
  tr.final_energy = total_energy();
  return tr;
}

/// CSV columns: time, ball, ring, position, speed, energy.
inline void write_csv(std::ostream& out, const TrackTrace& tr) {
  out << "time,ball,ring,position,speed,energy\n";
  char buf[256];
  for (const auto& s : tr.samples) {
    std::snprintf(buf, sizeof buf, "%.9g,%zu,%zu,%.9g,%.9g,%.9g\n", s.time, s.ball, s.ring, s.position, s.speed,
                  s.energy);
    out << buf;
  }
}

// ---- SPL test ----------------------------------------------------------------

/// Recurrence period of an event series by autocorrelation of binned counts.
/// Returns 0 when no clear recurrence is found.
inline double autocorrelation_period(const std::vector<double>& events, double horizon, double dt) {
  if (events.size() < 10) return 0.0;
  const double width = std::max(10 * dt, horizon / 4096.0);
  const auto nbins = static_cast<std::size_t>(std::ceil(horizon / width)) + 1;
  std::vector<double> x(nbins, 0.0);
  for (double e : events) x[std::min(nbins - 1, static_cast<std::size_t>(e / width))] += 1.0;
  const double mean = static_cast<double>(events.size()) / static_cast<double>(nbins);
  double var = 0;
  for (auto& v : x) {
    v -= mean;
    var += v * v;
  }
  if (var <= 0) return 0.0;
  const std::size_t max_lag = nbins / 4;
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double acc = 0;
    for (std::size_t i = 0; i + k < nbins; ++i) acc += x[i] * x[i + k];
    r[k] = acc / var;
  }
  // skip the initial lobe, then take the highest peak
  std::size_t k = 1;
  while (k <= max_lag && r[k] > 0) ++k;
  std::size_t best = 0;
  for (; k <= max_lag; ++k)
    if (best == 0 || r[k] > r[best]) best = k;
  if (best == 0 || r[best] < 0.2) return 0.0;
  return static_cast<double>(best) * width;
}

struct SplVerdict {
  bool is_spl = false;
  double period_estimate = 0;
  double sustain_time = 0;
  double ratio = 0;
  bool recurring = false;    ///< condition (a)
  bool interacting = false;  ///< condition (b)
  bool stable = false;       ///< condition (c)
  /// Single-cycle designs are not required to meet (b).
  bool b_waived = false;
};

inline constexpr double kLongevityFactor = 10.0;

/// (a) some ball shows recurring passages; the period is the slowest one
/// found. (b) at least two cycles exchange balls or energy. (c) the energy
/// balance holds and speeds stay within what the injected energy allows.
inline SplVerdict spl_test(const TrackTrace& tr, const TrackBlueprint& bp) {
  SplVerdict v;
  const double horizon = static_cast<double>(tr.steps) * tr.dt;
  for (const auto& ev : tr.passages) v.period_estimate = std::max(v.period_estimate, autocorrelation_period(ev, horizon, tr.dt));
  v.recurring = v.period_estimate > 0;
  v.sustain_time = tr.moving_time;
  v.ratio = v.recurring ? v.sustain_time / v.period_estimate : 0.0;
  v.b_waived = bp.cycle_count() < 2;
  v.interacting = !v.b_waived && (tr.collisions > 0 || tr.ring_switches > 0 || !tr.transfers.empty());
  // no ball can hold more kinetic energy than everything injected plus the
  // potential released by all balls sitting at the deepest well
  double deepest = 0;
  for (const auto& r : bp.rings)
    for (const auto& f : r)
      if (f.kind != FeatureKind::hill) deepest = std::max(deepest, f.value);
  const double budget =
      std::sqrt(2.0 * std::max(0.0, tr.initial_energy + tr.burst_input + deepest * static_cast<double>(bp.n_balls)));
  v.stable = tr.max_audit_error < 1e-6 && tr.max_speed <= budget + 1e-9;
  v.is_spl = v.recurring && v.stable && v.ratio >= kLongevityFactor;
  return v;
}

// ---- designs -------------------------------------------------------------------

/// Curled inclined plane: one hill and a single valley.
inline TrackBlueprint design_b(std::size_t n_balls = 4, double base_friction = 0.5) {
  return single_ring({{FeatureKind::hill, 1.0, 0.0}, {FeatureKind::valley, 1.0, 0.0}}, base_friction, n_balls);
}

/// Several valleys along the path.
inline TrackBlueprint design_c(std::size_t n_balls = 4, double base_friction = 0.5) {
  return add_valleys(design_b(n_balls, base_friction), 3);
}

/// Every valley of design (c) replaced by a lubricated loop.
inline TrackBlueprint design_d(std::size_t n_balls = 4, double base_friction = 0.5) {
  return all_valleys_to_loops(design_c(n_balls, base_friction));
}

struct BurstSetting {
  double rate;
  double magnitude;
};

/// Burst settings over which the design ordering is checked.
inline std::vector<BurstSetting> burst_grid() { return {{0.01, 0.2}, {0.02, 0.3}, {0.05, 0.3}, {0.02, 0.6}}; }

/// sustain_time (moving time) for seeds seed0 .. seed0 + n - 1.
inline std::vector<double> sustain_over_seeds(const TrackBlueprint& bp, TrackSimParams sim, std::size_t n,
                                              std::uint64_t seed0 = 0) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    auto p = sim;
    p.seed = seed0 + i;
    out[i] = simulate_track(bp, p).moving_time;
  });
  return out;
}

// ---- JSON ----------------------------------------------------------------------

inline nlohmann::json to_json(const std::vector<Feature>& segs) {
  auto j = nlohmann::json::array();
  for (const auto& f : segs)
    j.push_back({{"kind", to_string(f.kind)}, {"value", f.value}, {"loop_friction", f.loop_friction}});
  return j;
}

inline nlohmann::json to_json(const TrackBlueprint& bp) {
  nlohmann::json j;
  if (bp.rings.size() == 1) {
    j["segments"] = to_json(bp.rings[0]);
  } else {
    j["rings"] = nlohmann::json::array();
    for (const auto& r : bp.rings) j["rings"].push_back({{"segments", to_json(r)}});
    j["junctions"] = nlohmann::json::array();
    for (const auto& jn : bp.junctions)
      j["junctions"].push_back({{"ring_a", jn.ring_a},
                                {"boundary_a", jn.boundary_a},
                                {"ring_b", jn.ring_b},
                                {"boundary_b", jn.boundary_b},
                                {"directed", jn.directed}});
  }
  j["base_friction"] = bp.base_friction;
  j["n_balls"] = bp.n_balls;
  return j;
}

inline std::vector<Feature> segments_from_json(const nlohmann::json& j) {
  std::vector<Feature> out;
  for (const auto& s : j) {
    Feature f;
    f.kind = feature_kind_from(s.at("kind").get<std::string>());
    f.value = s.at("value").get<double>();
    f.loop_friction = s.value("loop_friction", f.kind == FeatureKind::loop ? kLubricatedFriction : 0.0);
    out.push_back(f);
  }
  return out;
}

inline TrackBlueprint blueprint_from_json(const nlohmann::json& j) {
  TrackBlueprint bp;
  try {
    if (j.contains("rings")) {
      for (const auto& r : j.at("rings")) bp.rings.push_back(segments_from_json(r.at("segments")));
      for (const auto& jn : j.value("junctions", nlohmann::json::array()))
        bp.junctions.push_back({jn.at("ring_a").get<std::size_t>(), jn.at("boundary_a").get<std::size_t>(),
                                jn.at("ring_b").get<std::size_t>(), jn.at("boundary_b").get<std::size_t>(),
                                jn.value("directed", false)});
    } else {
      bp.rings.push_back(segments_from_json(j.at("segments")));
    }
    bp.base_friction = j.value("base_friction", bp.base_friction);
    bp.n_balls = j.value("n_balls", bp.n_balls);
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("blueprint: ") + ex.what());
  }
  try {
    bp.validate();
  } catch (const ContractError& ex) {
    throw SchemaError(std::string("blueprint: ") + ex.what());
  }
  return bp;
}

}  // namespace spl::physical
