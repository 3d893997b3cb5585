#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/chemical.hpp"
#include "spl/continuity.hpp"
#include "spl/dynamics.hpp"
#include "spl/error.hpp"
#include "spl/fixedset.hpp"
#include "spl/fixtures.hpp"
#include "spl/growth.hpp"
#include "spl/membrane.hpp"
#include "spl/network.hpp"
#include "spl/parallel.hpp"
#include "spl/physical.hpp"
#include "spl/stats.hpp"

namespace spl {

// ---- errors --------------------------------------------------------------------

/// Any problem with a scenario file detected before running it.
class ScenarioError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

class ParseError : public ScenarioError {
 public:
  ParseError(const std::string& path, std::size_t line, std::size_t column, const std::string& what)
      : ScenarioError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": parse error: " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownKindError : public ScenarioError {
 public:
  explicit UnknownKindError(const std::string& kind) : ScenarioError("unknown scenario kind '" + kind + "'") {}
};

class DanglingReferenceError : public ScenarioError {
 public:
  DanglingReferenceError(const std::string& field, const std::string& target)
      : ScenarioError("dangling reference in '" + field + "': " + target + " does not exist"), target_(target) {}
  const std::string& target() const noexcept { return target_; }

 private:
  std::string target_;
};

class MissingBlockError : public ScenarioError {
 public:
  explicit MissingBlockError(const std::string& block)
      : ScenarioError("missing required block '" + block + "'"), block_(block) {}
  const std::string& block() const noexcept { return block_; }

 private:
  std::string block_;
};

/// A module error raised while running one replicate.
class ReplicateError : public Error {
 public:
  ReplicateError(std::size_t replicate, const std::string& what)
      : Error("replicate " + std::to_string(replicate) + ": " + what), replicate_(replicate) {}
  std::size_t replicate() const noexcept { return replicate_; }

 private:
  std::size_t replicate_;
};

// ---- scenario --------------------------------------------------------------------

enum class ScenarioKind { dynamics, fixedset, growth, membrane, continuity, physical, chemical, claim3, persistence, split };

inline const std::vector<std::pair<ScenarioKind, const char*>>& scenario_kinds() {
  static const std::vector<std::pair<ScenarioKind, const char*>> kinds{
      {ScenarioKind::dynamics, "dynamics"},   {ScenarioKind::fixedset, "fixedset"},
      {ScenarioKind::growth, "growth"},       {ScenarioKind::membrane, "membrane"},
      {ScenarioKind::continuity, "continuity"}, {ScenarioKind::physical, "physical"},
      {ScenarioKind::chemical, "chemical"},   {ScenarioKind::claim3, "claim3"},
      {ScenarioKind::persistence, "persistence"}, {ScenarioKind::split, "split"}};
  return kinds;
}

inline const char* to_string(ScenarioKind k) {
  for (const auto& [kind, name] : scenario_kinds())
    if (kind == k) return name;
  return "?";
}

inline ScenarioKind scenario_kind_from(const std::string& s) {
  for (const auto& [kind, name] : scenario_kinds())
    if (s == name) return kind;
  throw UnknownKindError(s);
}

enum class MetricsFormat { json, csv };

inline MetricsFormat metrics_format_from(const std::string& s) {
  if (s == "json") return MetricsFormat::json;
  if (s == "csv") return MetricsFormat::csv;
  throw ScenarioError("unknown output format '" + s + "' (expected json or csv)");
}

inline const char* to_string(MetricsFormat f) { return f == MetricsFormat::json ? "json" : "csv"; }

struct OutputSpec {
  std::string path;
  MetricsFormat format = MetricsFormat::json;
};

/// A validated scenario with every asset reference resolved.
struct Scenario {
  std::string id;
  ScenarioKind kind = ScenarioKind::dynamics;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  OutputSpec output;
  /// The kind-specific parameter block.
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json expect = nlohmann::json::array();

  std::optional<fixtures::Fixture> network;
  std::vector<std::pair<std::string, physical::TrackBlueprint>> blueprints;
  std::optional<chemical::ReactionNetwork> reactions;
  /// Persistence only: explicit chain network; defaults to the loop minus its
  /// closing reaction.
  std::optional<chemical::ReactionNetwork> chain;
  std::vector<TokenSeq> corpus;

  /// Document as loaded, with command-line overrides applied.
  nlohmann::json document;
};

// ---- JSON readers for module parameters -------------------------------------------

namespace io {

using nlohmann::json;
using detail::get_or;

inline Stimulus stimulus_from_json(const json& j) {
  Stimulus s;
  if (j.is_array()) {
    for (const auto& n : j) s.pattern[n.get<std::string>()] = 1.0;
    return s;
  }
  const auto& p = detail::require(j, "pattern");
  if (p.is_array()) {
    for (const auto& n : p) s.pattern[n.get<std::string>()] = get_or(j, "value", 1.0);
  } else {
    for (const auto& [k, v] : p.items()) s.pattern[k] = v.get<double>();
  }
  s.duration = get_or(j, "duration", 1);
  s.onset = get_or(j, "onset", 0);
  if (s.duration < 1 || s.onset < 0) throw SchemaError("stimulus needs duration >= 1 and onset >= 0");
  return s;
}

inline json to_json(const Stimulus& s) {
  json p = json::object();
  for (const auto& [k, v] : s.pattern) p[k] = v;
  return {{"pattern", p}, {"duration", s.duration}, {"onset", s.onset}};
}

inline std::vector<Stimulus> stimuli_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("stimuli must be an array");
  std::vector<Stimulus> out;
  for (const auto& s : j) out.push_back(stimulus_from_json(s));
  return out;
}

inline StimulusFamily family_from_json(const json& j) {
  StimulusFamily f;
  f.label = get_or<std::string>(j, "label", "family");
  f.average = stimulus_from_json(detail::require(j, "average"));
  for (const auto& v : detail::require(j, "variations")) f.variations.push_back(stimulus_from_json(v));
  return f;
}

inline std::vector<FeedbackRoute> routing_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("routing must be an array");
  std::vector<FeedbackRoute> out;
  for (const auto& r : j)
    out.push_back({detail::require(r, "from").get<std::string>(), detail::require(r, "to").get<std::string>(),
                   get_or(r, "weight", 1.0)});
  return out;
}

inline DynParams dyn_params_from_json(const json& j) {
  DynParams p;
  if (j.is_null()) return p;
  p.activation_decay = get_or(j, "activation_decay", p.activation_decay);
  p.trigger_window = get_or(j, "trigger_window", p.trigger_window);
  p.min_traversals = get_or(j, "min_traversals", p.min_traversals);
  p.sustain_horizon = get_or(j, "sustain_horizon", p.sustain_horizon);
  p.noise_rate = get_or(j, "noise_rate", p.noise_rate);
  p.initial_energy_min_fraction = get_or(j, "initial_energy_min_fraction", p.initial_energy_min_fraction);
  p.max_loop_len = get_or(j, "max_loop_len", p.max_loop_len);
  p.validate();
  return p;
}

inline LinkedLoopConfig linked_loop_config_from_json(const json& j) {
  LinkedLoopConfig c;
  c.loop_a_len = get_or(j, "loop_a_len", c.loop_a_len);
  c.loop_b_len = get_or(j, "loop_b_len", c.loop_b_len);
  c.loop_weight = get_or(j, "loop_weight", c.loop_weight);
  c.link_weight = get_or(j, "link_weight", c.link_weight);
  c.threshold = get_or(j, "threshold", c.threshold);
  c.refractory = get_or(j, "refractory", c.refractory);
  c.energy_capacity = get_or(j, "energy_capacity", c.energy_capacity);
  c.energy_recharge_rate = get_or(j, "energy_recharge_rate", c.energy_recharge_rate);
  c.firing_cost = get_or(j, "firing_cost", c.firing_cost);
  c.initial_energy_min_fraction = get_or(j, "initial_energy_min_fraction", c.initial_energy_min_fraction);
  c.sustain_horizon = get_or(j, "sustain_horizon", c.sustain_horizon);
  return c;
}

inline BandThresholds thresholds_from_json(const json& j) {
  BandThresholds t;
  if (j.is_null()) return t;
  auto range = [&](const char* key, RateInterval def) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_array() || it->size() != 2) throw SchemaError(std::string("'") + key + "' must be [lo, hi]");
    return RateInterval{(*it)[0].get<double>(), (*it)[1].get<double>()};
  };
  t.gamma_min = get_or(j, "gamma_min", t.gamma_min);
  t.beta_range = range("beta", t.beta_range);
  t.alpha_range = range("alpha", t.alpha_range);
  t.theta_range = range("theta", t.theta_range);
  t.delta_max = get_or(j, "delta_max", t.delta_max);
  t.validate();
  return t;
}

inline physical::TrackSimParams track_sim_from_json(const json& j) {
  physical::TrackSimParams p;
  if (j.is_null()) return p;
  p.step_dt = get_or(j, "step_dt", p.step_dt);
  p.energy_burst_rate = get_or(j, "energy_burst_rate", p.energy_burst_rate);
  p.burst_magnitude = get_or(j, "burst_magnitude", p.burst_magnitude);
  p.horizon = get_or(j, "horizon", p.horizon);
  p.sample_every = get_or(j, "sample_every", p.sample_every);
  p.validate();
  return p;
}

inline chemical::ChemSimParams chem_sim_from_json(const json& j) {
  chemical::ChemSimParams p;
  if (j.is_null()) return p;
  p.horizon = get_or(j, "horizon", p.horizon);
  p.sample_interval = get_or(j, "sample_interval", p.sample_interval);
  if (!(p.horizon > 0) || p.sample_interval < 0) throw SchemaError("chemical horizon must be > 0");
  return p;
}

inline json block_or_null(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? json(nullptr) : *it;
}

}  // namespace io

// ---- built-in fixtures -------------------------------------------------------------

struct FixtureInfo {
  std::string name;
  std::string asset;  ///< network, blueprint, reactions or corpus
  std::string description;
};

inline const std::vector<FixtureInfo>& fixture_catalog() {
  static const std::vector<FixtureInfo> c{
      {"fig2", "network", "five inputs, rings L1 L2 driven by any two inputs, side rings X1 X5"},
      {"fig3", "network", "edge/angle rings L1 L2 gating table rings L3 L4 and chair rings L5 L6"},
      {"fig4", "network", "fig3 with promoted table and chair sets and a lateral table-chair link"},
      {"fig4-grown", "network", "fig4 after three rounds of longitudinal growth (60 fixed sets)"},
      {"fig2-grown", "network", "fig2 fixed set grown for `rounds` rounds (default 3)"},
      {"A1b", "blueprint", "one hill and one valley"},
      {"A1c", "blueprint", "A1b with three added valleys"},
      {"A1d", "blueprint", "A1c with every valley replaced by a lubricated loop"},
      {"three-level", "blueprint", "three stable levels at increasing depth"},
      {"A4-loop", "reactions", "M1 -> M2 -> M3 -> M1 with one uphill step"},
      {"A4-chain", "reactions", "A4-loop without its closing uphill reaction"},
      {"ring-3x4", "reactions", "three independent four-species rings"},
      {"ring-3-2", "reactions", "two rings of three and two species"},
      {"pizza-corpus", "corpus", "24 short English sentences"},
  };
  return c;
}

namespace detail {

inline std::optional<fixtures::Fixture> builtin_network(const std::string& name, const nlohmann::json& opts) {
  const double recharge = io::get_or(opts, "recharge", 0.5);
  if (name == "fig2") return fixtures::Fixture{fixtures::fig2(recharge), {}};
  if (name == "fig3") return fixtures::fig3_with_parents(recharge);
  if (name == "fig4") return fixtures::fig4({}, recharge);
  if (name == "fig4-grown") return fixtures::fig4_grown(io::get_or(opts, "rounds", 3), {}, recharge);
  if (name == "fig2-grown") return fixtures::fig2_grown(io::get_or(opts, "rounds", 3), {}, recharge);
  return std::nullopt;
}

inline std::optional<physical::TrackBlueprint> builtin_blueprint(const std::string& name) {
  if (name == "A1b") return physical::design_b();
  if (name == "A1c") return physical::design_c();
  if (name == "A1d") return physical::design_d();
  if (name == "three-level") return chemical::three_level_blueprint();
  return std::nullopt;
}

inline std::optional<chemical::ReactionNetwork> builtin_reactions(const std::string& name) {
  if (name == "A4-loop") return chemical::m1m2m3_loop();
  if (name == "A4-chain") return chemical::m1m2m3_chain();
  if (name == "ring-3x4") return chemical::three_by_four();
  if (name == "ring-3-2") return chemical::two_scc();
  return std::nullopt;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json parse_text(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(origin, line, col, e.what());
  }
}

/// Resolves a reference to a file relative to the scenario directory.
inline std::filesystem::path resolve_file(const std::string& field, const std::string& ref,
                                          const std::filesystem::path& base) {
  auto p = std::filesystem::path(ref);
  if (p.is_relative()) p = base / p;
  if (!std::filesystem::exists(p)) throw DanglingReferenceError(field, p.string());
  return p;
}

/// A reference is a built-in fixture name, a relative file path, an object
/// {"fixture": name, ...options} or {"file": path}, or an inline document.
struct Ref {
  std::optional<std::string> builtin;
  nlohmann::json options = nlohmann::json::object();
  std::optional<nlohmann::json> document;
};

inline Ref read_ref(const std::string& field, const nlohmann::json& j, const std::filesystem::path& base,
                    const std::function<bool(const std::string&)>& is_builtin, bool text = false) {
  Ref r;
  std::optional<std::string> path;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (is_builtin(s)) {
      r.builtin = s;
      return r;
    }
    path = s;
  } else if (j.is_object() && j.contains("fixture")) {
    r.builtin = j["fixture"].get<std::string>();
    if (!is_builtin(*r.builtin)) throw DanglingReferenceError(field, "fixture '" + *r.builtin + "'");
    r.options = j;
    return r;
  } else if (j.is_object() && j.contains("file")) {
    path = j["file"].get<std::string>();
  } else if (j.is_object() || (text && j.is_array())) {
    r.document = j;
    return r;
  } else {
    throw ScenarioError("'" + field + "' must be a fixture name, a file path or an object");
  }
  const auto p = resolve_file(field, *path, base);
  const auto content = read_text(p);
  r.document = text ? nlohmann::json(content) : parse_text(content, p.string());
  return r;
}

inline fixtures::Fixture load_network_ref(const nlohmann::json& j, const std::filesystem::path& base) {
  auto r = read_ref("network", j, base, [](const std::string& s) { return builtin_network(s, {}) != std::nullopt; });
  if (r.builtin) return *builtin_network(*r.builtin, r.options);
  fixtures::Fixture f{build_network(network_spec_from_json(*r.document)), {}};
  if (auto it = r.document->find("registry"); it != r.document->end()) f.registry = registry_from_json(*it);
  return f;
}

inline physical::TrackBlueprint load_blueprint_ref(const nlohmann::json& j, const std::filesystem::path& base) {
  auto r = read_ref("blueprint", j, base, [](const std::string& s) { return builtin_blueprint(s) != std::nullopt; });
  if (r.builtin) return *builtin_blueprint(*r.builtin);
  return physical::blueprint_from_json(*r.document);
}

inline chemical::ReactionNetwork load_reactions_ref(const nlohmann::json& j, const std::filesystem::path& base) {
  auto r = read_ref("reaction_network", j, base,
                    [](const std::string& s) { return builtin_reactions(s) != std::nullopt; });
  if (r.builtin) return *builtin_reactions(*r.builtin);
  return chemical::reaction_network_from_json(*r.document);
}

inline std::vector<TokenSeq> load_corpus_ref(const nlohmann::json& j, const std::filesystem::path& base) {
  auto r = read_ref("corpus", j, base, [](const std::string& s) { return s == "pizza-corpus"; }, true);
  if (r.builtin) return fixtures::pizza_corpus();
  std::vector<TokenSeq> out;
  if (r.document->is_array()) {
    for (const auto& line : *r.document) out.push_back(tokenize(line.get<std::string>()));
    return out;
  }
  std::istringstream in(r.document->get<std::string>());
  return read_corpus(in);
}

inline const nlohmann::json& require_block(const nlohmann::json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) throw MissingBlockError(key);
  return *it;
}

}  // namespace detail

/// Validates `doc` and resolves its references against `base`.
inline Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base = ".",
                                   const std::string& default_id = "scenario") {
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
  Scenario s;
  s.document = doc;
  s.kind = scenario_kind_from(detail::require_block(doc, "kind").get<std::string>());
  const std::string kind = to_string(s.kind);
  try {
    s.id = io::get_or<std::string>(doc, "id", default_id);
    s.seed = io::get_or<std::uint64_t>(doc, "seed", 0);
    const long reps = io::get_or<long>(doc, "replicates", 1);
    if (reps < 0) throw ScenarioError("replicates must be >= 0");
    s.replicates = static_cast<std::size_t>(reps);
    if (auto it = doc.find("output"); it != doc.end()) {
      s.output.path = io::get_or<std::string>(*it, "path", "");
      s.output.format = metrics_format_from(io::get_or<std::string>(*it, "format", "json"));
    }
    s.params = detail::require_block(doc, kind);
    if (!s.params.is_object()) throw ScenarioError("block '" + kind + "' must be an object");
    if (auto it = doc.find("expect"); it != doc.end()) {
      if (!it->is_array()) throw ScenarioError("'expect' must be an array");
      s.expect = *it;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }

  try {
    switch (s.kind) {
      case ScenarioKind::dynamics:
        s.network = detail::load_network_ref(detail::require_block(doc, "network"), base);
        detail::require_block(s.params, "stimuli");
        break;
      case ScenarioKind::fixedset:
      case ScenarioKind::growth:
        s.network = detail::load_network_ref(detail::require_block(doc, "network"), base);
        detail::require_block(s.params, "family");
        break;
      case ScenarioKind::membrane:
        s.network = detail::load_network_ref(detail::require_block(doc, "network"), base);
        detail::require_block(s.params, "routing");
        detail::require_block(s.params, "drive");
        break;
      case ScenarioKind::continuity:
        s.corpus = detail::load_corpus_ref(detail::require_block(doc, "corpus"), base);
        detail::require_block(s.params, "sentences");
        break;
      case ScenarioKind::physical: {
        const auto& designs = detail::require_block(s.params, "designs");
        if (!designs.is_array() || designs.empty()) throw ScenarioError("'designs' must be a non-empty array");
        for (const auto& d : designs) {
          const auto name = d.is_string() ? d.get<std::string>() : detail::require(d, "name").get<std::string>();
          const auto& ref = d.is_string() ? d : detail::require(d, "blueprint");
          s.blueprints.emplace_back(name, detail::load_blueprint_ref(ref, base));
        }
        break;
      }
      case ScenarioKind::chemical:
      case ScenarioKind::persistence:
      case ScenarioKind::split:
        s.reactions = detail::load_reactions_ref(detail::require_block(doc, "reaction_network"), base);
        if (s.kind == ScenarioKind::persistence && s.params.contains("chain"))
          s.chain = detail::load_reactions_ref(s.params["chain"], base);
        break;
      case ScenarioKind::claim3:
        break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("malformed asset: ") + e.what());
  }
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("scenario file " + path.string() + " does not exist");
  const auto doc = detail::parse_text(detail::read_text(path), path.string());
  return scenario_from_json(doc, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(),
                            path.stem().string());
}

/// The scenario document with overrides applied; loading it again yields the
/// same document.
inline nlohmann::json to_json(const Scenario& s) {
  auto j = s.document;
  j["id"] = s.id;
  j["seed"] = s.seed;
  j["replicates"] = s.replicates;
  j["output"] = {{"path", s.output.path}, {"format", to_string(s.output.format)}};
  return j;
}

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::string> out;
  std::optional<MetricsFormat> format;
};

inline void apply_overrides(Scenario& s, const ScenarioOverrides& o) {
  if (o.seed) s.seed = *o.seed;
  if (o.replicates) s.replicates = *o.replicates;
  if (o.out) s.output.path = *o.out;
  if (o.format) s.output.format = *o.format;
  s.document = to_json(s);
}

// ---- metrics ---------------------------------------------------------------------

struct MetricsRow {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::string variant;
  std::map<std::string, double> values;
  std::map<std::string, std::string> labels;
};

struct SummaryStat {
  std::size_t n = 0;
  double median = 0, iqr = 0, mean = 0, min = 0, max = 0;
};

struct ExpectationResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

enum class Status { pass, fail, not_applicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "not-applicable";
  }
  return "?";
}

struct MetricsReport {
  std::string scenario_id;
  ScenarioKind kind = ScenarioKind::dynamics;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  /// Ordered by (replicate, variant order of the kind).
  std::vector<MetricsRow> rows;
  /// Keyed by variant, then metric.
  std::map<std::string, std::map<std::string, SummaryStat>> summary;
  std::vector<ExpectationResult> expectations;
  Status status = Status::not_applicable;
  /// One object per replicate holding module-level evidence per variant.
  nlohmann::json evidence = nlohmann::json::array();

  std::vector<double> values(const std::string& variant, const std::string& metric) const {
    std::vector<double> out;
    for (const auto& r : rows)
      if (r.variant == variant)
        if (auto it = r.values.find(metric); it != r.values.end()) out.push_back(it->second);
    return out;
  }
};

inline SummaryStat summarize(const std::vector<double>& xs) {
  SummaryStat s;
  s.n = xs.size();
  if (xs.empty()) return s;
  s.median = stats::median(xs);
  s.iqr = stats::iqr(xs);
  s.mean = stats::mean(xs);
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  return s;
}

inline std::map<std::string, std::map<std::string, SummaryStat>> summarize_rows(const std::vector<MetricsRow>& rows) {
  std::map<std::string, std::map<std::string, std::vector<double>>> acc;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.values) acc[r.variant][k].push_back(v);
  std::map<std::string, std::map<std::string, SummaryStat>> out;
  for (const auto& [variant, metrics] : acc)
    for (const auto& [k, xs] : metrics) out[variant][k] = summarize(xs);
  return out;
}

namespace detail {

inline double stat_of(const SummaryStat& s, const std::string& which) {
  if (which == "median") return s.median;
  if (which == "mean") return s.mean;
  if (which == "min") return s.min;
  if (which == "max") return s.max;
  if (which == "iqr") return s.iqr;
  if (which == "n") return static_cast<double>(s.n);
  throw ScenarioError("unknown statistic '" + which + "'");
}

inline bool compare(double a, const std::string& op, double b) {
  if (op == "<") return a < b;
  if (op == "<=") return a <= b;
  if (op == "==") return a == b;
  if (op == ">=") return a >= b;
  if (op == ">") return a > b;
  if (op == "!=") return a != b;
  throw ScenarioError("unknown comparison '" + op + "'");
}

inline std::string fmt9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

/// Checks one expectation. Forms:
///   {"variant", "metric", "stat", "op", "value"}
///   {"variant", "metric", "stat", "op", "ref_variant", "factor"}: compares
///       against factor x the same statistic of another variant
///   {"metric", "stat", "order": [variants...], "strict_ends": bool}:
///       non-decreasing along the list, strictly increasing end to end when
///       strict_ends is set
inline ExpectationResult check_expectation(const MetricsReport& r, const nlohmann::json& e, std::size_t index) {
  ExpectationResult out;
  out.name = io::get_or<std::string>(e, "name", "expect[" + std::to_string(index) + "]");
  const auto metric = require(e, "metric").get<std::string>();
  const auto stat = io::get_or<std::string>(e, "stat", "median");
  auto lookup = [&](const std::string& variant) -> std::optional<double> {
    auto v = r.summary.find(variant);
    if (v == r.summary.end()) return std::nullopt;
    auto m = v->second.find(metric);
    if (m == v->second.end()) return std::nullopt;
    return stat_of(m->second, stat);
  };
  if (auto it = e.find("order"); it != e.end()) {
    std::vector<double> xs;
    std::ostringstream d;
    for (const auto& v : *it) {
      auto x = lookup(v.get<std::string>());
      if (!x) {
        out.detail = "no data for variant '" + v.get<std::string>() + "'";
        return out;
      }
      xs.push_back(*x);
      d << (xs.size() > 1 ? " <= " : "") << v.get<std::string>() << "=" << fmt9(*x);
    }
    out.passed = std::is_sorted(xs.begin(), xs.end());
    if (io::get_or(e, "strict_ends", false) && xs.size() > 1) out.passed = out.passed && xs.front() < xs.back();
    out.detail = stat + " " + metric + ": " + d.str();
    return out;
  }
  const auto variant = io::get_or<std::string>(e, "variant", "all");
  const auto op = io::get_or<std::string>(e, "op", ">=");
  const auto lhs = lookup(variant);
  if (!lhs) {
    out.detail = "no data for " + variant + "/" + metric;
    return out;
  }
  double rhs = 0;
  std::string rhs_desc;
  if (auto it = e.find("ref_variant"); it != e.end()) {
    const auto ref = lookup(it->get<std::string>());
    if (!ref) {
      out.detail = "no data for " + it->get<std::string>() + "/" + metric;
      return out;
    }
    const double factor = io::get_or(e, "factor", 1.0);
    rhs = factor * *ref;
    rhs_desc = fmt9(factor) + " x " + it->get<std::string>() + " (" + fmt9(*ref) + ")";
  } else {
    rhs = require(e, "value").get<double>();
    rhs_desc = fmt9(rhs);
  }
  out.passed = compare(*lhs, op, rhs);
  out.detail = stat + " " + variant + "/" + metric + " = " + fmt9(*lhs) + " " + op + " " + rhs_desc;
  return out;
}

}  // namespace detail

/// Recomputes the summary and re-evaluates the expectations of `r`.
inline void finalize_report(MetricsReport& r, const nlohmann::json& expect) {
  r.summary = summarize_rows(r.rows);
  r.expectations.clear();
  if (r.replicates == 0) {
    r.status = Status::not_applicable;
    return;
  }
  for (std::size_t i = 0; i < expect.size(); ++i) r.expectations.push_back(detail::check_expectation(r, expect[i], i));
  r.status = std::all_of(r.expectations.begin(), r.expectations.end(), [](const auto& e) { return e.passed; })
                 ? Status::pass
                 : Status::fail;
}

// ---- experiment dispatch -----------------------------------------------------------

namespace detail {

struct ReplicateOutput {
  std::vector<MetricsRow> rows;
  nlohmann::json evidence = nlohmann::json::object();
};

using ReplicateFn = std::function<ReplicateOutput(std::uint64_t seed)>;

inline double flag(bool b) { return b ? 1.0 : 0.0; }

inline std::string join_failed(const std::vector<MembraneCondition>& f) {
  std::string s;
  for (auto c : f) s += (s.empty() ? "" : ";") + std::string(to_string(c));
  return s;
}

inline std::string loop_list(const std::set<LoopId>& loops) {
  std::string s;
  for (const auto& l : loops) s += (s.empty() ? "" : ";") + loop_key(l);
  return s;
}

inline ReplicateFn dynamics_runner(const Scenario& s) {
  const auto stimuli = io::stimuli_from_json(s.params["stimuli"]);
  const int horizon = io::get_or(s.params, "horizon", 64);
  const auto routing = s.params.contains("routing") ? io::routing_from_json(s.params["routing"]) : std::vector<FeedbackRoute>{};
  const auto base = io::dyn_params_from_json(io::block_or_null(s.params, "params"));
  const Network net = s.network->net;
  const auto loops = enumerate_simple_cycles(net, base.max_loop_len);
  int cutoff = 0;
  for (const auto& st : stimuli) cutoff = std::max(cutoff, st.onset + st.duration);
  return [=](std::uint64_t seed) {
    auto p = base;
    p.seed = seed;
    const auto tr = run(net, stimuli, p, horizon, routing);
    const auto trig = triggered_loops(tr, net, loops, p);
    std::size_t firings = 0;
    for (const auto& f : tr.firings) firings += f.size();
    MetricsRow row;
    row.variant = "all";
    row.values["firings"] = static_cast<double>(firings);
    row.values["triggered_loops"] = static_cast<double>(trig.size());
    row.values["sustain"] = static_cast<double>(self_sustain_time(net, stimuli, cutoff, p));
    row.labels["loops"] = loop_list(trig);
    ReplicateOutput out;
    out.evidence["all"] = {{"triggered", row.labels["loops"]}};
    out.rows.push_back(std::move(row));
    return out;
  };
}

inline ReplicateFn fixedset_runner(const Scenario& s) {
  const auto family = io::family_from_json(s.params["family"]);
  const double quorum = io::get_or(s.params, "quorum", 1.0);
  const int horizon = io::get_or(s.params, "horizon", kDefaultFixedSetHorizon);
  const auto base = io::dyn_params_from_json(io::block_or_null(s.params, "params"));
  const Network net = s.network->net;
  return [=](std::uint64_t seed) {
    auto p = base;
    p.seed = seed;
    const auto fs = extract_fixed_set(net, family, p, quorum, horizon);
    MetricsRow row;
    row.variant = "all";
    row.values["found"] = flag(fs.has_value());
    row.values["loops"] = fs ? static_cast<double>(fs->loop_ids.size()) : 0.0;
    row.labels["fixed_set"] = fs ? loop_list(fs->loop_ids) : "";
    ReplicateOutput out;
    out.evidence["all"] = {{"fixed_set", row.labels["fixed_set"]}};
    out.rows.push_back(std::move(row));
    return out;
  };
}

/// Sustain time of the network after each growth round.
inline ReplicateFn growth_runner(const Scenario& s) {
  const auto family = io::family_from_json(s.params["family"]);
  const int rounds = io::get_or(s.params, "rounds", 4);
  const auto base = io::dyn_params_from_json(io::block_or_null(s.params, "params"));
  GrowthParams gp;
  gp.branch_factor = io::get_or(s.params, "branch_factor", gp.branch_factor);
  gp.new_loop_len = io::get_or(s.params, "new_loop_len", gp.new_loop_len);
  gp.link_weight = io::get_or(s.params, "link_weight", gp.link_weight);
  std::vector<fixtures::Fixture> grown;
  DynParams extract = base;
  extract.initial_energy_min_fraction = 1.0;
  for (int r = 0; r <= rounds; ++r) grown.push_back(fixtures::grow_from(s.network->net, family, r, extract, gp));
  const int cutoff = family.average.onset + family.average.duration;
  return [=](std::uint64_t seed) {
    auto p = base;
    p.seed = seed;
    ReplicateOutput out;
    for (std::size_t r = 0; r < grown.size(); ++r) {
      MetricsRow row;
      row.variant = "round" + std::to_string(r);
      row.values["sustain"] = static_cast<double>(self_sustain_time(grown[r].net, {family.average}, cutoff, p));
      row.values["nodes"] = static_cast<double>(grown[r].net.node_count());
      row.values["fixed_sets"] = static_cast<double>(grown[r].registry.entries().size());
      out.evidence[row.variant] = {{"sustain", row.values["sustain"]}};
      out.rows.push_back(std::move(row));
    }
    return out;
  };
}

inline ReplicateFn membrane_runner(const Scenario& s) {
  MembraneConfig cfg;
  cfg.routing = io::routing_from_json(s.params["routing"]);
  cfg.thresholds = io::thresholds_from_json(io::block_or_null(s.params, "thresholds"));
  cfg.rate_window = io::get_or(s.params, "rate_window", cfg.rate_window);
  cfg.min_sustain = io::get_or(s.params, "min_sustain", cfg.min_sustain);
  cfg.horizon = io::get_or(s.params, "horizon", cfg.horizon);
  const auto drive = io::stimuli_from_json(s.params["drive"]);
  const auto base = io::dyn_params_from_json(io::block_or_null(s.params, "params"));
  const double scale = io::get_or(s.params, "weight_scale", 1.0);
  const Network net = scale == 1.0 ? s.network->net : fixtures::scale_weights(s.network->net, scale);
  const FixedSetRegistry reg = s.network->registry;
  return [=](std::uint64_t seed) {
    auto p = base;
    p.seed = seed;
    const auto v = evaluate_membrane(net, reg, drive, p, cfg);
    MetricsRow row;
    row.variant = "all";
    row.values["conscious"] = flag(v.conscious);
    row.values["rate"] = v.membrane ? v.membrane->rate : 0.0;
    row.values["sustained_for"] = v.membrane ? v.membrane->sustained_for : 0.0;
    row.values["active_sets"] = v.membrane ? static_cast<double>(v.membrane->active_sets.size()) : 0.0;
    row.labels["band"] = v.membrane ? to_string(v.membrane->band) : "";
    row.labels["failed"] = join_failed(v.failed);
    ReplicateOutput out;
    out.evidence["all"] = to_json(v);
    out.rows.push_back(std::move(row));
    return out;
  };
}

inline ReplicateFn continuity_runner(const Scenario& s) {
  const auto max_order = io::get_or<std::size_t>(s.params, "max_order", 3);
  const auto graph = build_prediction_graph(s.corpus, max_order);
  const auto orders = io::get_or(s.params, "orders", std::set<std::size_t>{1, 2, 3});
  const double coverage = io::get_or(s.params, "required_coverage", 0.9);
  std::vector<TokenSeq> sentences;
  for (const auto& x : s.params["sentences"]) sentences.push_back(tokenize(x.get<std::string>()));
  return [=](std::uint64_t) {
    ReplicateOutput out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto v = is_abstractly_continuous(graph, sentences[i], orders, coverage);
      MetricsRow row;
      row.variant = "s" + std::to_string(i);
      row.values["continuous"] = flag(v.continuous);
      row.values["coverage"] = v.coverage;
      row.labels["sentence"] = join(sentences[i]);
      row.labels["first_break"] = v.first_break ? join(v.first_break->context) : "";
      out.evidence[row.variant] = to_json(v);
      out.rows.push_back(std::move(row));
    }
    return out;
  };
}

/// One variant per design, or per design and burst setting when a grid is
/// given (variant "<design>@<k>").
inline ReplicateFn physical_runner(const Scenario& s) {
  const auto sim = io::track_sim_from_json(io::block_or_null(s.params, "sim"));
  std::vector<std::optional<physical::BurstSetting>> grid{std::nullopt};
  if (auto it = s.params.find("grid"); it != s.params.end()) {
    grid.clear();
    if (it->is_string() && *it == "default") {
      for (const auto& b : physical::burst_grid()) grid.emplace_back(b);
    } else {
      for (const auto& g : *it) grid.emplace_back(physical::BurstSetting{g.at(0).get<double>(), g.at(1).get<double>()});
    }
  }
  const auto blueprints = s.blueprints;
  for (const auto& [name, bp] : blueprints) bp.validate();
  return [=](std::uint64_t seed) {
    ReplicateOutput out;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (const auto& [name, bp] : blueprints) {
        auto p = sim;
        p.seed = seed;
        if (grid[g]) {
          p.energy_burst_rate = grid[g]->rate;
          p.burst_magnitude = grid[g]->magnitude;
        }
        const auto tr = physical::simulate_track(bp, p);
        const auto v = physical::spl_test(tr, bp);
        MetricsRow row;
        row.variant = grid.size() == 1 ? name : name + "@" + std::to_string(g);
        row.values["sustain_time"] = v.sustain_time;
        row.values["period"] = v.period_estimate;
        row.values["ratio"] = v.ratio;
        row.values["is_spl"] = flag(v.is_spl);
        row.values["audit_error"] = tr.max_audit_error;
        row.values["collisions"] = static_cast<double>(tr.collisions);
        out.evidence[row.variant] = {{"is_spl", v.is_spl},       {"recurring", v.recurring},
                                     {"interacting", v.interacting}, {"stable", v.stable},
                                     {"b_waived", v.b_waived},   {"period", v.period_estimate},
                                     {"sustain_time", v.sustain_time}};
        out.rows.push_back(std::move(row));
      }
    }
    return out;
  };
}

inline ReplicateFn chemical_runner(const Scenario& s) {
  const auto sim = io::chem_sim_from_json(s.params);
  const auto net = *s.reactions;
  net.validate();
  return [=](std::uint64_t seed) {
    auto p = sim;
    p.seed = seed;
    const auto tr = chemical::simulate_reactions(net, p);
    MetricsRow row;
    row.variant = "all";
    row.values["survived"] = flag(chemical::all_tracked_present(net, tr.final_counts));
    row.values["events"] = static_cast<double>(tr.events);
    row.values["uphill_events"] = static_cast<double>(tr.uphill_events);
    row.values["energy_supplied"] = tr.energy_supplied;
    for (std::size_t i = 0; i < net.species.size(); ++i)
      row.values["final_" + net.species[i].id] = static_cast<double>(tr.final_counts[i]);
    ReplicateOutput out;
    out.evidence["all"] = {{"final_counts", tr.final_counts}};
    out.rows.push_back(std::move(row));
    return out;
  };
}

inline ReplicateFn claim3_runner(const Scenario& s) {
  const auto cfg = io::linked_loop_config_from_json(s.params);
  return [=](std::uint64_t seed) {
    auto c = cfg;
    c.seed = seed;
    c.replicates = 1;
    const auto rep = claim3_experiment(c);
    ReplicateOutput out;
    for (const auto& r : rep.rows) {
      MetricsRow row;
      row.variant = r.variant;
      row.values["sustain"] = r.sustain_steps;
      out.evidence[r.variant] = {{"sustain", r.sustain_steps}};
      out.rows.push_back(std::move(row));
    }
    return out;
  };
}

inline ReplicateFn persistence_runner(const Scenario& s) {
  const auto sim = io::chem_sim_from_json(s.params);
  const auto loop = *s.reactions;
  const auto chain = s.chain ? *s.chain : chemical::drop_closing_reaction(loop);
  chemical::check_chain_of(loop, chain);
  return [=](std::uint64_t seed) {
    auto p = sim;
    p.seed = seed;
    const auto rep = chemical::persistence_experiment(loop, chain, p, 1);
    ReplicateOutput out;
    for (const auto& [variant, alive] : {std::pair{"loop", rep.loop_survived[0]}, {"chain", rep.chain_survived[0]}}) {
      MetricsRow row;
      row.variant = variant;
      row.values["survived"] = flag(alive);
      out.evidence[variant] = {{"survived", alive}};
      out.rows.push_back(std::move(row));
    }
    return out;
  };
}

inline ReplicateFn split_runner(const Scenario& s) {
  const auto sim = io::chem_sim_from_json(s.params);
  const auto net = *s.reactions;
  return [=](std::uint64_t seed) {
    const auto rep = chemical::split_regeneration_test(net, sim, seed);
    MetricsRow row;
    row.variant = "all";
    row.values["a_regenerates"] = flag(rep.part_a_regenerates);
    row.values["b_regenerates"] = flag(rep.part_b_regenerates);
    row.values["a_covers"] = flag(rep.part_a_covers);
    row.values["b_covers"] = flag(rep.part_b_covers);
    row.values["both_regenerate"] = flag(rep.part_a_regenerates && rep.part_b_regenerates);
    ReplicateOutput out;
    out.evidence["all"] = {{"part_a", rep.part_a}, {"part_b", rep.part_b}};
    out.rows.push_back(std::move(row));
    return out;
  };
}

inline ReplicateFn make_runner(const Scenario& s) {
  switch (s.kind) {
    case ScenarioKind::dynamics: return dynamics_runner(s);
    case ScenarioKind::fixedset: return fixedset_runner(s);
    case ScenarioKind::growth: return growth_runner(s);
    case ScenarioKind::membrane: return membrane_runner(s);
    case ScenarioKind::continuity: return continuity_runner(s);
    case ScenarioKind::physical: return physical_runner(s);
    case ScenarioKind::chemical: return chemical_runner(s);
    case ScenarioKind::claim3: return claim3_runner(s);
    case ScenarioKind::persistence: return persistence_runner(s);
    case ScenarioKind::split: return split_runner(s);
  }
  throw ContractError("unhandled scenario kind");
}

}  // namespace detail

/// Runs every replicate (seed = scenario seed + replicate index), possibly
/// concurrently, and assembles the report in replicate order.
inline MetricsReport run_experiment(const Scenario& s) {
  MetricsReport rep;
  rep.scenario_id = s.id;
  rep.kind = s.kind;
  rep.seed = s.seed;
  rep.replicates = s.replicates;
  if (s.replicates == 0) {
    finalize_report(rep, s.expect);
    return rep;
  }
  detail::ReplicateFn fn;
  try {
    fn = detail::make_runner(s);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("malformed '") + to_string(s.kind) + "' block: " + e.what());
  }
  std::vector<detail::ReplicateOutput> slots(s.replicates);
  parallel_for(s.replicates, [&](std::size_t r) {
    try {
      slots[r] = fn(s.seed + r);
    } catch (const ReplicateError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReplicateError(r, e.what());
    }
  });
  for (std::size_t r = 0; r < s.replicates; ++r) {
    for (auto& row : slots[r].rows) {
      row.replicate = r;
      row.seed = s.seed + r;
      rep.rows.push_back(std::move(row));
    }
    rep.evidence.push_back(std::move(slots[r].evidence));
  }
  finalize_report(rep, s.expect);
  return rep;
}

// ---- emission ----------------------------------------------------------------------

/// Rounds to 9 significant digits so that the serialized text is stable and
/// parses back to the same value.
inline double round9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

namespace detail {

/// Applies round9 to every float in `j`; NaN and infinities become strings.
inline nlohmann::json rounded(const nlohmann::json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return round9(x);
  }
  if (j.is_array()) {
    auto out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(rounded(v));
    return out;
  }
  if (j.is_object()) {
    auto out = nlohmann::json::object();
    for (const auto& [k, v] : j.items()) out[k] = rounded(v);
    return out;
  }
  return j;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace detail

inline nlohmann::json to_json(const SummaryStat& s) {
  return {{"n", s.n}, {"median", s.median}, {"iqr", s.iqr}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

inline nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario_id;
  j["kind"] = to_string(r.kind);
  j["seed"] = r.seed;
  j["replicates"] = r.replicates;
  j["status"] = to_string(r.status);
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json o{{"replicate", row.replicate}, {"seed", row.seed}, {"variant", row.variant}};
    for (const auto& [k, v] : row.values) o["values"][k] = v;
    for (const auto& [k, v] : row.labels) o["labels"][k] = v;
    j["rows"].push_back(std::move(o));
  }
  j["summary"] = nlohmann::json::object();
  for (const auto& [variant, metrics] : r.summary)
    for (const auto& [k, s] : metrics) j["summary"][variant][k] = to_json(s);
  j["expectations"] = nlohmann::json::array();
  for (const auto& e : r.expectations)
    j["expectations"].push_back({{"name", e.name}, {"passed", e.passed}, {"detail", e.detail}});
  j["evidence"] = r.evidence;
  return detail::rounded(j);
}

/// One line per row: replicate, seed, variant, then every value and label
/// column in sorted order. Floats use %.9g.
inline std::string render_csv(const MetricsReport& r) {
  std::set<std::string> value_cols, label_cols;
  for (const auto& row : r.rows) {
    for (const auto& [k, v] : row.values) value_cols.insert(k);
    for (const auto& [k, v] : row.labels) label_cols.insert(k);
  }
  std::ostringstream out;
  out << "replicate,seed,variant";
  for (const auto& c : value_cols) out << ',' << detail::csv_escape(c);
  for (const auto& c : label_cols) out << ',' << detail::csv_escape(c);
  out << '\n';
  for (const auto& row : r.rows) {
    out << row.replicate << ',' << row.seed << ',' << detail::csv_escape(row.variant);
    for (const auto& c : value_cols) {
      out << ',';
      if (auto it = row.values.find(c); it != row.values.end()) out << detail::fmt9(it->second);
    }
    for (const auto& c : label_cols) {
      out << ',';
      if (auto it = row.labels.find(c); it != row.labels.end()) out << detail::csv_escape(it->second);
    }
    out << '\n';
  }
  return out.str();
}

inline std::string render_metrics(const MetricsReport& r, MetricsFormat format) {
  return format == MetricsFormat::json ? to_json(r).dump(2) + "\n" : render_csv(r);
}

inline void emit_metrics(const MetricsReport& r, MetricsFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write metrics to " + path.string());
  out << render_metrics(r, format);
  if (!out.flush()) throw IoError("failed writing metrics to " + path.string());
}

// ---- fixture export ------------------------------------------------------------------

inline nlohmann::json network_document(const fixtures::Fixture& f) {
  auto j = to_json(f.net.to_spec());
  if (!f.registry.entries().empty()) j["registry"] = to_json(f.registry);
  return j;
}

/// Writes every figure-anchored fixture into `dir` as files that scenarios
/// can reference. Returns the written file names.
inline std::vector<std::string> export_fixtures(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << text;
    written.push_back(name);
  };
  auto dump = [](const nlohmann::json& j) { return detail::rounded(j).dump(2) + "\n"; };
  write("fig2.json", dump(network_document({fixtures::fig2(), {}})));
  write("fig3.json", dump(network_document(fixtures::fig3_with_parents())));
  write("fig4.json", dump(network_document(fixtures::fig4())));
  write("fig4_grown.json", dump(network_document(fixtures::fig4_grown())));
  write("A1b.json", dump(physical::to_json(physical::design_b())));
  write("A1c.json", dump(physical::to_json(physical::design_c())));
  write("A1d.json", dump(physical::to_json(physical::design_d())));
  write("A4-loop.json", dump(chemical::to_json(chemical::m1m2m3_loop())));
  write("A4-chain.json", dump(chemical::to_json(chemical::m1m2m3_chain())));
  write("pizza_corpus.txt", fixtures::kPizzaCorpus);
  return written;
}

}  // namespace spl
