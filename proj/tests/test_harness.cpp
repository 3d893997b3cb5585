#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spl/harness.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spl;

const fs::path kSource{SPL_SOURCE_DIR};
const fs::path kScenarios = kSource / "fixtures" / "scenarios";

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("spl_harness_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<fs::path> shipped_scenarios() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kScenarios))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

Scenario small(const fs::path& p, std::size_t reps) {
  auto s = load_scenario(p);
  apply_overrides(s, {std::nullopt, reps, std::nullopt, std::nullopt});
  return s;
}

// ---- loading -----------------------------------------------------------------

TEST(Load, ShippedClaim3Scenario) {
  const auto s = load_scenario(kScenarios / "claim3.json");
  EXPECT_EQ(s.kind, ScenarioKind::claim3);
  EXPECT_EQ(s.id, "claim3");
}

TEST(Load, EveryShippedScenarioValidatesAndReserializes) {
  const auto paths = shipped_scenarios();
  EXPECT_GE(paths.size(), 10u);
  for (const auto& p : paths) {
    SCOPED_TRACE(p.filename().string());
    const auto s = load_scenario(p);
    const auto doc = to_json(s);
    const auto again = scenario_from_json(doc, p.parent_path(), s.id);
    EXPECT_EQ(to_json(again), doc);
  }
}

TEST(Load, ParseErrorReportsLineAndColumn) {
  TempDir d;
  const auto p = d.write("bad.json", "{\n  \"kind\": \"dynamics\",\n  \"seed\": ,\n}\n");
  try {
    load_scenario(p);
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
    EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos);
  }
}

TEST(Load, ErrorClasses) {
  EXPECT_THROW(scenario_from_json({{"kind", "telepathy"}}), UnknownKindError);
  EXPECT_THROW(scenario_from_json({{"seed", 1}}), ScenarioError);
  try {
    scenario_from_json({{"kind", "membrane"}, {"network", "fig4"}, {"membrane", {{"drive", json::array({json::array({"I1"})})}}}});
    FAIL() << "no exception";
  } catch (const MissingBlockError& e) {
    EXPECT_EQ(e.block(), "routing");
  }
  try {
    scenario_from_json({{"kind", "chemical"}, {"chemical", json::object()}, {"reaction_network", "nowhere/net.json"}}, "/tmp");
    FAIL() << "no exception";
  } catch (const DanglingReferenceError& e) {
    EXPECT_NE(e.target().find("nowhere"), std::string::npos);
  }
  EXPECT_THROW(scenario_from_json({{"kind", "chemical"}, {"chemical", json::object()}, {"reaction_network", "A4-loop"}, {"replicates", -2}}),
               ScenarioError);
  EXPECT_THROW(scenario_from_json({{"kind", "chemical"}, {"reaction_network", "A4-loop"}}), MissingBlockError);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST(Load, InlineAndBuiltinReferencesAgree) {
  const auto with = [](json ref) { return json{{"kind", "chemical"}, {"chemical", json::object()}, {"reaction_network", ref}}; };
  const auto builtin = scenario_from_json(with("A4-loop"));
  const auto inline_ = scenario_from_json(with(chemical::to_json(chemical::m1m2m3_loop())));
  const auto file = scenario_from_json(with("A4-loop.json"), kSource / "fixtures");
  EXPECT_EQ(*builtin.reactions, *inline_.reactions);
  // shipped files hold 9-digit values
  EXPECT_EQ(detail::rounded(chemical::to_json(*builtin.reactions)), chemical::to_json(*file.reactions));
}

// ---- running -------------------------------------------------------------------

TEST(Run, ZeroReplicatesIsNotApplicable) {
  const auto r = run_experiment(small(kScenarios / "chemical_a4.json", 0));
  EXPECT_EQ(r.status, Status::not_applicable);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(to_json(r)["status"], "not-applicable");
}

TEST(Run, ByteIdenticalAcrossRuns) {
  for (const auto& p : shipped_scenarios()) {
    const auto name = p.stem().string();
    if (name == "physical_designs" || name == "growth_density") continue;  // covered by the acceptance run
    SCOPED_TRACE(name);
    const auto s = small(p, 2);
    for (auto f : {MetricsFormat::json, MetricsFormat::csv})
      EXPECT_EQ(render_metrics(run_experiment(s), f), render_metrics(run_experiment(s), f));
  }
}

TEST(Run, ReplicatesAreSeedIsolated) {
  const auto a = run_experiment(small(kScenarios / "chemical_a4.json", 3));
  const auto b = run_experiment(small(kScenarios / "chemical_a4.json", 7));
  ASSERT_EQ(b.rows.size(), 7u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].seed, b.rows[i].seed);
    EXPECT_EQ(a.rows[i].values, b.rows[i].values);
  }
  auto shifted = small(kScenarios / "chemical_a4.json", 2);
  apply_overrides(shifted, {shifted.seed + 1, std::nullopt, std::nullopt, std::nullopt});
  EXPECT_EQ(run_experiment(shifted).rows[0].values, a.rows[1].values);
}

TEST(Run, RowsAreReplicatesTimesVariants) {
  const auto r = run_experiment(small(kScenarios / "persistence_a4.json", 4));
  EXPECT_EQ(r.rows.size(), 8u);
  const auto csv = render_csv(r);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.rows.size() + 1);
  EXPECT_EQ(to_json(r)["rows"].size(), r.rows.size());
  EXPECT_EQ(r.evidence.size(), 4u);
}

TEST(Run, ExpectationsDecideStatus) {
  auto s = small(kScenarios / "persistence_a4.json", 10);
  EXPECT_EQ(run_experiment(s).status, Status::pass);
  s.expect = json::array({{{"metric", "survived"}, {"variant", "chain"}, {"stat", "mean"}, {"op", ">"}, {"value", 0.5}}});
  const auto r = run_experiment(s);
  EXPECT_EQ(r.status, Status::fail);
  ASSERT_EQ(r.expectations.size(), 1u);
  EXPECT_FALSE(r.expectations[0].passed);
}

TEST(Run, ModuleErrorsNameTheReplicate) {
  const auto s = scenario_from_json(
      {{"kind", "dynamics"}, {"network", "fig2"}, {"dynamics", {{"stimuli", json::array({json::array({"nope"})})}}}});
  try {
    run_experiment(s);
    FAIL() << "no exception";
  } catch (const ReplicateError& e) {
    EXPECT_EQ(e.replicate(), 0u);
  }
}

// ---- emission ------------------------------------------------------------------

TEST(Emit, NumbersRoundTripAtNineDigits) {
  for (double x : {1.0 / 3.0, 2.0 / 3.0 * 1e-7, 123456789.123, -0.1, 1e300})
    EXPECT_EQ(round9(round9(x)), round9(x));
  const auto r = run_experiment(small(kScenarios / "claim3.json", 2));
  const auto text = render_metrics(r, MetricsFormat::json);
  const auto parsed = json::parse(text);
  EXPECT_EQ(parsed.dump(2) + "\n", text);
  for (const auto& row : parsed["rows"])
    for (const auto& [k, v] : row["values"].items()) EXPECT_EQ(round9(v.get<double>()), v.get<double>());
}

TEST(Emit, UnwritablePathRaisesIoError) {
  const auto r = run_experiment(small(kScenarios / "chemical_a4.json", 1));
  EXPECT_THROW(emit_metrics(r, MetricsFormat::json, "/nonexistent/dir/out.json"), IoError);
}

TEST(Emit, CsvAndJsonAgree) {
  TempDir d;
  const auto r = run_experiment(small(kScenarios / "split_a4.json", 3));
  emit_metrics(r, MetricsFormat::json, d.path() / "m.json");
  emit_metrics(r, MetricsFormat::csv, d.path() / "m.csv");
  const auto j = json::parse(slurp(d.path() / "m.json"));
  const auto csv = slurp(d.path() / "m.csv");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), j["rows"].size() + 1);
  EXPECT_EQ(csv.substr(0, csv.find('\n')).rfind("replicate,seed,variant,", 0), 0u);
}

// ---- fixtures ------------------------------------------------------------------

TEST(Fixtures, ShippedFilesMatchExport) {
  TempDir d;
  const auto names = export_fixtures(d.path());
  EXPECT_EQ(names.size(), 10u);
  for (const auto& n : names) EXPECT_EQ(slurp(d.path() / n), slurp(kSource / "fixtures" / n)) << n;
}

TEST(Fixtures, CatalogNamesResolve) {
  for (const auto& f : fixture_catalog()) EXPECT_FALSE(f.name.empty());
  const auto s = scenario_from_json({{"kind", "fixedset"}, {"network", {{"fixture", "fig2"}, {"recharge", 0.3}}},
                                     {"fixedset", {{"family", {{"average", json::array({"I1", "I2", "I3"})}, {"label", "x"}}}}}});
  ASSERT_TRUE(s.network.has_value());
}

// ---- command line ----------------------------------------------------------------

int lab(const std::string& args) {
  const std::string cmd = std::string(SPL_LAB_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Cli, ExitCodes) {
  TempDir d;
  const auto sc = (kScenarios / "persistence_a4.json").string();
  EXPECT_EQ(lab("run " + sc + " --replicates 4 --out " + (d.path() / "o.json").string()), 0);
  EXPECT_TRUE(fs::exists(d.path() / "o.json"));
  EXPECT_EQ(lab("run " + sc + " --replicates 0"), 0);
  EXPECT_EQ(lab("validate " + sc), 0);
  EXPECT_EQ(lab("list-fixtures"), 0);

  auto failing = json::parse(slurp(sc));
  failing["persistence"]["chain"] = (kSource / "fixtures" / "A4-chain.json").string();
  failing["reaction_network"] = (kSource / "fixtures" / "A4-loop.json").string();
  failing["expect"][0]["op"] = "<";
  EXPECT_EQ(lab("run " + d.write("fail.json", failing.dump()).string() + " --replicates 3"), 1);

  EXPECT_EQ(lab("validate " + d.write("kind.json", R"({"kind":"nonsense"})").string()), 2);
  EXPECT_EQ(lab("run " + d.write("broken.json", "{").string()), 2);
  EXPECT_EQ(lab("run " + (d.path() / "missing.json").string()), 2);
  EXPECT_EQ(lab("run " + sc + " --format yaml"), 2);
  EXPECT_EQ(lab("frobnicate"), 2);
  EXPECT_EQ(lab("run " + d.write("rt.json", R"({"kind":"dynamics","network":"fig2","dynamics":{"stimuli":[["nope"]]}})").string()), 3);
}

TEST(Cli, ExportFixturesWritesFiles) {
  TempDir d;
  EXPECT_EQ(lab("export-fixtures " + (d.path() / "out").string()), 0);
  EXPECT_TRUE(fs::exists(d.path() / "out" / "fig4_grown.json"));
}

}  // namespace
