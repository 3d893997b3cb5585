#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spl/harness.hpp"

namespace {

enum Exit { kPass = 0, kExpectationFailed = 1, kValidation = 2, kRuntime = 3 };

struct RunOptions {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

spl::ScenarioOverrides overrides_of(const RunOptions& o) {
  spl::ScenarioOverrides ov;
  ov.seed = o.seed;
  ov.replicates = o.replicates;
  ov.out = o.out;
  if (o.format) ov.format = spl::metrics_format_from(*o.format);
  return ov;
}

int cmd_run(const RunOptions& o) {
  spl::Scenario s;
  try {
    s = spl::load_scenario(o.scenario);
    spl::apply_overrides(s, overrides_of(o));
  } catch (const spl::SchemaError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const spl::IoError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  }
  spl::MetricsReport r;
  try {
    r = spl::run_experiment(s);
    if (s.output.path.empty() || s.output.path == "-")
      std::cout << spl::render_metrics(r, s.output.format);
    else
      spl::emit_metrics(r, s.output.format, s.output.path);
  } catch (const spl::ScenarioError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
  std::cerr << s.id << ": " << spl::to_string(r.status) << '\n';
  for (const auto& e : r.expectations)
    std::cerr << "  [" << (e.passed ? "PASS" : "FAIL") << "] " << e.name << ": " << e.detail << '\n';
  return r.status == spl::Status::fail ? kExpectationFailed : kPass;
}

int cmd_validate(const std::string& path) {
  try {
    const auto s = spl::load_scenario(path);
    std::cout << s.id << ": valid " << spl::to_string(s.kind) << " scenario (" << s.replicates << " replicates, seed "
              << s.seed << ")\n";
    return kPass;
  } catch (const spl::SchemaError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
  } catch (const spl::IoError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
  }
  return kValidation;
}

int cmd_list() {
  for (const auto& f : spl::fixture_catalog()) std::printf("%-14s %-10s %s\n", f.name.c_str(), f.asset.c_str(), f.description.c_str());
  return kPass;
}

int cmd_export(const std::string& dir) {
  try {
    for (const auto& name : spl::export_fixtures(dir)) std::cout << (std::filesystem::path(dir) / name).string() << '\n';
    return kPass;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Looped-dynamics laboratory: run scenarios and emit metrics"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run a scenario and emit its metrics");
  run->add_option("scenario", ro.scenario, "Scenario JSON file")->required();
  run->add_option("--seed", ro.seed, "Override the scenario seed");
  run->add_option("--replicates", ro.replicates, "Override the replicate count");
  run->add_option("--out", ro.out, "Output path ('-' for stdout)");
  run->add_option("--format", ro.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  std::string vpath;
  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", vpath, "Scenario JSON file")->required();

  auto* list = app.add_subcommand("list-fixtures", "List built-in fixtures");

  std::string export_dir;
  auto* exp = app.add_subcommand("export-fixtures", "Write the built-in fixtures as files");
  exp->add_option("dir", export_dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kValidation;
  }

  if (*run) return cmd_run(ro);
  if (*validate) return cmd_validate(vpath);
  if (*list) return cmd_list();
  if (*exp) return cmd_export(export_dir);
  return kValidation;
}
