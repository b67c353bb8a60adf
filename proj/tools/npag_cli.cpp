#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "npag/harness/runner.hpp"

namespace {

// Exit codes by failure category.
constexpr int kOk = 0;
constexpr int kConfigFailure = 2;
constexpr int kDataFailure = 3;
constexpr int kRuntimeFailure = 4;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const npag::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const npag::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataFailure;
  } catch (const npag::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NPAG experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Run configuration file")->required();
    sub->add_option("--seed-override", seed_override, "Run a single seed instead of the configured list");
    sub->add_option("--out", out_dir, "Output directory (overrides run.output)");
    sub->add_flag("--quiet", quiet, "Suppress the summary");
  };
  CLI::App* run = app.add_subcommand("run", "Run every configured seed and write traces");
  CLI::App* validate = app.add_subcommand("validate", "Print constants and the schedule without running");
  add_common(run);
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  return guarded([&]() {
    npag::harness::RunConfig cfg = npag::harness::load_config(config_path);
    if (seed_override) cfg.run.seeds = {*seed_override};
    if (!out_dir.empty()) cfg.run.output = out_dir;
    npag::harness::validate_config(cfg);
    const npag::harness::BuiltProblem built = npag::harness::build_problem(cfg.problem);

    if (validate->parsed()) {
      const npag::harness::MethodPlan plan = npag::harness::resolve_method(cfg, built);
      npag::harness::print_validation(std::cout, cfg, built, plan);
      return kOk;
    }

    const npag::harness::RunReport report = npag::harness::run_experiment(cfg, built);
    npag::harness::write_outputs(cfg.run.output, cfg, report);
    if (!quiet) npag::harness::print_summary(std::cout, report);
    return report.failures() > 0 ? kRuntimeFailure : kOk;
  });
}
