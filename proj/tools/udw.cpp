// udw: transition probabilities of Unruh-DeWitt detectors from YAML scenarios.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "udw/cli.hpp"

namespace {

using namespace udw::cli;

struct Args {
  std::string config;
  std::string output;
  std::string gnuplot;
  int threads = 0;
  bool timing = false;
  bool printed_ktilde = false;
};

RunOptions options(const Args& a) {
  RunOptions o;
  o.threads = a.threads > 0 ? a.threads : default_threads();
  o.timing = a.timing;
  o.use_printed_ktilde = a.printed_ktilde;
  return o;
}

int cmd_run(const Args& a) {
  const ScenarioConfig cfg = load_scenario(a.config);
  if (!a.gnuplot.empty() && a.output.empty()) {
    std::cerr << "scenario '" << cfg.id << "': --gnuplot needs -o so the script can name the data file\n";
    return kExitInvalid;
  }
  const auto rows = run(cfg, options(a));
  if (a.output.empty()) {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) {
      std::cerr << "scenario '" << cfg.id << "': cannot write " << a.output << '\n';
      return kExitInvalid;
    }
    write_csv(out, rows);
  }
  if (!a.gnuplot.empty()) {
    std::ofstream gp(a.gnuplot);
    write_gnuplot(gp, cfg, a.output);
  }
  return kExitOk;
}

int cmd_compare(const Args& a) {
  const ScenarioConfig cfg = load_scenario(a.config);
  const ComparisonReport report = compare_frames(cfg, options(a));
  write_comparison(std::cout, report);
  return report.pass() ? kExitOk : kExitCompareFailed;
}

int cmd_verify(const Args& a) {
  const auto checks = verify_suite(options(a).threads);
  write_checks(std::cout, checks);
  for (const auto& c : checks) {
    if (!c.pass) return kExitCompareFailed;
  }
  return kExitOk;
}

int cmd_check(const Args& a) {
  const ScenarioConfig cfg = load_scenario(a.config);
  std::cout << cfg.id << ": ok, " << sweep_points(cfg).size() << " sweep point(s), " << cfg.routes.size()
            << " route(s)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leading-order transition probabilities of Unruh-DeWitt detectors"};
  app.require_subcommand(1);
  Args args;
  app.add_option("--threads", args.threads, "Worker threads (default: UDW_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  auto* run_cmd = app.add_subcommand("run", "Evaluate every route at every sweep point and write CSV");
  run_cmd->fallthrough();
  run_cmd->add_option("config", args.config, "Scenario file")->required();
  run_cmd->add_option("-o,--output", args.output, "CSV output file (default: stdout)");
  run_cmd->add_option("--gnuplot", args.gnuplot, "Also write a gnuplot script for the CSV");
  run_cmd->add_flag("--timing", args.timing, "Fill the seconds column with wall time");
  run_cmd->add_flag("--use-printed-ktilde", args.printed_ktilde,
                    "Use the non-null k-tilde variant in the smeared closed form");

  auto* compare_cmd = app.add_subcommand("compare", "Check that all routes give the same probability");
  compare_cmd->fallthrough();
  compare_cmd->add_option("config", args.config, "Scenario file")->required();
  compare_cmd->add_flag("--use-printed-ktilde", args.printed_ktilde,
                        "Use the non-null k-tilde variant in the smeared closed form");

  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in invariant checks");
  verify_cmd->fallthrough();

  auto* check_cmd = app.add_subcommand("check", "Validate a scenario file without running it");
  check_cmd->add_option("config", args.config, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(args);
    if (*compare_cmd) return cmd_compare(args);
    if (*verify_cmd) return cmd_verify(args);
    return cmd_check(args);
  } catch (const udw::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
