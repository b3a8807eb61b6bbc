#pragma once

// Config-driven front end: scenario files, probability sweeps, route
// comparisons and the built-in invariant suite.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "udw/response.hpp"

namespace udw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCompareFailed = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitInvalid = 3;

/// One problem found in a config file. line and column are 1-based; 0 when
/// the position is unknown.
struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string key;
  std::string message;

  std::string format(std::string_view source) const;
};

/// ParseError or ValidationError carrying every diagnostic found.
class ConfigError : public Error {
 public:
  ConfigError(ErrorKind kind, std::string source, std::string scenario, std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  const std::string& scenario() const { return scenario_; }

 private:
  std::string scenario_;
  std::vector<Diagnostic> diagnostics_;
};

enum class SweepAxis { None, Speed, Acceleration };

struct Tolerances {
  /// Relative accuracy requested from the quadratures.
  double rel = 1e-8;
  /// Allowed relative and absolute difference between routes in `compare`.
  double compare_rel = 1e-6;
  double compare_abs = 0.0;
};

struct ScenarioConfig {
  std::string id = "scenario";
  /// Base scenario; sweep values are substituted point by point.
  Scenario base;
  std::vector<Route> routes;
  std::vector<double> omegas;
  SweepAxis axis = SweepAxis::None;
  /// Speeds (along the configured velocity, or x) or proper accelerations.
  std::vector<double> axis_values;
  Tolerances tolerances;
};

struct SweepPoint {
  double omega = 0.0;
  /// |v| for inertial motion, the proper acceleration for hyperbolic motion,
  /// 0 at rest.
  double speed = 0.0;
  Scenario scenario;
};

/// Parses and validates a YAML scenario document. `source` names the
/// document in diagnostics. Throws ConfigError.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_scenario(const std::string& path);

/// Cartesian product of the gap list and the speed/acceleration list, gap
/// varying slowest.
std::vector<SweepPoint> sweep_points(const ScenarioConfig& config);

struct RunOptions {
  int threads = 1;
  /// Fill the seconds column; otherwise it is written as 0 so that output is
  /// reproducible byte for byte.
  bool timing = false;
  bool use_printed_ktilde = false;
};

struct ResultRow {
  std::string scenario;
  Route route = Route::DetectorFrame;
  double omega = 0.0;
  double speed = 0.0;
  double probability = 0.0;
  double abs_error = 0.0;
  double seconds = 0.0;
};

/// One row per (sweep point, route), points outermost. Jobs run on a pool of
/// `threads` workers; the result does not depend on the thread count. Inner
/// errors are rethrown with the scenario id, point and route prepended.
std::vector<ResultRow> run(const ScenarioConfig& config, const RunOptions& options);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::string format_double(double x);

/// Script plotting probability against the swept quantity, one curve per
/// route (and per speed when both Omega and speed vary).
void write_gnuplot(std::ostream& out, const ScenarioConfig& config, const std::string& csv_path);

struct ComparisonLine {
  double omega = 0.0;
  double speed = 0.0;
  Route reference = Route::DetectorFrame;
  Route other = Route::DetectorFrame;
  double p_reference = 0.0;
  double p_other = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  /// max(compare_abs, compare_rel * max|P|) + both error estimates.
  double tolerance = 0.0;
  bool pass = false;
};

struct ComparisonReport {
  std::string scenario;
  std::vector<ComparisonLine> lines;
  bool pass() const;
};

/// Every route after the first is compared against the first at each sweep
/// point. Needs at least two routes (ValidationError otherwise).
ComparisonReport compare_frames(const ScenarioConfig& config, const RunOptions& options);
void write_comparison(std::ostream& out, const ComparisonReport& report);

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

/// Kinematic, frame and single-mode evolution invariants (a few seconds).
std::vector<CheckResult> verify_suite(int threads = 1);
void write_checks(std::ostream& out, const std::vector<CheckResult>& checks);

/// Maps an inner error kind to the process exit code.
int exit_code_for(ErrorKind kind);

/// Worker count from UDW_THREADS, else the hardware concurrency.
int default_threads();

}  // namespace udw::cli
