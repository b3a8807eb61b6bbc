#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include "pool.hpp"
#include "udw/cli.hpp"

namespace udw::cli {

namespace {

/// Error text without the leading "<Kind>: ".
std::string bare_message(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

int default_threads() {
  if (const char* env = std::getenv("UDW_THREADS")) {
    int n = 0;
    const std::string_view s(env);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), n);
    if (r.ec == std::errc() && r.ptr == s.data() + s.size() && n > 0) return n;
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

std::vector<ResultRow> run(const ScenarioConfig& config, const RunOptions& options) {
  const std::vector<SweepPoint> points = sweep_points(config);
  const std::size_t nr = config.routes.size();
  std::vector<ResultRow> rows(points.size() * nr);
  ResponseOptions ro;
  ro.rel_tol = config.tolerances.rel;
  ro.use_printed_ktilde = options.use_printed_ktilde;

  detail::parallel_for(rows.size(), options.threads, [&](std::size_t i) {
    const SweepPoint& p = points[i / nr];
    const Route route = config.routes[i % nr];
    ResultRow& row = rows[i];
    row.scenario = config.id;
    row.route = route;
    row.omega = p.omega;
    row.speed = p.speed;
    const auto start = std::chrono::steady_clock::now();
    try {
      const ProbabilityResult r = probability(p.scenario, route, ro);
      row.probability = r.value;
      row.abs_error = r.abs_error;
    } catch (const Error& e) {
      std::ostringstream os;
      os << "scenario '" << config.id << "' (omega=" << format_double(p.omega)
         << ", speed=" << format_double(p.speed) << ", route=" << to_string(route) << "): " << bare_message(e);
      throw Error(e.kind(), os.str());
    }
    if (options.timing) {
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "scenario,route,omega,speed,probability,abs_error,seconds\n";
  for (const ResultRow& r : rows) {
    out << r.scenario << ',' << to_string(r.route) << ',' << format_double(r.omega) << ','
        << format_double(r.speed) << ',' << format_double(r.probability) << ',' << format_double(r.abs_error)
        << ',' << format_double(r.seconds) << '\n';
  }
}

void write_gnuplot(std::ostream& out, const ScenarioConfig& config, const std::string& csv_path) {
  const bool by_speed = config.axis != SweepAxis::None && config.omegas.size() <= 1;
  const char* xlabel = !by_speed ? "Omega" : config.axis == SweepAxis::Speed ? "speed" : "acceleration";
  const int xcol = by_speed ? 4 : 3;

  // Curves: one per route, split by the other swept value when both vary.
  std::vector<std::pair<std::string, std::string>> curves;
  const std::vector<double> split =
      !by_speed && config.axis != SweepAxis::None ? config.axis_values : std::vector<double>{};
  for (Route route : config.routes) {
    const std::string name = to_string(route);
    if (split.empty()) {
      curves.emplace_back("strcol(2) eq '" + name + "'", name);
    } else {
      for (double v : split) {
        curves.emplace_back("strcol(2) eq '" + name + "' && abs($4 - " + format_double(v) + ") < 1e-12",
                            name + " " + (config.axis == SweepAxis::Speed ? "v=" : "a=") + format_double(v));
      }
    }
  }

  out << "# " << config.id << "\n"
      << "set datafile separator ','\n"
      << "set key top right\n"
      << "set logscale y\n"
      << "set xlabel '" << xlabel << "'\n"
      << "set ylabel 'transition probability'\n"
      << "set title '" << config.id << "'\n"
      << "plot \\\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    out << "  '" << csv_path << "' skip 1 using " << xcol << ":((" << curves[i].first << ") ? $5 : NaN)"
        << " with linespoints title '" << curves[i].second << "'" << (i + 1 < curves.size() ? ", \\\n" : "\n");
  }
}

bool ComparisonReport::pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const ComparisonLine& l) { return l.pass; });
}

ComparisonReport compare_frames(const ScenarioConfig& config, const RunOptions& options) {
  if (config.routes.size() < 2) {
    throw Error(ErrorKind::ValidationError,
                "scenario '" + config.id + "': run.routes: compare needs at least two routes");
  }
  const std::vector<ResultRow> rows = run(config, options);
  const std::size_t nr = config.routes.size();
  ComparisonReport report;
  report.scenario = config.id;
  for (std::size_t p = 0; p < rows.size() / nr; ++p) {
    const ResultRow& ref = rows[p * nr];
    for (std::size_t j = 1; j < nr; ++j) {
      const ResultRow& other = rows[p * nr + j];
      ComparisonLine l;
      l.omega = ref.omega;
      l.speed = ref.speed;
      l.reference = ref.route;
      l.other = other.route;
      l.p_reference = ref.probability;
      l.p_other = other.probability;
      l.abs_diff = std::abs(ref.probability - other.probability);
      const double scale = std::max(std::abs(ref.probability), std::abs(other.probability));
      l.rel_diff = scale > 0.0 ? l.abs_diff / scale : 0.0;
      l.tolerance = std::max(config.tolerances.compare_abs, config.tolerances.compare_rel * scale) +
                    ref.abs_error + other.abs_error;
      l.pass = l.abs_diff <= l.tolerance;
      report.lines.push_back(l);
    }
  }
  return report;
}

void write_comparison(std::ostream& out, const ComparisonReport& report) {
  out << "scenario,omega,speed,reference,route,p_reference,p_route,abs_diff,rel_diff,tolerance,status\n";
  std::size_t passed = 0;
  for (const ComparisonLine& l : report.lines) {
    out << report.scenario << ',' << format_double(l.omega) << ',' << format_double(l.speed) << ','
        << to_string(l.reference) << ',' << to_string(l.other) << ',' << format_double(l.p_reference) << ','
        << format_double(l.p_other) << ',' << format_double(l.abs_diff) << ',' << format_double(l.rel_diff)
        << ',' << format_double(l.tolerance) << ',' << (l.pass ? "PASS" : "FAIL") << '\n';
    passed += l.pass ? 1 : 0;
  }
  out << "# " << report.scenario << ": " << passed << "/" << report.lines.size() << " points pass, overall "
      << (report.pass() ? "PASS" : "FAIL") << '\n';
}

}  // namespace udw::cli
