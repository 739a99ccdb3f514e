// Command-line front end: analyze, validate, table.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgasym/lgasym.hpp"

namespace {

using namespace lgasym;

double parse_bound(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return kInfinity;
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad number '" + text + "'");
  return v;
}

// "LO:HI" with either side allowed to be "inf".
std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("range", "expected LO:HI, got '" + text + "'");
  try {
    return {parse_bound(text.substr(0, colon)), parse_bound(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("range", "expected LO:HI, got '" + text + "'");
  }
}

struct ProblemArgs {
  std::string f, g = "0";
  std::string endpoint = "infinity";
  std::string interval;
  double tol = 1e-10;
  double tail_tol = 1e-6;
  double step = 0.01;
  std::optional<double> xmax;
  std::optional<long long> seed;
  bool no_extrapolate = false;
  bool no_oracle = false;
  bool timings = false;

  void attach(CLI::App* app) {
    app->add_option("--f", f, "Principal coefficient f(x)")->required();
    app->add_option("--g", g, "Perturbation g(x)")->capture_default_str();
    app->add_option("--endpoint", endpoint, "Endpoint to analyze")
        ->check(CLI::IsMember({"infinity", "zero"}))
        ->capture_default_str();
    app->add_option("--interval", interval, "Domain LO:HI (default 0:inf)");
    app->add_option("--tol", tol, "Quadrature tolerance for hypotheses and certificate")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--tail-tol", tail_tol, "Bound on the tail correction of the constants")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--step", step, "Volterra step in the marching variable")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--xmax", xmax, "End of the Volterra grid (default: automatic)")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Reserved; echoed in the report");
    app->add_flag("--no-extrapolate", no_extrapolate, "Disable Richardson extrapolation of the solver");
    app->add_flag("--timings", timings, "Include wall-clock timings in the JSON report");
  }

  ReportInput input() const {
    ReportInput in;
    in.f = f;
    in.g = g;
    in.seed = seed;
    in.timings = timings;
    AnalysisOptions& o = in.options;
    o.endpoint = endpoint == "zero" ? EndpointKind::Zero : EndpointKind::Infinity;
    if (!interval.empty()) {
      const auto [lo, hi] = parse_range(interval);
      o.interval = Interval{lo, hi};
    }
    o.tol = tol;
    o.tail_tol = tail_tol;
    o.step = step;
    o.x_max = xmax;
    o.extrapolate = !no_extrapolate;
    o.oracle = !no_oracle;
    return in;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
}

struct TableArgs {
  std::size_t samples = 50;
  std::string spacing = "linear";
  std::string range;
  std::string branch;

  void attach(CLI::App* app) {
    app->add_option("--samples", samples, "Number of sample points")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--spacing", spacing, "Sample spacing")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    app->add_option("--range", range, "Sample range LO:HI in x (default: around the cutoff)");
    app->add_option("--branch", branch, "Dominant, Recessive, Plus or Minus (default: first branch)")
        ->check(CLI::IsMember({"Dominant", "Recessive", "Plus", "Minus"}));
  }

  std::string csv(const Analysis& an) const {
    Branch b = default_branch(an);
    if (!branch.empty()) {
      for (Branch c : an.branches()) {
        if (branch == to_string(c)) b = c;
      }
      if (branch != to_string(b)) throw Error("branch " + branch + " does not exist in regime " + to_string(an.regime()));
    }
    double lo, hi;
    if (!range.empty()) {
      std::tie(lo, hi) = parse_range(range);
    } else if (an.reduction() == Reduction::None) {
      lo = std::max(an.cutoff_original(), 1e-3);
      hi = 10 * lo + 10;
    } else {
      hi = an.cutoff_original();
      lo = 1e-3 * hi;
    }
    if (!(lo > 0 || spacing == "linear") || !(hi > lo) || !std::isfinite(hi)) {
      throw Error("invalid table range");
    }
    std::ostringstream os;
    write_csv(os, tabulate(an, b, sample_points(lo, hi, samples, spacing == "log")));
    return os.str();
  }
};

// Runs the pipeline and reports. Returns the process exit code.
int run_problem(const ProblemArgs& p, const std::string& json_path, const std::string& csv_path,
                const TableArgs* table, bool json_to_stdout) {
  ReportInput in;
  try {
    in = p.input();
  } catch (const std::exception& e) {
    diag::error(e.what());
    return static_cast<int>(ExitCode::Internal);
  }
  try {
    const Analysis an = Analysis::run(in.f, in.g, in.options);
    if (!json_path.empty() || json_to_stdout) write_text(json_path, to_json_text(analysis_json(in, an)));
    if (table != nullptr && (!csv_path.empty() || !json_to_stdout)) write_text(csv_path, table->csv(an));
    return static_cast<int>(ExitCode::Ok);
  } catch (const std::exception& e) {
    const ExitCode code = exit_code_for(e);
    diag::error(std::string(error_kind(e)) + ": " + e.what());
    try {
      if (!json_path.empty() || json_to_stdout) write_text(json_path, to_json_text(failure_json(in, e)));
    } catch (const std::exception& w) {
      diag::error(w.what());
    }
    return static_cast<int>(code);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified leading-order asymptotics of u'' = (f + g) u"};
  app.require_subcommand(1);
  std::string log_level;
  app.add_option("--log", log_level, "Diagnostic level on stderr (overrides LG_LOG)")
      ->check(CLI::IsMember({"error", "info", "debug"}));

  ProblemArgs analyze_args;
  std::string analyze_json, analyze_csv;
  TableArgs analyze_table;
  CLI::App* analyze = app.add_subcommand("analyze", "Classify, solve, certify and report as JSON");
  analyze_args.attach(analyze);
  analyze->add_flag("--no-oracle", analyze_args.no_oracle, "Skip the independent ODE comparison");
  analyze->add_option("--json", analyze_json, "Write the JSON report here instead of stdout");
  analyze->add_option("--csv", analyze_csv, "Also write a sample table as CSV");
  analyze_table.attach(analyze);

  std::string suite = "all", validate_json;
  CLI::App* validate = app.add_subcommand("validate", "Run the acceptance suites");
  validate->add_option("--suite", suite, "Suite name or 'all'")->capture_default_str();
  validate->add_option("--json", validate_json, "Also write the results as JSON");
  validate->add_flag_callback("--list", [] {
    for (const auto& s : suites()) std::cout << s.name << "\n";
    std::exit(0);
  }, "List suite names");

  ProblemArgs table_args;
  std::string table_csv, table_json;
  TableArgs table_opts;
  CLI::App* table = app.add_subcommand("table", "Tabulate a solution branch against its model as CSV");
  table_args.attach(table);
  table_args.no_oracle = true;
  table->add_option("--csv", table_csv, "Write the CSV here instead of stdout");
  table->add_option("--json", table_json, "Also write the JSON report");
  table_opts.attach(table);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::Internal);
  }
  if (!log_level.empty()) diag::set_level(diag::parse_level(log_level.c_str()));

  try {
    if (analyze->parsed()) {
      return run_problem(analyze_args, analyze_json, analyze_csv, analyze_csv.empty() ? nullptr : &analyze_table,
                         true);
    }
    if (table->parsed()) return run_problem(table_args, table_json, table_csv, &table_opts, false);

    const std::vector<CriterionResult> results = run_suites(suite);
    bool all = true;
    for (const auto& r : results) {
      all = all && r.pass;
      std::printf("%2d %s %-20s measured=%s expected=%s tol=%s (%.2fs)\n   %s\n", r.id, r.pass ? "PASS" : "FAIL",
                  r.suite.c_str(), format_double17(r.measured).c_str(), format_double17(r.expected).c_str(),
                  format_double17(r.tolerance).c_str(), r.seconds, r.detail.c_str());
    }
    std::fflush(stdout);
    if (!validate_json.empty()) write_text(validate_json, to_json_text(validation_json(results)));
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    diag::error(e.what());
    return static_cast<int>(ExitCode::Internal);
  }
}
