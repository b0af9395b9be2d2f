#include "ordstat/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ordstat/error.hpp"
#include "ordstat/experiment.hpp"
#include "ordstat/json_io.hpp"
#include "ordstat/oracle.hpp"
#include "ordstat/stats_core.hpp"

namespace ordstat {
namespace {

// Invalid flag value: reported with the flag name, exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string six_digits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_level(double v, const char* flag) {
  if (!(v > 0.0 && v < 1.0))
    throw UsageError(std::string(flag) + " must lie in the open interval (0, 1), got " +
                     format_double(v));
}

void require_index(std::int64_t v, std::int64_t sample_size, const char* flag) {
  if (v < 1 || v > sample_size)
    throw UsageError(std::string(flag) + " must lie in 1..N (N=" + std::to_string(sample_size) +
                     "), got " + std::to_string(v));
}

void require_positive(std::int64_t v, const char* flag) {
  if (v < 1) throw UsageError(std::string(flag) + " must be a positive integer");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write file '" + path.string() + "'");
  out << content;
}

struct PlanArgs {
  double epsilon = 0;
  double delta = 0;
  std::string mode = "tolerance";
};

int command_plan(const PlanArgs& a, std::ostream& out) {
  require_level(a.epsilon, "--epsilon");
  require_level(a.delta, "--delta");
  const std::int64_t n = a.mode == "extreme" ? min_sample_size_extreme(a.epsilon, a.delta)
                                             : min_sample_size_tolerance(a.epsilon, a.delta);
  out << "epsilon = " << format_double(a.epsilon) << '\n'
      << "delta = " << format_double(a.delta) << '\n'
      << "mode = " << a.mode << '\n'
      << "N = " << n << '\n';
  return kExitOk;
}

struct ConfidenceArgs {
  std::string side = "upper";
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t sample_size = 0;
  double epsilon = 0;
};

int command_confidence(const ConfidenceArgs& a, std::ostream& out) {
  require_positive(a.sample_size, "--N");
  require_level(a.epsilon, "--epsilon");
  double bound;
  std::string note;
  if (a.side == "upper") {
    require_index(a.n, a.sample_size, "--n");
    bound = upper_bound_confidence(a.n, a.sample_size, a.epsilon);
    out << "P{ P{u > u_(" << a.n << ")} <= " << format_double(a.epsilon) << " } >= ";
    note = "tight iff sup{F(x) : F(x) < 1-eps} = 1-eps (always when F is continuous)";
  } else {
    require_index(a.m, a.sample_size, "--m");
    bound = lower_bound_confidence(a.m, a.sample_size, a.epsilon);
    out << "P{ P{u < u_(" << a.m << ")} <= " << format_double(a.epsilon) << " } >= ";
    note = "tight iff inf{F(x) : F(x) > eps} = eps (always when F is continuous)";
  }
  out << six_digits(bound) << '\n' << "N = " << a.sample_size << '\n' << "note: " << note << '\n';
  return kExitOk;
}

struct CurveArgs {
  std::int64_t sample_size = 0;
  double epsilon = 0;
  std::int64_t from = 1;
  std::int64_t to = 0;
  std::string out_path;
};

int command_curve(const CurveArgs& a, std::ostream& out) {
  require_positive(a.sample_size, "--N");
  require_level(a.epsilon, "--epsilon");
  const std::int64_t to = a.to == 0 ? a.sample_size : a.to;
  require_index(a.from, a.sample_size, "--from");
  require_index(to, a.sample_size, "--to");
  if (a.from > to) throw UsageError("--from must not exceed --to");
  const std::string csv = curve_to_csv(tradeoff_curve(a.sample_size, a.epsilon, a.from, to));
  if (a.out_path.empty())
    out << csv;
  else
    write_file(a.out_path, csv);
  return kExitOk;
}

struct AnalyzeArgs {
  std::string model_path;
  std::int64_t sample_size = 0;
  std::uint64_t seed = 1;
  double epsilon = 0;
  double delta = 0;  // 0: same as epsilon
  std::int64_t m = 1;
  std::int64_t n = 0;
  std::int64_t curve_from = 1;
  std::int64_t curve_to = 0;
  std::string out_dir;
  std::size_t workers = 1;
};

int command_analyze(const AnalyzeArgs& a, std::ostream& out) {
  require_positive(a.sample_size, "--N");
  require_level(a.epsilon, "--epsilon");
  const double delta = a.delta == 0 ? a.epsilon : a.delta;
  require_level(delta, "--delta");
  const std::int64_t n = a.n == 0 ? a.sample_size : a.n;
  require_index(a.m, a.sample_size, "--m");
  require_index(n, a.sample_size, "--n");
  if (a.m >= n)
    throw UsageError("tolerance interval needs --m < --n (got m=" + std::to_string(a.m) +
                     ", n=" + std::to_string(n) + ")");
  const std::int64_t curve_to = a.curve_to == 0 ? a.sample_size : a.curve_to;
  require_index(a.curve_from, a.sample_size, "--curve-from");
  require_index(curve_to, a.sample_size, "--curve-to");
  if (a.curve_from > curve_to) throw UsageError("--curve-from must not exceed --curve-to");
  if (a.workers == 0) throw UsageError("--workers must be positive");

  const UncertainModel model = model_from_json(parse_json_text(read_file(a.model_path)));
  const EmpiricalOrderStats stats = run_experiment(model, a.sample_size, a.seed, a.workers);
  const AnalysisReport report =
      analyze(stats, {a.epsilon, delta, a.m, n, a.curve_from, curve_to});

  const std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ModelError("cannot create output directory '" + a.out_dir + "'");
  write_file(dir / "report.json", to_json(report).dump(2) + "\n");
  write_file(dir / "curve.csv", curve_to_csv(report.curve));

  out << "model      " << report.label << '\n'
      << "N          " << report.sample_size << "  (seed " << report.seed << ", rejected "
      << report.rejected << ", truncation rejections " << report.truncation_rejections << ")\n"
      << "u_(1)      " << six_digits(report.extremes.min.value) << "  P{P{u < u_(1)} <= "
      << six_digits(a.epsilon) << "} >= " << six_digits(report.extremes.min.confidence) << '\n'
      << "u_(N)      " << six_digits(report.extremes.max.value) << "  P{P{u > u_(N)} <= "
      << six_digits(a.epsilon) << "} >= " << six_digits(report.extremes.max.confidence) << '\n'
      << "tolerance  (u_(" << report.tolerance.m << "), u_(" << report.tolerance.n << ")] = ("
      << six_digits(report.tolerance.lower) << ", " << six_digits(report.tolerance.upper)
      << "]  confidence " << six_digits(report.tolerance.confidence) << '\n'
      << "planner    eps=" << six_digits(a.epsilon) << " delta=" << six_digits(delta)
      << "  extreme N=" << report.planner.min_sample_size_extreme
      << "  tolerance N=" << report.planner.min_sample_size_tolerance << '\n'
      << "wrote      " << (dir / "report.json").string() << ", " << (dir / "curve.csv").string()
      << '\n';
  return kExitOk;
}

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::string fixtures_path;
  std::uint64_t trials = 200'000;
  std::size_t workers = 1;
  std::string json_path;
};

int command_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.trials < 1000) throw UsageError("--trials must be at least 1000");
  if (a.workers == 0) throw UsageError("--workers must be positive");
  std::vector<InequalityFixture> fixtures;
  if (a.suite != "planner")
    fixtures = a.fixtures_path.empty()
                   ? default_inequality_fixtures()
                   : fixtures_from_json(parse_json_text(read_file(a.fixtures_path)));

  std::vector<Verdict> verdicts;
  if (a.suite != "planner") {
    auto v = verify_inequality_suite(a.seed, fixtures, a.trials, a.workers);
    verdicts.insert(verdicts.end(), v.begin(), v.end());
  }
  if (a.suite != "inequality") {
    auto v = verify_planner_suite();
    verdicts.insert(verdicts.end(), v.begin(), v.end());
  }

  std::size_t passed = 0;
  for (const auto& v : verdicts) {
    passed += v.pass ? 1 : 0;
    out << (v.pass ? "PASS " : "FAIL ") << v.fixture << ' ' << v.check
        << " expected=" << six_digits(v.expected) << " observed=" << six_digits(v.observed);
    if (v.sigma > 0) out << " sigma=" << six_digits(v.sigma);
    out << '\n';
  }
  out << passed << '/' << verdicts.size() << " verdicts passed\n";
  if (!a.json_path.empty()) write_file(a.json_path, to_json(verdicts).dump(2) + "\n");
  return passed == verdicts.size() ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order-statistics confidence calculus for probabilistic robustness analysis",
               "ordstat"};
  app.require_subcommand(1);
  const std::size_t default_workers = default_worker_count();

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "Minimum sample size for (epsilon, delta)");
  plan_cmd->add_option("--epsilon", plan.epsilon, "Accuracy level in (0,1)")->required();
  plan_cmd->add_option("--delta", plan.delta, "Risk level in (0,1)")->required();
  plan_cmd->add_option("--mode", plan.mode, "extreme: u_(N) bound; tolerance: (u_(1), u_(N)]")
      ->check(CLI::IsMember({"extreme", "tolerance"}))
      ->capture_default_str();

  ConfidenceArgs conf;
  auto* conf_cmd = app.add_subcommand("confidence", "Confidence bound for an order statistic");
  conf_cmd->add_option("--side", conf.side, "upper: P{u > u_(n)} <= eps; lower: P{u < u_(m)} <= eps")
      ->check(CLI::IsMember({"upper", "lower"}))
      ->required();
  conf_cmd->add_option("--n", conf.n, "Index of the upper estimate u_(n)");
  conf_cmd->add_option("--m", conf.m, "Index of the lower estimate u_(m)");
  conf_cmd->add_option("--N", conf.sample_size, "Sample size")->required();
  conf_cmd->add_option("--epsilon", conf.epsilon, "Accuracy level in (0,1)")->required();

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "Confidence of u_(n) versus n as CSV (n,bound)");
  curve_cmd->add_option("--N", curve.sample_size, "Sample size")->required();
  curve_cmd->add_option("--epsilon", curve.epsilon, "Accuracy level in (0,1)")->required();
  curve_cmd->add_option("--from", curve.from, "First n")->capture_default_str();
  curve_cmd->add_option("--to", curve.to, "Last n (default N)");
  curve_cmd->add_option("--out", curve.out_path, "Output CSV file (default stdout)");

  AnalyzeArgs an;
  an.workers = default_workers;
  auto* an_cmd = app.add_subcommand("analyze", "Monte Carlo run of a model with confidence report");
  an_cmd->add_option("--model", an.model_path, "Model JSON file")->required();
  an_cmd->add_option("--N", an.sample_size, "Sample size")->required();
  an_cmd->add_option("--seed", an.seed, "64-bit seed")->capture_default_str();
  an_cmd->add_option("--epsilon", an.epsilon, "Accuracy level in (0,1)")->required();
  an_cmd->add_option("--delta", an.delta, "Risk level for the planner echo (default epsilon)");
  an_cmd->add_option("--m", an.m, "Lower tolerance index")->capture_default_str();
  an_cmd->add_option("--n", an.n, "Upper tolerance index (default N)");
  an_cmd->add_option("--curve-from", an.curve_from, "First n of the curve")->capture_default_str();
  an_cmd->add_option("--curve-to", an.curve_to, "Last n of the curve (default N)");
  an_cmd->add_option("--out", an.out_dir, "Output directory for report.json and curve.csv")
      ->required();
  an_cmd->add_option("--workers", an.workers, "Worker threads (default $ORDSTAT_WORKERS or 1)")
      ->capture_default_str();

  VerifyArgs ver;
  ver.workers = default_workers;
  auto* ver_cmd = app.add_subcommand("verify", "Run the simulation and planner verification suites");
  ver_cmd->add_option("--suite", ver.suite, "inequality, planner or all")
      ->check(CLI::IsMember({"inequality", "planner", "all"}))
      ->capture_default_str();
  ver_cmd->add_option("--seed", ver.seed, "64-bit seed")->capture_default_str();
  ver_cmd->add_option("--fixtures", ver.fixtures_path, "Fixture JSON file (default built-in)");
  ver_cmd->add_option("--trials", ver.trials, "Simulation trials per case")->capture_default_str();
  ver_cmd->add_option("--workers", ver.workers, "Worker threads (default $ORDSTAT_WORKERS or 1)")
      ->capture_default_str();
  ver_cmd->add_option("--json", ver.json_path, "Write verdicts as JSON to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (plan_cmd->parsed()) return command_plan(plan, out);
    if (conf_cmd->parsed()) return command_confidence(conf, out);
    if (curve_cmd->parsed()) return command_curve(curve, out);
    if (an_cmd->parsed()) return command_analyze(an, out);
    if (ver_cmd->parsed()) return command_verify(ver, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: schema violation at " << (e.pointer().empty() ? "/" : e.pointer()) << ": "
        << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ordstat
