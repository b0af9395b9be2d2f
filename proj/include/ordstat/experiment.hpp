#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ordstat/distributions.hpp"
#include "ordstat/expr.hpp"

namespace ordstat {

/// What to do with a sample at which u(q) is undefined.
enum class UndefinedPolicy {
  Reject,  // draw again from the same slot's substream (counted)
  Fail,    // abort the run with ModelError
};

/// Parameter law, quantity and a label.
struct UncertainModel {
  ParameterDomain domain;
  QuantityExpr expression;
  std::string label;
  UndefinedPolicy policy = UndefinedPolicy::Reject;

  /// Checks the domain and that every q index fits its dimension.
  void validate() const;
};

/// Sorted observations u_(1) <= ... <= u_(N) of one run.
struct EmpiricalOrderStats {
  std::vector<double> values;
  std::int64_t sample_size = 0;
  std::uint64_t seed = 0;
  std::uint64_t rejected = 0;             // undefined draws, redrawn
  std::uint64_t truncation_rejections = 0;  // truncated-gaussian proposals outside the box
  std::string label;

  /// u_(i), 1-based.
  double at(std::int64_t i) const;
};

/// Consecutive undefined draws tolerated for one sample slot.
inline constexpr std::uint64_t kMaxConsecutiveRejections = 10'000;

/// Default worker count: $ORDSTAT_WORKERS when set to a positive integer,
/// otherwise 1.
std::size_t default_worker_count();

/// Draws N i.i.d. parameter vectors, evaluates u and sorts. Sample i uses
/// only the substream derived from (seed, i), so the result is identical
/// for every `workers` value. Throws ModelError when a slot exhausts its
/// rejection budget, or on the first undefined sample under
/// UndefinedPolicy::Fail.
EmpiricalOrderStats run_experiment(const UncertainModel& model, std::int64_t sample_size,
                                   std::uint64_t seed, std::size_t workers = 1);

struct ExtremeEstimate {
  double value;
  double confidence;
};

/// u_(1) and u_(N) as estimates of min u and max u, each with its
/// confidence bound at accuracy epsilon.
struct ExtremesReport {
  double epsilon;
  ExtremeEstimate min;
  ExtremeEstimate max;
};

ExtremesReport estimate_extremes(const EmpiricalOrderStats& stats, double epsilon);

struct CurvePoint {
  std::int64_t n;
  double bound;
};

/// upper_bound_confidence(n, N, eps) for n in [n_lo, n_hi].
std::vector<CurvePoint> tradeoff_curve(std::int64_t sample_size, double epsilon,
                                       std::int64_t n_lo, std::int64_t n_hi);

/// Tolerance interval (u_(m), u_(n)] and its confidence.
struct ToleranceReport {
  std::int64_t m;
  std::int64_t n;
  double epsilon;
  double lower;
  double upper;
  double confidence;
};

ToleranceReport tolerance_report(const EmpiricalOrderStats& stats, std::int64_t m,
                                 std::int64_t n, double epsilon);

struct PlannerEcho {
  double epsilon;
  double delta;
  std::int64_t min_sample_size_extreme;
  std::int64_t min_sample_size_tolerance;
};

PlannerEcho plan_sample_sizes(double epsilon, double delta);

struct AnalysisRequest {
  double epsilon = 0.01;
  double delta = 0.01;
  std::int64_t m = 1;
  std::int64_t n = 0;         // 0 means N
  std::int64_t curve_lo = 1;  // curve range, clipped to 1..N
  std::int64_t curve_hi = 0;  // 0 means N
};

struct AnalysisReport {
  std::string label;
  std::int64_t sample_size;
  std::uint64_t seed;
  std::uint64_t rejected;
  std::uint64_t truncation_rejections;
  ExtremesReport extremes;
  ToleranceReport tolerance;
  PlannerEcho planner;
  std::vector<CurvePoint> curve;
};

AnalysisReport analyze(const EmpiricalOrderStats& stats, const AnalysisRequest& request);

/// Curve as CSV: header "n,bound", LF line endings, shortest round-trip
/// decimal for every bound.
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

/// Shortest decimal that parses back to exactly `v` (at most 17 digits).
std::string format_double(double v);

}  // namespace ordstat
