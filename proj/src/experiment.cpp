#include "ordstat/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "ordstat/error.hpp"
#include "ordstat/stats_core.hpp"

namespace ordstat {

void UncertainModel::validate() const {
  domain.validate();
  if (expression.required_dimension() > domain.dimension())
    throw DomainError("expression reads q[" + std::to_string(expression.required_dimension() - 1) +
                      "] but the domain has dimension " + std::to_string(domain.dimension()));
}

double EmpiricalOrderStats::at(std::int64_t i) const {
  if (i < 1 || i > static_cast<std::int64_t>(values.size()))
    throw DomainError("order statistic index " + std::to_string(i) + " out of range 1.." +
                      std::to_string(values.size()));
  return values[static_cast<std::size_t>(i - 1)];
}

std::size_t default_worker_count() {
  const char* env = std::getenv("ORDSTAT_WORKERS");
  if (env == nullptr) return 1;
  std::size_t v = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto res = std::from_chars(env, end, v);
  if (res.ec != std::errc() || res.ptr != end || v == 0) return 1;
  return v;
}

namespace {

struct SlotFailure {
  std::int64_t slot = std::numeric_limits<std::int64_t>::max();
  std::exception_ptr error;
};

}  // namespace

EmpiricalOrderStats run_experiment(const UncertainModel& model, std::int64_t sample_size,
                                   std::uint64_t seed, std::size_t workers) {
  if (sample_size < 1) throw DomainError("sample size N must be a positive integer");
  model.validate();
  workers = std::clamp<std::size_t>(workers, 1, static_cast<std::size_t>(sample_size));

  EmpiricalOrderStats out;
  out.values.resize(static_cast<std::size_t>(sample_size));
  out.sample_size = sample_size;
  out.seed = seed;
  out.label = model.label;

  std::vector<std::uint64_t> rejected(workers, 0);
  std::vector<std::uint64_t> truncated(workers, 0);
  std::vector<SlotFailure> failures(workers);

  auto run_block = [&](std::size_t w) {
    const std::int64_t begin = sample_size * static_cast<std::int64_t>(w) /
                               static_cast<std::int64_t>(workers);
    const std::int64_t end = sample_size * static_cast<std::int64_t>(w + 1) /
                             static_cast<std::int64_t>(workers);
    for (std::int64_t slot = begin; slot < end; ++slot) {
      try {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(slot));
        std::uint64_t misses = 0;
        for (;;) {
          const auto q = sample_parameter(model.domain, rng, &truncated[w]);
          if (const auto u = model.expression.evaluate(q)) {
            out.values[static_cast<std::size_t>(slot)] = *u;
            break;
          }
          if (model.policy == UndefinedPolicy::Fail)
            throw ModelError("model '" + model.label + "' is undefined at sample " +
                             std::to_string(slot));
          if (++misses >= kMaxConsecutiveRejections)
            throw ModelError("model '" + model.label + "': sample " + std::to_string(slot) +
                             " hit " + std::to_string(kMaxConsecutiveRejections) +
                             " consecutive undefined draws");
        }
        rejected[w] += misses;
      } catch (...) {
        failures[w] = {slot, std::current_exception()};
        return;
      }
    }
  };

  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }

  // Report the failure of the lowest slot so the error does not depend on
  // the partition.
  const auto first = std::min_element(failures.begin(), failures.end(),
                                      [](const auto& a, const auto& b) { return a.slot < b.slot; });
  if (first->error) std::rethrow_exception(first->error);

  for (auto r : rejected) out.rejected += r;
  for (auto r : truncated) out.truncation_rejections += r;
  std::stable_sort(out.values.begin(), out.values.end());
  return out;
}

ExtremesReport estimate_extremes(const EmpiricalOrderStats& stats, double epsilon) {
  const std::int64_t n = stats.sample_size;
  return {epsilon,
          {stats.at(1), lower_bound_confidence(1, n, epsilon)},
          {stats.at(n), upper_bound_confidence(n, n, epsilon)}};
}

std::vector<CurvePoint> tradeoff_curve(std::int64_t sample_size, double epsilon,
                                       std::int64_t n_lo, std::int64_t n_hi) {
  if (sample_size < 1) throw DomainError("sample size N must be a positive integer");
  if (n_lo < 1 || n_hi > sample_size || n_lo > n_hi)
    throw DomainError("curve range must satisfy 1 <= from <= to <= N");
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (std::int64_t n = n_lo; n <= n_hi; ++n)
    out.push_back({n, upper_bound_confidence(n, sample_size, epsilon)});
  return out;
}

ToleranceReport tolerance_report(const EmpiricalOrderStats& stats, std::int64_t m,
                                 std::int64_t n, double epsilon) {
  const double confidence = tolerance_confidence(m, n, stats.sample_size, epsilon);
  return {m, n, epsilon, stats.at(m), stats.at(n), confidence};
}

PlannerEcho plan_sample_sizes(double epsilon, double delta) {
  return {epsilon, delta, min_sample_size_extreme(epsilon, delta),
          min_sample_size_tolerance(epsilon, delta)};
}

AnalysisReport analyze(const EmpiricalOrderStats& stats, const AnalysisRequest& request) {
  const std::int64_t big_n = stats.sample_size;
  const std::int64_t n = request.n == 0 ? big_n : request.n;
  const std::int64_t hi = request.curve_hi == 0 ? big_n : request.curve_hi;
  AnalysisReport r;
  r.label = stats.label;
  r.sample_size = big_n;
  r.seed = stats.seed;
  r.truncation_rejections = stats.truncation_rejections;
  r.rejected = stats.rejected;
  r.extremes = estimate_extremes(stats, request.epsilon);
  r.tolerance = tolerance_report(stats, request.m, n, request.epsilon);
  r.planner = plan_sample_sizes(request.epsilon, request.delta);
  r.curve = tradeoff_curve(big_n, request.epsilon, request.curve_lo, hi);
  return r;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "n,bound\n";
  for (const auto& p : curve) {
    out += std::to_string(p.n);
    out += ',';
    out += format_double(p.bound);
    out += '\n';
  }
  return out;
}

}  // namespace ordstat
