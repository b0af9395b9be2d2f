#include "ordstat/stats_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ordstat/error.hpp"

namespace ordstat {
namespace {

constexpr std::int64_t kPlannerUpper = std::int64_t{1} << 40;

void check_sample_size(std::int64_t sample_size) {
  if (sample_size < 1) throw DomainError("sample size N must be a positive integer");
}

void check_index(std::int64_t index, std::int64_t sample_size, const char* name) {
  check_sample_size(sample_size);
  if (index < 1 || index > sample_size)
    throw DomainError(std::string("order-statistic index ") + name + "=" +
                      std::to_string(index) + " must lie in 1..N (N=" +
                      std::to_string(sample_size) + ")");
}

void check_level(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0))
    throw DomainError(std::string(name) + " must lie in the open interval (0,1)");
}

double as_real(std::int64_t v) { return static_cast<double>(v); }

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Per-level data and the admissible range of j_s shared by the counter and
// the enumerator, so both visit exactly the same index set.
struct JointLayout {
  std::int64_t sample_size;
  std::vector<std::int64_t> indices;
  std::vector<double> log_delta;  // ln(t_s - t_{s-1}); -inf when the gap is empty
  std::vector<bool> empty_gap;
  double log_tail;  // ln(1 - t_k)
  bool empty_tail;

  JointLayout(const JointQuery& q, std::int64_t n) : sample_size(n), indices(q.indices) {
    double prev = 0.0;
    for (double t : q.thresholds) {
      const double gap = t - prev;
      empty_gap.push_back(gap <= 0.0);
      log_delta.push_back(gap > 0.0 ? std::log(gap) : -std::numeric_limits<double>::infinity());
      prev = t;
    }
    empty_tail = !(prev < 1.0);
    log_tail = empty_tail ? -std::numeric_limits<double>::infinity() : std::log1p(-prev);
  }

  std::size_t k() const { return indices.size(); }

  // Admissible [lo, hi] for j_s given prefix p = j_1 + ... + j_{s-1};
  // empty when lo > hi.
  std::pair<std::int64_t, std::int64_t> range(std::size_t s, std::int64_t p) const {
    std::int64_t lo = std::max<std::int64_t>(0, indices[s] - p);
    std::int64_t hi = sample_size - p;
    if (empty_gap[s]) hi = std::min<std::int64_t>(hi, 0);
    if (s + 1 == k() && empty_tail) lo = std::max(lo, sample_size - p);
    return {lo, hi};
  }
};

class LogBinomialCache {
 public:
  explicit LogBinomialCache(std::int64_t n) : rows_(n <= kMaxCached ? n + 1 : 0) {}

  double operator()(std::int64_t n, std::int64_t j) {
    if (rows_.empty()) return log_binomial(n, j);
    auto& row = rows_[static_cast<std::size_t>(n)];
    if (row.empty()) {
      row.resize(static_cast<std::size_t>(n) + 1);
      for (std::int64_t i = 0; i <= n; ++i) row[static_cast<std::size_t>(i)] = log_binomial(n, i);
    }
    return row[static_cast<std::size_t>(j)];
  }

 private:
  static constexpr std::int64_t kMaxCached = 2000;
  std::vector<std::vector<double>> rows_;
};

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t cap = kJointTermBudget + 1;
  const std::uint64_t s = a + b;
  return (s < a || s > cap) ? cap : s;
}

}  // namespace

double clamp_probability(double p, const char* what) {
  if (std::isnan(p) || p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack)
    throw ConsistencyError(std::string(what) + " produced probability " + std::to_string(p) +
                           " outside [0,1]");
  return std::clamp(p, 0.0, 1.0);
}

void ConfidenceQuery::validate() const {
  check_index(n, sample_size, "n");
  check_index(m, sample_size, "m");
  check_level(epsilon, "epsilon");
  if (delta) check_level(*delta, "delta");
}

void JointQuery::validate(std::int64_t sample_size) const {
  check_sample_size(sample_size);
  if (indices.empty()) throw DomainError("joint query needs at least one index");
  if (indices.size() != thresholds.size())
    throw DomainError("joint query needs one threshold per index");
  if (static_cast<std::int64_t>(indices.size()) > sample_size)
    throw DomainError("joint query has more indices than samples");
  for (std::size_t s = 0; s < indices.size(); ++s) {
    check_index(indices[s], sample_size, "i_s");
    if (!(thresholds[s] >= 0.0 && thresholds[s] <= 1.0))
      throw DomainError("joint query thresholds must lie in [0,1]");
    if (s > 0 && indices[s] <= indices[s - 1])
      throw DomainError("joint query indices must be strictly increasing");
    if (s > 0 && thresholds[s] < thresholds[s - 1])
      throw DomainError("joint query thresholds must be nondecreasing");
  }
}

double order_stat_cdf_uniform(double t, std::int64_t n, std::int64_t sample_size) {
  check_index(n, sample_size, "n");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("threshold t must lie in [0,1]");
  return regularized_incomplete_beta(t, as_real(n), as_real(sample_size - n + 1));
}

double upper_bound_confidence(std::int64_t n, std::int64_t sample_size, double epsilon) {
  check_index(n, sample_size, "n");
  check_level(epsilon, "epsilon");
  // 1 - I_{1-eps}(n, N-n+1) = I_eps(N-n+1, n); evaluated at eps directly.
  return regularized_incomplete_beta(epsilon, as_real(sample_size - n + 1), as_real(n));
}

double lower_bound_confidence(std::int64_t m, std::int64_t sample_size, double epsilon) {
  check_index(m, sample_size, "m");
  check_level(epsilon, "epsilon");
  // 1 - I_{1-eps}(N-m+1, m) = I_eps(m, N-m+1).
  return regularized_incomplete_beta(epsilon, as_real(m), as_real(sample_size - m + 1));
}

double tolerance_confidence(std::int64_t m, std::int64_t n, std::int64_t sample_size,
                            double epsilon) {
  check_index(m, sample_size, "m");
  check_index(n, sample_size, "n");
  if (m >= n) throw DomainError("tolerance interval needs m < n");
  check_level(epsilon, "epsilon");
  const std::int64_t width = n - m;
  // 1 - I_{1-eps}(n-m, N-n+m+1) = I_eps(N-n+m+1, n-m).
  return regularized_incomplete_beta(epsilon, as_real(sample_size - width + 1), as_real(width));
}

double mu(std::int64_t sample_size, double epsilon) {
  check_sample_size(sample_size);
  check_level(epsilon, "epsilon");
  const double steps = as_real(sample_size - 1);
  const double base = 1.0 - epsilon;
  // pow is exact-input when 1-eps is representable; otherwise log1p keeps
  // the relative accuracy of eps.
  const double decay =
      (1.0 - base == epsilon) ? std::pow(base, steps) : std::exp(steps * std::log1p(-epsilon));
  return decay * (1.0 + steps * epsilon);
}

std::int64_t min_sample_size_tolerance(double epsilon, double delta) {
  check_level(epsilon, "epsilon");
  check_level(delta, "delta");
  std::int64_t lo = 2;
  if (mu(lo, epsilon) <= delta) return lo;
  std::int64_t hi = kPlannerUpper;
  if (mu(hi, epsilon) > delta)
    throw DomainError("required sample size exceeds the planner range 2^40");
  // Invariant: mu(lo) > delta >= mu(hi).
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (mu(mid, epsilon) <= delta)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::int64_t min_sample_size_extreme(double epsilon, double delta) {
  check_level(epsilon, "epsilon");
  check_level(delta, "delta");
  const double ratio = std::log(delta) / std::log1p(-epsilon);
  const double floor_ratio = std::floor(ratio);
  // A ratio within a few ulps of an integer is that integer.
  const double tie_slack = 4.0 * std::numeric_limits<double>::epsilon() * ratio;
  const double n = (ratio - floor_ratio <= tie_slack) ? floor_ratio : std::ceil(ratio);
  if (!(n < 9.0e18)) throw DomainError("required sample size overflows");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

std::uint64_t count_joint_terms(const JointQuery& query, std::int64_t sample_size) {
  query.validate(sample_size);
  const JointLayout layout(query, sample_size);
  const auto width = static_cast<std::size_t>(sample_size) + 1;
  std::vector<std::uint64_t> ways(width, 0);
  ways[0] = 1;
  for (std::size_t s = 0; s < layout.k(); ++s) {
    std::vector<std::uint64_t> next(width, 0);
    const bool last_fixed = (s + 1 == layout.k()) && layout.empty_tail;
    if (layout.empty_gap[s]) {
      // j_s = 0: prefix unchanged.
      for (std::int64_t p = layout.indices[s]; p <= sample_size; ++p)
        next[static_cast<std::size_t>(p)] = ways[static_cast<std::size_t>(p)];
      if (last_fixed)
        for (std::int64_t p = 0; p < sample_size; ++p) next[static_cast<std::size_t>(p)] = 0;
    } else {
      // Every p <= p' reaches p' = p + j_s; running prefix sums.
      std::uint64_t acc = 0;
      for (std::int64_t p = 0; p <= sample_size; ++p) {
        acc = saturating_add(acc, ways[static_cast<std::size_t>(p)]);
        if (p >= layout.indices[s]) next[static_cast<std::size_t>(p)] = acc;
      }
      if (last_fixed)
        for (std::int64_t p = 0; p < sample_size; ++p) next[static_cast<std::size_t>(p)] = 0;
    }
    ways.swap(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = saturating_add(total, w);
  return total;
}

JointCdfEvaluation joint_orderstat_cdf(const JointQuery& query, std::int64_t sample_size,
                                       bool record_terms) {
  const std::uint64_t needed = count_joint_terms(query, sample_size);
  if (needed > kJointTermBudget)
    throw BudgetExceeded("joint order-statistic CDF needs more than " +
                         std::to_string(kJointTermBudget) + " terms (k=" +
                         std::to_string(query.k()) + ", N=" + std::to_string(sample_size) + ")");

  const JointLayout layout(query, sample_size);
  LogBinomialCache log_choose(sample_size);
  JointCdfEvaluation out;
  out.k = layout.k();
  if (record_terms) {
    out.terms.reserve(static_cast<std::size_t>(needed) * out.k);
    out.log_weights.reserve(static_cast<std::size_t>(needed));
  }
  CompensatedSum sum;
  std::vector<std::int64_t> parts(layout.k(), 0);

  auto visit = [&](auto&& self, std::size_t s, std::int64_t prefix, double log_weight) -> void {
    if (s == layout.k()) {
      const std::int64_t rest = sample_size - prefix;
      const double lw = log_weight + (rest > 0 ? as_real(rest) * layout.log_tail : 0.0);
      ++out.term_count;
      if (record_terms) {
        out.terms.insert(out.terms.end(), parts.begin(), parts.end());
        out.log_weights.push_back(lw);
      }
      sum.add(std::exp(lw));
      return;
    }
    const auto [lo, hi] = layout.range(s, prefix);
    for (std::int64_t j = lo; j <= hi; ++j) {
      parts[s] = j;
      const double term = log_choose(sample_size - prefix, j) +
                          (j > 0 ? as_real(j) * layout.log_delta[s] : 0.0);
      self(self, s + 1, prefix + j, log_weight + term);
    }
  };
  visit(visit, 0, 0, 0.0);

  out.total = clamp_probability(sum.value(), "joint order-statistic CDF");
  return out;
}

double joint_orderstat_probability(const JointQuery& query, std::int64_t sample_size) {
  return joint_orderstat_cdf(query, sample_size, false).total;
}

JointQuery adjusted_query(const PiecewiseCdf& cdf, const JointQuery& query) {
  JointQuery adjusted = query;
  for (double& t : adjusted.thresholds) t = cdf.sup_below(t);
  return adjusted;
}

double joint_cdf_noncontinuous(const PiecewiseCdf& cdf, const JointQuery& query,
                               std::int64_t sample_size) {
  query.validate(sample_size);
  return joint_orderstat_probability(adjusted_query(cdf, query), sample_size);
}

}  // namespace ordstat
