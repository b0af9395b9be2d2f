#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ordstat/distributions.hpp"
#include "ordstat/special.hpp"

namespace ordstat {

/// Indices (n for upper estimates, m for lower), sample size and levels of a
/// confidence statement about order statistics.
struct ConfidenceQuery {
  std::int64_t n = 1;
  std::int64_t m = 1;
  std::int64_t sample_size = 1;
  double epsilon = 0.5;
  std::optional<double> delta;

  /// Throws DomainError on any violated range.
  void validate() const;
};

/// Constrained order-statistic indices i_1 < ... < i_k and thresholds
/// t_1 <= ... <= t_k in [0,1].
struct JointQuery {
  std::vector<std::int64_t> indices;
  std::vector<double> thresholds;

  std::size_t k() const noexcept { return indices.size(); }
  void validate(std::int64_t sample_size) const;
};

/// Record of the combinatorial sum over compositions (j_1..j_k), where j_s
/// counts uniform samples falling in (t_{s-1}, t_s].
struct JointCdfEvaluation {
  std::size_t k = 0;
  /// Compositions, flattened: term r occupies [r*k, (r+1)*k).
  std::vector<std::int64_t> terms;
  /// ln of each term's probability, parallel to the compositions.
  std::vector<double> log_weights;
  std::uint64_t term_count = 0;
  double total = 0.0;

  std::span<const std::int64_t> composition(std::size_t r) const {
    return std::span<const std::int64_t>(terms).subspan(r * k, k);
  }
};

/// Hard cap on the number of compositions a joint evaluation may visit.
inline constexpr std::uint64_t kJointTermBudget = 10'000'000;

/// Values this close outside [0,1] are clamped; farther excursions raise
/// ConsistencyError.
inline constexpr double kProbabilitySlack = 1e-12;

double clamp_probability(double p, const char* what);

/// P{U_(n) <= t} for the n-th of N uniform order statistics: I_t(n, N-n+1).
double order_stat_cdf_uniform(double t, std::int64_t n, std::int64_t sample_size);

/// Lower bound on P{ P{u > u_(n)} <= eps }: 1 - I_{1-eps}(n, N-n+1).
/// Attained exactly when sup{F(x) : F(x) < 1-eps} = 1-eps.
double upper_bound_confidence(std::int64_t n, std::int64_t sample_size, double epsilon);

/// Lower bound on P{ P{u < u_(m)} <= eps }: 1 - I_{1-eps}(N-m+1, m).
/// Attained exactly when inf{F(x) : F(x) > eps} = eps.
double lower_bound_confidence(std::int64_t m, std::int64_t sample_size, double epsilon);

/// P{ P{u_(m) < u <= u_(n)} >= 1-eps } for continuous F:
/// 1 - I_{1-eps}(n-m, N-n+m+1). Requires 1 <= m < n <= N.
double tolerance_confidence(std::int64_t m, std::int64_t n, std::int64_t sample_size,
                            double epsilon);

/// (1-eps)^(N-1) [1 + (N-1) eps], the failure probability of the
/// (u_(1), u_(N)] tolerance statement. Strictly decreasing in N.
double mu(std::int64_t sample_size, double epsilon);

/// Least N >= 2 with mu(N, eps) <= delta, by integer bisection on [2, 2^40].
std::int64_t min_sample_size_tolerance(double epsilon, double delta);

/// ceil(ln(1/delta) / ln(1/(1-eps))); an exact integer ratio is returned as is.
std::int64_t min_sample_size_extreme(double epsilon, double delta);

/// Number of compositions `joint_orderstat_cdf` would visit (saturating at
/// kJointTermBudget + 1).
std::uint64_t count_joint_terms(const JointQuery& query, std::int64_t sample_size);

/// P{U_(i_1) <= t_1, ..., U_(i_k) <= t_k} for N uniform order statistics,
/// by enumerating the compositions j with i_s <= j_1 + ... + j_s <= N.
/// Terms are weighted in log space and accumulated with compensated
/// summation. Throws BudgetExceeded when more than kJointTermBudget terms
/// would be needed. Set `record_terms` to false to skip storing the
/// compositions.
JointCdfEvaluation joint_orderstat_cdf(const JointQuery& query, std::int64_t sample_size,
                                       bool record_terms = true);

/// Total of `joint_orderstat_cdf` without the term record.
double joint_orderstat_probability(const JointQuery& query, std::int64_t sample_size);

/// Thresholds after replacing each t_s by sup{F(x) : F(x) < t_s}.
JointQuery adjusted_query(const PiecewiseCdf& cdf, const JointQuery& query);

/// P{F(u_(i_1)) < t_1, ..., F(u_(i_k)) < t_k} for samples from `cdf`, which
/// need not be continuous: the uniform joint CDF at the adjusted
/// thresholds. Never exceeds joint_orderstat_probability(query, N).
double joint_cdf_noncontinuous(const PiecewiseCdf& cdf, const JointQuery& query,
                               std::int64_t sample_size);

}  // namespace ordstat
