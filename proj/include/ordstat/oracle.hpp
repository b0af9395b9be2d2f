#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ordstat/distributions.hpp"
#include "ordstat/stats_core.hpp"

namespace ordstat {

struct SimulationEstimate {
  double estimate;
  double standard_error;  // binomial, from the estimate itself
  std::uint64_t trials;
};

/// Brute-force estimate of P{F(u_(i_1)) < t_1, ..., F(u_(i_k)) < t_k}:
/// `trials` experiments of N draws from `cdf`, each sorted and tested with
/// the strict inequality. Trial r draws from substream (seed, r), so the
/// estimate does not depend on `workers`. Requires trials >= 1000.
SimulationEstimate simulate_joint_probability(const PiecewiseCdf& cdf, const JointQuery& query,
                                              std::int64_t sample_size, std::uint64_t trials,
                                              std::uint64_t seed, std::size_t workers = 1);

/// One check outcome. `sigma` is the band unit (binomial standard error
/// for simulation checks, 0 for exact comparisons); `gap` is
/// observed - expected.
struct Verdict {
  std::string fixture;
  std::string check;
  double expected = 0.0;
  double observed = 0.0;
  double sigma = 0.0;
  double gap = 0.0;
  bool pass = false;
};

/// Simulation band in standard errors.
inline constexpr double kSigmaBand = 4.0;

struct InequalityCase {
  JointQuery query;
  std::int64_t sample_size;
};

struct InequalityFixture {
  std::string id;
  PiecewiseCdf cdf;
  std::vector<InequalityCase> cases;
};

/// Built-in continuous and atomic fixtures.
std::vector<InequalityFixture> default_inequality_fixtures();

/// For every case: (a) simulation agrees with joint_cdf_noncontinuous
/// within 4 sigma, (b) joint_cdf_noncontinuous <= joint_orderstat_cdf at the
/// original thresholds, and on fixtures without atoms (c) the two closed
/// forms agree within 1e-10.
std::vector<Verdict> verify_inequality_suite(std::uint64_t seed,
                                             const std::vector<InequalityFixture>& fixtures,
                                             std::uint64_t trials = 200'000,
                                             std::size_t workers = 1);

inline std::vector<Verdict> verify_inequality_suite(std::uint64_t seed) {
  return verify_inequality_suite(seed, default_inequality_fixtures());
}

/// For (eps, delta) in {0.05, 0.01, 0.005, 0.001}^2: the tolerance planner
/// is the exact threshold of mu, it matches exhaustive search, and the
/// extreme planner matches exhaustive search over (1-eps)^N <= delta. Also
/// checks the two published sample sizes.
std::vector<Verdict> verify_planner_suite();

bool all_pass(const std::vector<Verdict>& verdicts);

}  // namespace ordstat
