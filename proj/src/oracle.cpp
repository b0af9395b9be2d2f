#include "ordstat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ordstat/error.hpp"

namespace ordstat {

SimulationEstimate simulate_joint_probability(const PiecewiseCdf& cdf, const JointQuery& query,
                                              std::int64_t sample_size, std::uint64_t trials,
                                              std::uint64_t seed, std::size_t workers) {
  query.validate(sample_size);
  if (trials < 1000) throw DomainError("simulation needs at least 1000 trials");
  workers = std::clamp<std::size_t>(workers, 1, 256);

  std::vector<std::uint64_t> hits(workers, 0);
  auto run_block = [&](std::size_t w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    std::vector<double> draws(static_cast<std::size_t>(sample_size));
    for (std::uint64_t r = begin; r < end; ++r) {
      Rng rng = Rng::substream(seed, r);
      for (double& x : draws) x = cdf.sample(rng);
      std::sort(draws.begin(), draws.end());
      bool event = true;
      for (std::size_t s = 0; s < query.k() && event; ++s) {
        const double u = draws[static_cast<std::size_t>(query.indices[s] - 1)];
        event = cdf.eval(u) < query.thresholds[s];
      }
      if (event) ++hits[w];
    }
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }

  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(total) / t;
  return {p, std::sqrt(p * (1.0 - p) / t), trials};
}

std::vector<InequalityFixture> default_inequality_fixtures() {
  std::vector<InequalityFixture> out;

  out.push_back({"uniform",
                 PiecewiseCdf::uniform(0.0, 1.0),
                 {{{{2}, {0.5}}, 2},
                  {{{3}, {0.4}}, 5},
                  {{{1, 3}, {0.2, 0.6}}, 5},
                  {{{1, 2, 4}, {0.1, 0.4, 0.7}}, 6}}});

  // Flat between 1 and 2: continuous, but not strictly increasing.
  out.push_back({"gapped_continuous",
                 PiecewiseCdf({{0.0, 1.0, 0.0, 0.4}, {2.0, 3.0, 0.4, 1.0}}, {}),
                 {{{{1}, {0.4}}, 3}, {{{2, 3}, {0.4, 0.9}}, 4}}});

  // Jump 0 -> 0.5 at x = 0, then F(x) = 0.5 + x on [0, 0.5].
  out.push_back({"atom_at_zero",
                 PiecewiseCdf({{0.0, 0.5, 0.5, 1.0}}, {{0.0, 0.5}}),
                 {{{{1}, {0.3}}, 1},
                  {{{1}, {0.7}}, 1},
                  {{{2}, {0.45}}, 3},
                  {{{1, 2}, {0.3, 0.8}}, 4},
                  {{{2, 4}, {0.5, 0.75}}, 5}}});

  // u = max(q, 0.5) with q uniform on [0,1]: constant on a set of mass 1/2.
  out.push_back({"clipped_uniform",
                 PiecewiseCdf({{0.5, 1.0, 0.5, 1.0}}, {{0.5, 0.5}}),
                 {{{{3}, {0.95}}, 3}, {{{1, 3}, {0.4, 0.7}}, 4}}});

  out.push_back({"two_atoms",
                 PiecewiseCdf({{0.0, 1.0, 0.0, 0.2}, {1.0, 2.0, 0.5, 0.6}, {2.0, 3.0, 0.8, 1.0}},
                              {{1.0, 0.3}, {2.0, 0.2}}),
                 {{{{2}, {0.4}}, 4}, {{{1, 3}, {0.55, 0.7}}, 4}, {{{1, 2, 3}, {0.1, 0.5, 0.9}}, 5}}});

  out.push_back({"discrete",
                 PiecewiseCdf({}, {{0.0, 0.2}, {1.0, 0.5}, {2.0, 0.3}}),
                 {{{{1}, {0.5}}, 2}, {{{2, 3}, {0.3, 0.75}}, 3}}});
  return out;
}

std::vector<Verdict> verify_inequality_suite(std::uint64_t seed,
                                             const std::vector<InequalityFixture>& fixtures,
                                             std::uint64_t trials, std::size_t workers) {
  std::vector<Verdict> out;
  std::uint64_t case_seed = seed;
  for (const auto& fx : fixtures) {
    for (std::size_t c = 0; c < fx.cases.size(); ++c) {
      const auto& cs = fx.cases[c];
      const std::string id = fx.id + "#" + std::to_string(c);
      const double adjusted = joint_cdf_noncontinuous(fx.cdf, cs.query, cs.sample_size);
      const double plain = joint_orderstat_probability(cs.query, cs.sample_size);
      const auto sim = simulate_joint_probability(fx.cdf, cs.query, cs.sample_size, trials,
                                                  mix64(case_seed++), workers);
      // Band from the closed-form probability so that p in {0,1} demands
      // an exact match.
      const double sigma = std::sqrt(adjusted * (1.0 - adjusted) / static_cast<double>(trials));
      const double gap = sim.estimate - adjusted;
      out.push_back({id, "simulation_matches_adjusted", adjusted, sim.estimate, sigma, gap,
                     std::abs(gap) <= kSigmaBand * sigma + 1e-15});
      out.push_back({id, "adjusted_not_above_continuous", plain, adjusted, 0.0, adjusted - plain,
                     adjusted <= plain + kProbabilitySlack});
      if (!fx.cdf.has_atoms())
        out.push_back({id, "continuous_equality", plain, adjusted, 0.0, adjusted - plain,
                       std::abs(adjusted - plain) <= 1e-10});
    }
  }
  return out;
}

std::vector<Verdict> verify_planner_suite() {
  std::vector<Verdict> out;
  const double grid[] = {0.05, 0.01, 0.005, 0.001};
  auto label = [](double e, double d) {
    return "eps=" + std::to_string(e) + ",delta=" + std::to_string(d);
  };
  for (double eps : grid) {
    for (double delta : grid) {
      const std::string id = label(eps, delta);
      const std::int64_t tol = min_sample_size_tolerance(eps, delta);
      const bool threshold = mu(tol, eps) <= delta && (tol == 2 || mu(tol - 1, eps) > delta);
      out.push_back({id, "tolerance_threshold", delta, mu(tol, eps), 0.0, mu(tol, eps) - delta,
                     threshold});

      std::int64_t scan = 2;
      while (mu(scan, eps) > delta) ++scan;
      out.push_back({id, "tolerance_exhaustive", static_cast<double>(scan),
                     static_cast<double>(tol), 0.0, static_cast<double>(tol - scan), tol == scan});

      const std::int64_t ext = min_sample_size_extreme(eps, delta);
      std::int64_t n = 1;
      const double log_delta = std::log(delta);
      while (static_cast<double>(n) * std::log1p(-eps) > log_delta) ++n;
      out.push_back({id, "extreme_exhaustive", static_cast<double>(n), static_cast<double>(ext),
                     0.0, static_cast<double>(ext - n), ext == n});
    }
  }
  struct Golden {
    double eps;
    std::int64_t expected;
  };
  for (const Golden g : {Golden{0.005, 1483}, Golden{0.001, 9230}}) {
    const std::int64_t got = min_sample_size_tolerance(g.eps, g.eps);
    out.push_back({label(g.eps, g.eps), "published_sample_size", static_cast<double>(g.expected),
                   static_cast<double>(got), 0.0, static_cast<double>(got - g.expected),
                   got == g.expected});
  }
  return out;
}

bool all_pass(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

}  // namespace ordstat
