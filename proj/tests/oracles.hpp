#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's special functions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ordstat::testing {

/// Non-negative big integer in base 1e9, least significant limb first.
class BigUnsigned {
 public:
  explicit BigUnsigned(std::uint32_t v = 1) : limbs_{v} {}

  void multiply(std::uint32_t f) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      const std::uint64_t cur = std::uint64_t{limb} * f + carry;
      limb = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    while (carry > 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
  }

  /// Exact division; the caller guarantees divisibility.
  void divide(std::uint32_t d) {
    std::uint64_t rem = 0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
      const std::uint64_t cur = *it + rem * kBase;
      *it = static_cast<std::uint32_t>(cur / d);
      rem = cur % d;
    }
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  double log() const {
    const std::size_t n = limbs_.size();
    double lead = 0.0;
    const std::size_t top = std::min<std::size_t>(n, 3);
    for (std::size_t i = 0; i < top; ++i) lead = lead * kBase + limbs_[n - 1 - i];
    return std::log(lead) + static_cast<double>(n - top) * std::log(static_cast<double>(kBase));
  }

 private:
  static constexpr std::uint64_t kBase = 1'000'000'000;
  std::vector<std::uint32_t> limbs_;
};

/// ln C(n,k) from the exact integer C(n,k) = prod (n-i)/(i+1).
inline double exact_log_binomial(std::uint32_t n, std::uint32_t k) {
  BigUnsigned c(1);
  for (std::uint32_t i = 0; i < k; ++i) {
    c.multiply(n - i);
    c.divide(i + 1);
  }
  return c.log();
}

/// C(n,k) as a double by the multiplicative formula (small n only).
inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

/// P{Bin(N, p) >= n} by direct summation.
inline double binomial_upper_tail(int n, int sample_size, double p) {
  double s = 0.0;
  for (int j = n; j <= sample_size; ++j)
    s += binomial(sample_size, j) * std::pow(p, j) * std::pow(1.0 - p, sample_size - j);
  return s;
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 30) {
  auto simpson = [&](double l, double r, double fl, double fm, double fr) {
    return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
  };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, double eps,
          int d) -> double {
    const double m = 0.5 * (l + r);
    const double lm = 0.5 * (l + m);
    const double rm = 0.5 * (m + r);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(l, m, fl, flm, fm);
    const double right = simpson(m, r, fm, frm, fr);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return rec(l, m, fl, flm, fm, left, eps / 2.0, d - 1) +
           rec(m, r, fm, frm, fr, right, eps / 2.0, d - 1);
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

/// Density of the n-th of N uniform order statistics.
inline std::function<double(double)> order_stat_density(int n, int sample_size) {
  const double coef = sample_size * binomial(sample_size - 1, n - 1);
  return [=](double x) {
    return coef * std::pow(x, n - 1) * std::pow(1.0 - x, sample_size - n);
  };
}

/// One-sample Kolmogorov-Smirnov statistic of `sorted` against uniform(0,1).
inline double uniform_ks_statistic(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double di = static_cast<double>(i);
    d = std::max({d, (di + 1.0) / n - values[i], values[i] - di / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the KS statistic for n samples.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

/// Real coefficients (highest degree first) of lead * prod (s - r).
inline std::vector<double> expand_roots(const std::vector<std::complex<double>>& roots,
                                        double lead = 1.0) {
  std::vector<std::complex<double>> c = {lead};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= c[i] * r;
    }
    c = std::move(next);
  }
  std::vector<double> out;
  for (const auto& x : c) out.push_back(x.real());
  return out;
}

/// Random root set closed under conjugation with degree in [1, max_degree]:
/// real parts in [-3, 1], imaginary parts of complex pairs in [0.2, 3].
inline std::vector<std::complex<double>> random_conjugate_roots(std::mt19937_64& gen,
                                                                int max_degree = 8) {
  std::uniform_int_distribution<int> degree(1, max_degree);
  std::uniform_real_distribution<double> re(-3.0, 1.0);
  std::uniform_real_distribution<double> im(0.2, 3.0);
  std::bernoulli_distribution pair(0.5);
  const int d = degree(gen);
  std::vector<std::complex<double>> roots;
  while (static_cast<int>(roots.size()) < d) {
    if (static_cast<int>(roots.size()) + 2 <= d && pair(gen)) {
      const std::complex<double> z(re(gen), im(gen));
      roots.push_back(z);
      roots.push_back(std::conj(z));
    } else {
      roots.push_back(re(gen));
    }
  }
  return roots;
}

inline double max_real_part(const std::vector<std::complex<double>>& roots) {
  double m = -INFINITY;
  for (const auto& r : roots) m = std::max(m, r.real());
  return m;
}

/// P{F(U_(i1)) < t1, F(U_(i2)) < t2} for uniform draws, by direct simulation
/// with the standard library generator. Returns the hit count.
inline std::uint64_t simulate_uniform_pair(int sample_size, int i1, int i2, double t1, double t2,
                                           std::uint64_t trials, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(sample_size));
  std::uint64_t hits = 0;
  for (std::uint64_t r = 0; r < trials; ++r) {
    for (double& v : x) v = u(gen);
    std::sort(x.begin(), x.end());
    hits += (x[i1 - 1] < t1 && x[i2 - 1] < t2) ? 1 : 0;
  }
  return hits;
}

}  // namespace ordstat::testing
