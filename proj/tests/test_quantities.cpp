#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "ordstat/error.hpp"
#include "ordstat/quantities.hpp"

using namespace ordstat;
using cd = std::complex<double>;

namespace ot = ordstat::testing;

TEST_CASE("polynomial roots of simple factored polynomials") {
  const std::vector<double> c = {1, -6, 11, -6};  // (s-1)(s-2)(s-3)
  auto roots = polynomial_roots(c);
  REQUIRE(roots.size() == 3);
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) { return a.real() < b.real(); });
  for (int i = 0; i < 3; ++i) {
    CHECK(roots[i].real() == doctest::Approx(i + 1.0).epsilon(1e-12));
    CHECK(std::abs(roots[i].imag()) <= 1e-12);
  }
  CHECK(max_re_root(std::vector<double>{1, 0, 1}) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(max_re_root(std::vector<double>{2, 4}) == -2.0);
}

TEST_CASE("max_re_root recovers constructed roots") {
  std::mt19937_64 gen(123456789);
  for (int trial = 0; trial < 200; ++trial) {
    const auto roots = ot::random_conjugate_roots(gen);
    const auto coeffs = ot::expand_roots(roots, 1.0 + trial % 5);
    CAPTURE(trial);
    CHECK(std::abs(max_re_root(coeffs) - ot::max_real_part(roots)) <= 1e-8);
  }
}

TEST_CASE("max_re_root is invariant under coefficient scaling") {
  const std::vector<double> c = {1, 2.5, 3.25, 1.5, 0.4};
  const double base = max_re_root(c);
  for (double k : {1e-6, 0.3, -2.0, 1e5}) {
    std::vector<double> scaled;
    for (double x : c) scaled.push_back(k * x);
    CHECK(max_re_root(scaled) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("trailing zero coefficients are roots at the origin") {
  const std::vector<double> c = {1, 3, 2, 0, 0};
  const auto roots = polynomial_roots(c);
  REQUIRE(roots.size() == 4);
  int zeros = 0;
  for (const cd& r : roots) zeros += std::abs(r) == 0.0 ? 1 : 0;
  CHECK(zeros == 2);
  CHECK(max_re_root(c) == 0.0);
}

TEST_CASE("polynomial input validation") {
  CHECK_THROWS_AS(polynomial_roots(std::vector<double>{1}), DomainError);
  CHECK_THROWS_AS(polynomial_roots(std::vector<double>{0, 1, 2}), DomainError);
  CHECK_THROWS_AS(polynomial_roots(std::vector<double>{1, NAN}), DomainError);
  std::vector<double> too_long(kMaxPolynomialDegree + 2, 1.0);
  CHECK_THROWS_AS(polynomial_roots(too_long), DomainError);
  std::vector<double> longest(kMaxPolynomialDegree + 1, 1.0);
  CHECK(polynomial_roots(longest).size() == kMaxPolynomialDegree);
}

TEST_CASE("peak_gain of a second-order low-pass resonance") {
  for (double zeta : {0.05, 0.1, 0.2, 0.4}) {
    const std::vector<double> num = {1};
    const std::vector<double> den = {1, 2 * zeta, 1};
    const double exact = 1.0 / (2.0 * zeta * std::sqrt(1.0 - zeta * zeta));
    const auto g = peak_gain(num, den, 0.1, 10.0, 2000);
    REQUIRE(g.has_value());
    CAPTURE(zeta);
    CHECK(*g <= exact * (1.0 + 1e-12));
    CHECK(*g >= 0.99 * exact);
  }
}

TEST_CASE("peak_gain of a band-pass resonance") {
  // s / (s^2 + 2 zeta s + 1) peaks at w = 1 with gain 1 / (2 zeta).
  const double zeta = 0.1;
  const std::vector<double> num = {1, 0};
  const std::vector<double> den = {1, 2 * zeta, 1};
  const auto g = peak_gain(num, den, 0.1, 10.0, 2001);
  REQUIRE(g.has_value());
  // The odd-length symmetric log grid contains w = 1 up to rounding.
  CHECK(*g == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("peak_gain includes both endpoints and handles poles") {
  const std::vector<double> num = {1};
  const std::vector<double> first = {1, 1};
  CHECK(*peak_gain(num, first, 2.0, 3.0, 2) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
  const std::vector<double> rising = {1, 0};
  CHECK(*peak_gain(rising, first, 2.0, 3.0, 2) ==
        doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-14));
  // s^2 + 1 vanishes at w = 1.
  const std::vector<double> undamped = {1, 0, 1};
  CHECK_FALSE(peak_gain(num, undamped, 1.0, 2.0, 5).has_value());
  CHECK_THROWS_AS(peak_gain(num, first, 0.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(peak_gain(num, first, 2.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(peak_gain(num, first, 1.0, 2.0, 1), DomainError);
  CHECK_THROWS_AS(peak_gain(num, std::vector<double>{0, 0}, 1.0, 2.0, 10), DomainError);
}

TEST_CASE("peak_gain of constant and first-order responses") {
  const std::vector<double> two = {2};
  const std::vector<double> one = {1};
  CHECK(*peak_gain(two, one, 0.5, 50.0, 7) == 2.0);
  const std::vector<double> first = {1, 1};
  CHECK(*peak_gain(one, first, 1e-2, 1e2, 400) ==
        doctest::Approx(1.0 / std::sqrt(1.0 + 1e-4)).epsilon(1e-14));
}
