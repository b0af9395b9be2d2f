#include "ordstat/quantities.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "ordstat/error.hpp"

namespace ordstat {
namespace {

using Complex = std::complex<double>;

constexpr double kResidualTolerance = 1e-10;
constexpr int kMaxAberthSweeps = 100;

// p(z), p'(z) and sum |c_i| |z|^(d-i) by Horner's scheme.
struct Horner {
  Complex value;
  Complex derivative;
  double scale;
};

Horner horner(std::span<const double> c, Complex z) {
  Complex p = c[0];
  Complex dp = 0.0;
  double s = std::abs(c[0]);
  const double az = std::abs(z);
  for (std::size_t i = 1; i < c.size(); ++i) {
    dp = dp * z + p;
    p = p * z + c[i];
    s = s * az + std::abs(c[i]);
  }
  return {p, dp, s};
}

double relative_residual(const Horner& h) {
  return h.scale > 0.0 ? std::abs(h.value) / h.scale : std::abs(h.value);
}

std::vector<Complex> companion_eigenvalues(std::span<const double> c) {
  const auto d = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) m(0, j) = -c[static_cast<std::size_t>(j) + 1] / c[0];
  for (Eigen::Index i = 1; i < d; ++i) m(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(d));
  if (solver.info() == Eigen::Success) {
    for (Eigen::Index i = 0; i < d; ++i) out.push_back(solver.eigenvalues()[i]);
    return out;
  }
  // Fall back to points on a circle of the Cauchy radius.
  double radius = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) radius = std::max(radius, std::abs(c[i] / c[0]));
  radius += 1.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double angle = 2.0 * M_PI * (static_cast<double>(i) + 0.25) / static_cast<double>(d);
    out.push_back(std::polar(radius, angle));
  }
  return out;
}

void aberth_polish(std::span<const double> c, std::vector<Complex>& z) {
  const std::size_t d = z.size();
  std::vector<double> residual(d);
  for (std::size_t i = 0; i < d; ++i) residual[i] = relative_residual(horner(c, z[i]));

  for (int sweep = 0; sweep < kMaxAberthSweeps; ++sweep) {
    bool moved = false;
    for (std::size_t i = 0; i < d; ++i) {
      const Horner h = horner(c, z[i]);
      if (h.value == Complex(0.0)) continue;
      const Complex ratio = h.value / h.derivative;
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i && z[i] != z[j]) repulsion += 1.0 / (z[i] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      const Complex candidate = z[i] - step;
      const double r = relative_residual(horner(c, candidate));
      // Accept only improving moves, so clustered roots cannot be thrown off.
      if (r < residual[i]) {
        moved = moved || candidate != z[i];
        z[i] = candidate;
        residual[i] = r;
      }
    }
    const bool converged =
        std::all_of(residual.begin(), residual.end(),
                    [](double r) { return r <= std::numeric_limits<double>::epsilon(); });
    if (!moved || converged) break;
  }
}

}  // namespace

std::vector<Complex> polynomial_roots(std::span<const double> coeffs) {
  if (coeffs.size() < 2) throw DomainError("polynomial must have degree >= 1");
  if (coeffs.size() - 1 > kMaxPolynomialDegree)
    throw DomainError("polynomial degree " + std::to_string(coeffs.size() - 1) +
                      " exceeds the cap of " + std::to_string(kMaxPolynomialDegree));
  if (coeffs.front() == 0.0) throw DomainError("leading coefficient must be nonzero");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw DomainError("polynomial coefficients must be finite");

  // Trailing zero coefficients are exact roots at the origin.
  std::size_t len = coeffs.size();
  std::size_t zero_roots = 0;
  while (len > 1 && coeffs[len - 1] == 0.0) {
    --len;
    ++zero_roots;
  }
  std::vector<Complex> roots(zero_roots, Complex(0.0));
  if (len < 2) return roots;

  const auto reduced = coeffs.first(len);
  std::vector<Complex> z = companion_eigenvalues(reduced);
  aberth_polish(reduced, z);
  for (const Complex& r : z) {
    if (relative_residual(horner(reduced, r)) > kResidualTolerance)
      throw ConsistencyError("root finder failed to reach residual tolerance");
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

double max_re_root(std::span<const double> coeffs) {
  const auto roots = polynomial_roots(coeffs);
  double best = -std::numeric_limits<double>::infinity();
  for (const Complex& r : roots) best = std::max(best, r.real());
  return best;
}

std::optional<double> peak_gain(std::span<const double> num, std::span<const double> den,
                                double w_min, double w_max, std::size_t points) {
  if (num.empty() || den.empty()) throw DomainError("peak_gain: empty coefficient list");
  if (std::all_of(den.begin(), den.end(), [](double c) { return c == 0.0; }))
    throw DomainError("peak_gain: denominator is identically zero");
  if (!(w_min > 0.0) || !std::isfinite(w_max) || !(w_max >= w_min))
    throw DomainError("peak_gain: need 0 < w_min <= w_max");
  if (points < 2) throw DomainError("peak_gain: need at least 2 grid points");

  auto eval = [](std::span<const double> c, Complex s) {
    Complex p = 0.0;
    for (double ci : c) p = p * s + ci;
    return p;
  };
  const double log_lo = std::log(w_min);
  const double log_span = std::log(w_max) - log_lo;
  double best = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    double w;
    if (k == 0) w = w_min;
    else if (k + 1 == points) w = w_max;
    else w = std::exp(log_lo + log_span * static_cast<double>(k) / static_cast<double>(points - 1));
    const Complex s(0.0, w);
    const double d = std::abs(eval(den, s));
    if (!(d >= 1e-300)) return std::nullopt;
    const double g = std::abs(eval(num, s)) / d;
    if (!std::isfinite(g)) return std::nullopt;
    best = std::max(best, g);
  }
  return best;
}

}  // namespace ordstat
