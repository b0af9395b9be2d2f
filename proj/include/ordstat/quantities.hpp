#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ordstat {

inline constexpr std::size_t kMaxPolynomialDegree = 64;

/// Roots of c_0 s^d + c_1 s^(d-1) + ... + c_d (coefficients highest degree
/// first). Eigenvalues of the companion matrix seed an Aberth-Ehrlich
/// simultaneous iteration that polishes every root until its relative
/// residual |p(z)| / sum |c_i||z|^(d-i) falls below 1e-10 (or stops
/// improving). Throws DomainError on a zero leading coefficient, degree 0,
/// or degree above kMaxPolynomialDegree.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Largest real part among the roots: the stability margin of a system with
/// this characteristic polynomial (negative means stable).
double max_re_root(std::span<const double> coeffs);

/// max over a logarithmic grid of |num(i w)| / |den(i w)| for w in
/// [w_min, w_max], endpoints included. A lower bound on the H-infinity norm
/// of num/den that tightens as `points` grows. Returns std::nullopt when the
/// denominator magnitude drops below 1e-300 at a grid point. Throws
/// DomainError if w_min <= 0, w_max < w_min, points < 2, or den is
/// identically zero.
std::optional<double> peak_gain(std::span<const double> num, std::span<const double> den,
                                double w_min, double w_max, std::size_t points);

}  // namespace ordstat
