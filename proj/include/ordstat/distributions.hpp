#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ordstat/rng.hpp"

namespace ordstat {

/// A right-continuous CDF made of affine pieces and atoms.
///
/// Between consecutive breakpoints F is affine (or flat, in a gap between
/// segments); at a breakpoint it may jump by an atom's mass. This form is
/// closed under everything the threshold adjustment needs and can represent
/// quantities that are constant on a set of positive probability.
class PiecewiseCdf {
 public:
  /// F rises affinely from f_lo at x_lo to f_hi as x -> x_hi (exclusive).
  struct Segment {
    double x_lo;
    double x_hi;
    double f_lo;
    double f_hi;
  };

  /// Point mass `mass` at `x`.
  struct Atom {
    double x;
    double mass;
  };

  /// Validates and builds the CDF. Segments must be ordered and disjoint,
  /// atoms positive and distinct, no atom strictly inside a segment, each
  /// segment must start at the running value of F, and the total mass must
  /// be 1 within 1e-12. Throws DomainError otherwise.
  PiecewiseCdf(std::vector<Segment> segments, std::vector<Atom> atoms);

  static PiecewiseCdf uniform(double lo, double hi);
  static PiecewiseCdf point_mass(double x);

  /// F(x).
  double eval(double x) const;
  /// F(x-) = lim_{y -> x, y < x} F(y).
  double left_limit(double x) const;
  /// sup { F(x) : F(x) < t }, with the supremum of the empty set taken as 0.
  double sup_below(double t) const;
  /// inf { x : F(x) >= v } for v in (0, 1].
  double quantile(double v) const;
  /// Inverse-CDF draw.
  double sample(Rng& rng) const { return quantile(rng.uniform_open()); }

  bool has_atoms() const noexcept { return !atoms_.empty(); }
  double support_lo() const noexcept { return knots_.front().x; }
  double support_hi() const noexcept { return knots_.back().x; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

 private:
  struct Knot {
    double x;
    double left;   // F(x-)
    double right;  // F(x)
  };

  std::vector<Segment> segments_;
  std::vector<Atom> atoms_;
  std::vector<Knot> knots_;
};

inline double eval_cdf(const PiecewiseCdf& cdf, double x) { return cdf.eval(x); }
inline double eval_left_limit(const PiecewiseCdf& cdf, double x) { return cdf.left_limit(x); }
inline double sup_below(const PiecewiseCdf& cdf, double t) { return cdf.sup_below(t); }
inline double sample_cdf(const PiecewiseCdf& cdf, Rng& rng) { return cdf.sample(rng); }

/// Marginal law of one parameter coordinate on its interval.
struct Marginal {
  enum class Kind { Uniform, TruncatedGaussian };
  Kind kind = Kind::Uniform;
  double mean = 0.0;
  double sigma = 1.0;

  static Marginal uniform() { return {}; }
  static Marginal truncated_gaussian(double mean, double sigma) {
    return {Kind::TruncatedGaussian, mean, sigma};
  }
};

/// Compact parameter box with independent coordinates.
struct ParameterDomain {
  std::vector<std::pair<double, double>> box;
  std::vector<Marginal> marginals;

  std::size_t dimension() const noexcept { return box.size(); }

  /// Throws DomainError unless intervals are finite with lo <= hi, sigmas
  /// are positive, and every truncated gaussian keeps an acceptance
  /// probability of at least kMinAcceptance.
  void validate() const;

  static ParameterDomain uniform_box(std::vector<std::pair<double, double>> box);
};

inline constexpr double kMinAcceptance = 1e-6;

/// P{lo <= X <= hi} for X ~ N(mean, sigma^2).
double gaussian_interval_probability(double mean, double sigma, double lo, double hi);

/// Draws q from the product density. Truncated gaussians are sampled by
/// rejection from the untruncated law; rejected draws are added to
/// `*rejections` when it is non-null.
std::vector<double> sample_parameter(const ParameterDomain& domain, Rng& rng,
                                     std::uint64_t* rejections = nullptr);

}  // namespace ordstat
