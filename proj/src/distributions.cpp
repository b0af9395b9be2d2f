#include "ordstat/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ordstat/error.hpp"

namespace ordstat {
namespace {

constexpr double kMassSlack = 1e-12;

}  // namespace

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

PiecewiseCdf::PiecewiseCdf(std::vector<Segment> segments, std::vector<Atom> atoms)
    : segments_(std::move(segments)), atoms_(std::move(atoms)) {
  std::sort(segments_.begin(), segments_.end(),
            [](const Segment& l, const Segment& r) { return l.x_lo < r.x_lo; });
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& l, const Atom& r) { return l.x < r.x; });
  if (segments_.empty() && atoms_.empty()) throw DomainError("cdf: no segments or atoms");

  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!std::isfinite(s.x_lo) || !std::isfinite(s.x_hi) || !(s.x_lo < s.x_hi))
      throw DomainError("cdf: segment " + std::to_string(i) + " needs finite x_lo < x_hi");
    if (!(s.f_lo >= 0.0 && s.f_lo <= s.f_hi && s.f_hi <= 1.0 + kMassSlack))
      throw DomainError("cdf: segment " + std::to_string(i) + " needs 0 <= f_lo <= f_hi <= 1");
    if (i > 0 && segments_[i - 1].x_hi > s.x_lo)
      throw DomainError("cdf: segments overlap at x=" + std::to_string(s.x_lo));
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!std::isfinite(a.x) || !(a.mass > 0.0) || a.mass > 1.0 + kMassSlack)
      throw DomainError("cdf: atom " + std::to_string(i) + " needs finite x and mass in (0,1]");
    if (i > 0 && atoms_[i - 1].x == a.x)
      throw DomainError("cdf: duplicate atom at x=" + std::to_string(a.x));
    for (const auto& s : segments_)
      if (a.x > s.x_lo && a.x < s.x_hi)
        throw DomainError("cdf: atom at x=" + std::to_string(a.x) + " lies inside a segment");
  }

  std::vector<double> xs;
  for (const auto& s : segments_) {
    xs.push_back(s.x_lo);
    xs.push_back(s.x_hi);
  }
  for (const auto& a : atoms_) xs.push_back(a.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double running = 0.0;
  std::size_t seg = 0;
  std::size_t atom = 0;
  for (double x : xs) {
    Knot k{x, running, running};
    if (seg > 0 && segments_[seg - 1].x_hi == x) k.left = segments_[seg - 1].f_hi;
    k.right = k.left;
    if (atom < atoms_.size() && atoms_[atom].x == x) k.right += atoms_[atom++].mass;
    if (seg < segments_.size() && segments_[seg].x_lo == x) {
      if (std::abs(segments_[seg].f_lo - k.right) > kMassSlack)
        throw DomainError("cdf: segment starting at x=" + std::to_string(x) +
                          " has f_lo=" + std::to_string(segments_[seg].f_lo) +
                          " but F(x)=" + std::to_string(k.right));
      ++seg;
    }
    if (k.right > 1.0 + kMassSlack) throw DomainError("cdf: total mass exceeds 1");
    running = k.right;
    knots_.push_back(k);
  }
  // A segment still open at the last knot cannot happen: its x_hi is a knot.
  if (std::abs(running - 1.0) > kMassSlack)
    throw DomainError("cdf: total mass is " + std::to_string(running) + ", expected 1");
  knots_.back().right = 1.0;
}

PiecewiseCdf PiecewiseCdf::uniform(double lo, double hi) {
  return PiecewiseCdf({{lo, hi, 0.0, 1.0}}, {});
}

PiecewiseCdf PiecewiseCdf::point_mass(double x) { return PiecewiseCdf({}, {{x, 1.0}}); }

double PiecewiseCdf::eval(double x) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                   [](double v, const Knot& k) { return v < k.x; });
  if (it == knots_.begin()) return 0.0;
  const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const Knot& k = knots_[i];
  if (x == k.x || i + 1 == knots_.size()) return k.right;
  const Knot& n = knots_[i + 1];
  return k.right + (n.left - k.right) * (x - k.x) / (n.x - k.x);
}

double PiecewiseCdf::left_limit(double x) const {
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                                   [](const Knot& k, double v) { return k.x < v; });
  if (it == knots_.begin()) return 0.0;
  const auto i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const Knot& k = knots_[i];
  if (i + 1 == knots_.size()) return k.right;
  const Knot& n = knots_[i + 1];
  if (x == n.x) return n.left;
  return k.right + (n.left - k.right) * (x - k.x) / (n.x - k.x);
}

double PiecewiseCdf::sup_below(double t) const {
  if (!(t > 0.0)) return 0.0;
  double best = 0.0;  // attained below the support
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const Knot& k = knots_[i];
    if (k.right < t) best = std::max(best, k.right);
    // F sweeps [right_i, left_{i+1}) on the open piece after knot i.
    if (i + 1 < knots_.size()) {
      const double top = knots_[i + 1].left;
      if (k.right < top && k.right < t) best = std::max(best, std::min(t, top));
    }
  }
  return best;
}

double PiecewiseCdf::quantile(double v) const {
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("quantile: level must lie in (0,1]");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const Knot& k = knots_[i];
    if (i > 0 && v <= k.left) {
      const Knot& p = knots_[i - 1];
      if (k.left > p.right) {
        const double x = p.x + (v - p.right) / (k.left - p.right) * (k.x - p.x);
        return std::clamp(x, p.x, k.x);
      }
    }
    if (v <= k.right) return k.x;
  }
  return knots_.back().x;
}

double gaussian_interval_probability(double mean, double sigma, double lo, double hi) {
  const double zl = (lo - mean) / (sigma * std::numbers::sqrt2);
  const double zh = (hi - mean) / (sigma * std::numbers::sqrt2);
  // Use the tail on the side that avoids cancellation.
  if (zl >= 0.0) return 0.5 * (std::erfc(zl) - std::erfc(zh));
  if (zh <= 0.0) return 0.5 * (std::erfc(-zh) - std::erfc(-zl));
  return 1.0 - 0.5 * (std::erfc(-zl) + std::erfc(zh));
}

void ParameterDomain::validate() const {
  if (box.empty()) throw DomainError("domain: dimension must be positive");
  if (marginals.size() != box.size())
    throw DomainError("domain: one marginal per coordinate is required");
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto [lo, hi] = box[i];
    const std::string where = "domain: coordinate " + std::to_string(i);
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
      throw DomainError(where + " needs a finite interval with lo <= hi");
    const Marginal& m = marginals[i];
    if (m.kind != Marginal::Kind::TruncatedGaussian || lo == hi) continue;
    if (!(m.sigma > 0.0) || !std::isfinite(m.sigma) || !std::isfinite(m.mean))
      throw DomainError(where + " needs a finite mean and sigma > 0");
    const double p = gaussian_interval_probability(m.mean, m.sigma, lo, hi);
    if (!(p >= kMinAcceptance))
      throw DomainError(where + ": truncated gaussian acceptance probability " +
                        std::to_string(p) + " is below 1e-6");
  }
}

ParameterDomain ParameterDomain::uniform_box(std::vector<std::pair<double, double>> box) {
  ParameterDomain d;
  d.marginals.assign(box.size(), Marginal::uniform());
  d.box = std::move(box);
  return d;
}

std::vector<double> sample_parameter(const ParameterDomain& domain, Rng& rng,
                                     std::uint64_t* rejections) {
  domain.validate();
  std::vector<double> q(domain.dimension());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto [lo, hi] = domain.box[i];
    const Marginal& m = domain.marginals[i];
    if (lo == hi) {
      q[i] = lo;
    } else if (m.kind == Marginal::Kind::Uniform) {
      q[i] = lo + (hi - lo) * rng.uniform();
    } else {
      for (;;) {
        const double x = m.mean + m.sigma * rng.normal();
        if (x >= lo && x <= hi) {
          q[i] = x;
          break;
        }
        if (rejections != nullptr) ++*rejections;
      }
    }
  }
  return q;
}

}  // namespace ordstat
