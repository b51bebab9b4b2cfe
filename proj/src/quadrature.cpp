#include "bloch/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/roots.hpp>

#include "bloch/errors.hpp"
#include "bloch/parallel.hpp"

namespace bloch {

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

GaussRule make_gauss_legendre(int n) {
  const auto positive = boost::math::legendre_p_zeros<double>(n);
  GaussRule rule;
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(-*it);
    rule.weights.push_back(weight(*it));
  }
  for (double x : positive) {
    rule.nodes.push_back(x);
    rule.weights.push_back(weight(x));
  }
  return rule;
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (radial_nodes < 8 || polar_nodes < 8 || azimuthal_nodes < 8) {
    throw DomainError("quadrature node counts must be at least 8");
  }
  if (!(tolerance > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (boundary_grading < 1) throw DomainError("boundary grading exponent must be >= 1");
}

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec s = *this;
  s.radial_nodes *= 2;
  s.polar_nodes *= 2;
  s.azimuthal_nodes *= 2;
  return s;
}

BallPoint BallPoint::at(double r, double theta, double phi) { return at(RadialPoint::at(r), theta, phi); }

BallPoint BallPoint::at(RadialPoint radial, double theta, double phi) {
  BallPoint p;
  p.r = radial.r;
  p.one_minus_r = radial.one_minus_r;
  p.theta = theta;
  p.phi = phi;
  p.sin_theta = std::sin(theta);
  p.x = {p.r * std::cos(theta), p.r * p.sin_theta * std::cos(phi), p.r * p.sin_theta * std::sin(phi)};
  return p;
}

BallGrid::BallGrid(const QuadratureSpec& spec) {
  spec.validate();
  const auto& gr = gauss_legendre(spec.radial_nodes);
  radial_.reserve(gr.nodes.size());
  for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
    const double s = 0.5 * (gr.nodes[i] + 1.0);
    const double ws = 0.5 * gr.weights[i];
    if (spec.sine_substitution) {
      // delta = pi/2 - psi, measured from the boundary.
      const double q = spec.boundary_grading;
      const double tail = 1.0 - s;
      const double delta = 0.5 * kPi * std::pow(tail, q);
      const double dpsi_ds = 0.5 * kPi * q * std::pow(tail, q - 1.0);
      const double half = std::sin(0.5 * delta);
      radial_.push_back({std::cos(delta), 2.0 * half * half, std::sin(delta) * dpsi_ds * ws});
    } else {
      radial_.push_back({s, 1.0 - s, ws});
    }
  }

  const auto& gp = gauss_legendre(spec.polar_nodes);
  polar_.reserve(gp.nodes.size());
  for (std::size_t i = 0; i < gp.nodes.size(); ++i) {
    polar_.push_back({0.5 * kPi * (gp.nodes[i] + 1.0), 0.5 * kPi * gp.weights[i]});
  }

  const int na = spec.azimuthal_nodes;
  azimuthal_.reserve(static_cast<std::size_t>(na));
  for (int j = 0; j < na; ++j) {
    azimuthal_.push_back({2.0 * kPi * (j + 0.5) / na, 2.0 * kPi / na});
  }
}

double BallGrid::integrate_sphere(const PointFunction& f, RadialPoint radius) const {
  CompensatedSum sum;
  for (const auto& t : polar_) {
    for (const auto& a : azimuthal_) {
      sum.add(t.weight * a.weight * f(BallPoint::at(radius, t.angle, a.angle)));
    }
  }
  return sum.value();
}

double BallGrid::integrate(const PointFunction& f, unsigned workers) const {
  std::vector<double> shells(radial_.size());
  parallel_for(
      radial_.size(),
      [&](std::size_t i) {
        shells[i] = integrate_sphere(f, {radial_[i].r, radial_[i].one_minus_r});
      },
      workers);
  CompensatedSum total;
  for (std::size_t i = 0; i < shells.size(); ++i) total.add(radial_[i].weight * shells[i]);
  return total.value();
}

double integrate_ball(const PointFunction& f, const QuadratureSpec& spec) {
  QuadratureSpec current = spec;
  double previous = BallGrid(current).integrate(f);
  for (int doubling = 0; doubling < 2; ++doubling) {
    current = current.doubled();
    const double refined = BallGrid(current).integrate(f);
    if (std::isfinite(refined) && std::abs(refined - previous) <= spec.tolerance) return refined;
    if (doubling == 1) {
      throw AccuracyError("ball quadrature did not converge under node doubling: " + std::to_string(previous) +
                              " vs " + std::to_string(refined),
                          previous, refined);
    }
    previous = refined;
  }
  return previous;
}

double integrate_ball_isotropic(const PointFunction& f, const QuadratureSpec& spec) {
  const auto radial_only = [&f](const QuadratureSpec& s) {
    const BallGrid grid(s);
    CompensatedSum sum;
    for (const auto& n : grid.radial()) {
      sum.add(n.weight * f(BallPoint::at(RadialPoint{n.r, n.one_minus_r}, 0.5 * kPi, 0.0)));
    }
    return 4.0 * kPi * sum.value();
  };
  QuadratureSpec current = spec;
  double previous = radial_only(current);
  for (int doubling = 0; doubling < 2; ++doubling) {
    current.radial_nodes *= 2;
    const double refined = radial_only(current);
    if (std::isfinite(refined) && std::abs(refined - previous) <= spec.tolerance) return refined;
    if (doubling == 1) {
      throw AccuracyError("radial quadrature did not converge under node doubling: " + std::to_string(previous) +
                              " vs " + std::to_string(refined),
                          previous, refined);
    }
    previous = refined;
  }
  return previous;
}

BallDensity::BallDensity(std::string label, PointFunction log_unnormalized, double log_normalizer, bool isotropic)
    : label_(std::move(label)),
      log_unnormalized_(std::move(log_unnormalized)),
      log_normalizer_(log_normalizer),
      isotropic_(isotropic) {}

double BallDensity::value(const BallPoint& p) const { return std::exp(log_value(p)); }

BallDensity normalize(std::string label, PointFunction log_unnormalized, const QuadratureSpec& spec,
                      bool isotropic) {
  const auto& lf = log_unnormalized;
  const PointFunction mass_density = [&lf](const BallPoint& p) { return std::exp(lf(p)); };
  const double mass =
      isotropic ? integrate_ball_isotropic(mass_density, spec) : integrate_ball(mass_density, spec);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("density '" + label + "' has zero or non-finite mass");
  }
  return BallDensity(std::move(label), std::move(log_unnormalized), -std::log(mass), isotropic);
}

double relative_entropy(const BallDensity& p, const BallDensity& q, const QuadratureSpec& spec) {
  const PointFunction integrand = [&](const BallPoint& x) {
    const double lp = p.log_value(x);
    if (lp == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::exp(lp) * (lp - q.log_value(x));
  };
  if (p.isotropic() && q.isotropic()) return integrate_ball_isotropic(integrand, spec);
  return integrate_ball(integrand, spec);
}

double marginal_value(const BallDensity& p, double r, const QuadratureSpec& spec) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("marginal evaluated outside (0, 1)");
  return BallGrid(spec).integrate_sphere([&p](const BallPoint& x) { return p.value(x); }, RadialPoint::at(r));
}

std::vector<MarginalSample> radial_marginal(const BallDensity& p, std::span<const double> r_grid,
                                            const QuadratureSpec& spec) {
  const BallGrid grid(spec);
  std::vector<MarginalSample> out(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    double m = 0.0;
    if (r > 0.0 && r < 1.0) {
      m = grid.integrate_sphere([&p](const BallPoint& x) { return p.value(x); }, RadialPoint::at(r));
    }
    out[i] = {r, m};
  });
  return out;
}

std::vector<double> marginal_critical_points(const BallDensity& p, double r_lo, double r_hi,
                                             std::size_t brackets, const QuadratureSpec& spec) {
  if (!(r_lo > 0.0 && r_hi < 1.0 && r_lo < r_hi)) throw DomainError("critical-point search needs 0 < lo < hi < 1");
  if (brackets == 0) brackets = 1;
  const BallGrid grid(spec);
  const auto marginal = [&](double r) {
    return grid.integrate_sphere([&p](const BallPoint& x) { return p.value(x); }, RadialPoint::at(r));
  };
  const double h = 1e-5;
  const auto slope = [&](double r) { return (marginal(r + h) - marginal(r - h)) / (2.0 * h); };

  std::vector<double> roots;
  const double width = (r_hi - r_lo) / static_cast<double>(brackets);
  double a = r_lo;
  double fa = slope(a);
  for (std::size_t k = 1; k <= brackets; ++k) {
    const double b = k == brackets ? r_hi : r_lo + width * static_cast<double>(k);
    const double fb = slope(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if (fa * fb < 0.0) {
      std::uintmax_t iterations = 100;
      const auto [lo, hi] = boost::math::tools::toms748_solve(
          slope, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(40), iterations);
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

double redundancy_constant(int d, double fisher_volume) {
  if (d < 1) throw DomainError("redundancy needs d >= 1");
  if (!(fisher_volume > 0.0)) throw DomainError("redundancy needs a positive Fisher volume");
  return -0.5 * d * std::log(2.0 * kPi * std::numbers::e) + std::log(fisher_volume);
}

}  // namespace bloch
