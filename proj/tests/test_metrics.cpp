#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "bloch/errors.hpp"
#include "bloch/metrics.hpp"

using namespace bloch;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

QubitState random_interior(std::mt19937_64& rng, double r_max = 0.999) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = r_max * std::cbrt(u(rng));
  return QubitState::from_spherical(r, std::acos(1.0 - 2.0 * u(rng)), 2.0 * kPi * u(rng));
}

double bh_radial(double r) {
  const double csch = 1.0 / std::sinh(r / 2);
  return (4.0 - r * r * csch * csch) / (4.0 * r * r);
}

double bh_normal(double r) { return (r / std::tanh(r / 2) - 2.0) / (2.0 * r * r); }

}  // namespace

TEST_CASE("BH coefficients follow the closed form") {
  const auto bh = MetricModel::brody_hughston();
  for (double r : {0.01, 0.1, 0.3, 0.5, 0.646675, 0.9, 0.999}) {
    const auto c = bh.coefficients(r);
    CHECK(c.radial == doctest::Approx(bh_radial(r)).epsilon(1e-9));
    CHECK(c.normal == doctest::Approx(bh_normal(r)).epsilon(1e-9));
  }
  const auto c = bh.coefficients(0.646675);
  CHECK(c.radial == doctest::Approx(0.0816194).epsilon(1e-6));
  CHECK(c.normal == doctest::Approx(0.0827582).epsilon(1e-6));
}

TEST_CASE("BH at the origin and across the series switch") {
  const auto bh = MetricModel::brody_hughston();
  const auto origin = bh.coefficients(0.0);
  CHECK(origin.radial == doctest::Approx(1.0 / 12));
  CHECK(origin.normal == doctest::Approx(1.0 / 12));
  const auto below = bh.coefficients(kSeriesRadius * (1.0 - 1e-9));
  const auto above = bh.coefficients(kSeriesRadius * (1.0 + 1e-9));
  // The closed forms keep about 8 digits at the switch.
  CHECK(std::abs(below.radial - above.radial) < 1e-7);
  CHECK(std::abs(below.normal - above.normal) < 1e-7);
}

TEST_CASE("monotone coefficients") {
  const auto bures = MetricModel::monotone(MonotoneFamily::kBures);
  const auto c = bures.coefficients(0.5);
  CHECK(c.radial == doctest::Approx(4.0 / 3));
  CHECK(c.normal == doctest::Approx(1.0));
  const auto maximal = MetricModel::monotone(MonotoneFamily::kMaximal).coefficients(0.5);
  CHECK(maximal.radial == doctest::Approx(4.0 / 3));
  CHECK(maximal.normal == doctest::Approx(4.0 / 3));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 0.999);
  for (auto family : {MonotoneFamily::kBures, MonotoneFamily::kMaximal, MonotoneFamily::kIdentric,
                      MonotoneFamily::kMorozovaChentsov, MonotoneFamily::kImputedBH}) {
    const auto m = MetricModel::monotone(family);
    for (int i = 0; i < 200; ++i) {
      const double r = u(rng);
      const double t = (1.0 - r) / (1.0 + r);
      const auto k = m.coefficients(r);
      REQUIRE(k.radial == doctest::Approx(1.0 / (1.0 - r * r)).epsilon(1e-12));
      REQUIRE(k.normal == doctest::Approx(1.0 / ((1.0 + r) * monotone_f(family, t))).epsilon(1e-9));
    }
    CHECK(monotone_f(family, 1.0) == doctest::Approx(1.0));
  }
  CHECK(monotone_f(MonotoneFamily::kIdentric, 0.0) == doctest::Approx(1.0 / kE));
}

TEST_CASE("Fisher-adjusted imputed family reproduces the BH normal") {
  const auto imputed = MetricModel::monotone(MonotoneFamily::kImputedBH);
  const auto bh = MetricModel::brody_hughston();
  for (double r : {0.05, 0.3, 0.6, 0.9}) {
    CHECK(imputed.coefficients(r).normal == doctest::Approx(12.0 * bh.coefficients(r).normal).epsilon(1e-10));
  }
}

TEST_CASE("identric and MC volume elements match their closed forms") {
  const auto gks = MetricModel::monotone(MonotoneFamily::kIdentric);
  const auto mc = MetricModel::monotone(MonotoneFamily::kMorozovaChentsov);
  for (double r : {0.1, 0.4, 0.7, 0.95}) {
    const double gks_closed = kE * std::pow(1.0 - r, 1.0 / (2 * r) - 1.0) * std::pow(1.0 + r, -1.0 / (2 * r) - 1.0) * r * r;
    CHECK(std::exp(gks.log_radial_volume(RadialPoint::at(r))) == doctest::Approx(gks_closed).epsilon(1e-11));
    const double l = std::log((1.0 - r) / (1.0 + r));
    const double mc_closed = l * l / (4.0 * std::sqrt(1.0 - r * r));
    CHECK(std::exp(mc.log_radial_volume(RadialPoint::at(r))) == doctest::Approx(mc_closed).epsilon(1e-11));
  }
}

TEST_CASE("Bach-Guiasu and modified BH relations") {
  const auto bg = MetricModel::bach_guiasu();
  const auto maximal = MetricModel::monotone(MonotoneFamily::kMaximal);
  const auto mbh = MetricModel::modified_brody_hughston();
  const auto bh = MetricModel::brody_hughston();
  for (double r : {0.0, 0.2, 0.5, 0.8, 0.99}) {
    CHECK(bg.coefficients(r).normal == doctest::Approx(2.0 * maximal.coefficients(r).normal).epsilon(1e-14));
    CHECK(bg.coefficients(r).radial == doctest::Approx(2.0 * (1 + r * r) / ((1 - r * r) * (1 - r * r))));
    CHECK(12.0 * mbh.coefficients(r).radial * (1.0 - r * r) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mbh.coefficients(r).normal == bh.coefficients(r).normal);
  }
}

TEST_CASE("coefficients reject points off the open ball") {
  const auto bh = MetricModel::brody_hughston();
  CHECK_THROWS_AS(bh.coefficients(1.0), DomainError);
  CHECK_THROWS_AS(bh.coefficients(-0.1), DomainError);
}

TEST_CASE("metric ids parse and round trip") {
  for (const auto& m : registered_metrics()) CHECK(MetricModel::parse(m.id()) == m);
  CHECK(MetricModel::parse("MONOTONE:MOROZOVA_CHENTSOV") == MetricModel::monotone(MonotoneFamily::kMorozovaChentsov));
  CHECK(MetricModel::parse("~BH") == MetricModel::modified_brody_hughston());
  CHECK_THROWS_AS(MetricModel::parse("MONOTONE:HARMONIC"), UnknownIdError);
  CHECK_THROWS_AS(MetricModel::parse("bh2"), UnknownIdError);
}

TEST_CASE("generating function") {
  CHECK(generating_function(QubitState{}) == doctest::Approx(8.0 * kPi * kPi * kPi / std::sqrt(kE)).epsilon(1e-14));
  CHECK(generating_function(QubitState{}) == doctest::Approx(150.450060).epsilon(1e-8));
  const double at_one = 16.0 * kPi * kPi * kPi * std::sinh(0.5) / std::sqrt(kE);
  CHECK(generating_function(QubitState::from_cartesian(1.0, 0.0, 0.0)) == doctest::Approx(at_one).epsilon(1e-14));
  CHECK(at_one == doctest::Approx(156.7976).epsilon(1e-6));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double r = u(rng);
    const auto s = QubitState::from_spherical(r, 1.0, 2.0);
    CHECK(generating_function(s) == doctest::Approx(generating_function((1 + r) / 2, (1 - r) / 2)).epsilon(1e-12));
  }
}

TEST_CASE("Hessian of ln Z") {
  const auto bh = MetricModel::brody_hughston();
  const Eigen::Matrix3d h0 = fisher_from_generating(QubitState{});
  CHECK((h0 - Eigen::Matrix3d::Identity() / 12.0).cwiseAbs().maxCoeff() < 1e-6);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_interior(rng, 0.95);
    const Eigen::Matrix3d h = fisher_from_generating(s);
    REQUIRE((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::Matrix3d g = metric_tensor_cartesian(bh, s);
    REQUIRE((h - g).cwiseAbs().maxCoeff() <= 1e-5 * g.cwiseAbs().maxCoeff());
  }
  CHECK_THROWS_AS(fisher_from_generating(QubitState::from_spherical(0.9999, 1.0, 1.0)), DomainError);
  CHECK_THROWS_AS(fisher_from_generating(QubitState{}, 1e-2), DomainError);
}

TEST_CASE("projector and Jacobian tensors agree") {
  std::mt19937_64 rng(6);
  for (const auto& m : registered_metrics()) {
    for (int i = 0; i < 100; ++i) {
      const auto s = random_interior(rng, 0.99);
      const Eigen::Matrix3d a = metric_tensor_cartesian(m, s);
      const Eigen::Matrix3d b = metric_tensor_via_jacobian(m, s);
      REQUIRE((a - b).cwiseAbs().maxCoeff() <= 1e-9 * a.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("tensors at special points") {
  const auto bh = MetricModel::brody_hughston();
  CHECK((metric_tensor_cartesian(bh, QubitState{}) - Eigen::Matrix3d::Identity() / 12.0).norm() < 1e-15);
  const auto bures = MetricModel::monotone(MonotoneFamily::kBures);
  const Eigen::Matrix3d g = metric_tensor_cartesian(bures, QubitState::from_cartesian(0.3, 0.0, 0.0));
  Eigen::Matrix3d expected = Eigen::Matrix3d::Identity();
  expected(0, 0) = 1.0 / (1.0 - 0.09);
  CHECK((g - expected).norm() < 1e-14);
}

TEST_CASE("tensors are symmetric positive definite") {
  std::mt19937_64 rng(7);
  for (const auto& m : registered_metrics()) {
    for (int i = 0; i < 10000; ++i) {
      const auto s = random_interior(rng);
      const Eigen::Matrix3d g = metric_tensor_cartesian(m, s);
      REQUIRE(g == g.transpose());
      REQUIRE(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(g).eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("BH radial lies below the monotone radial") {
  const auto bh = MetricModel::brody_hughston();
  for (int i = 1; i < 1000; ++i) {
    const double r = i / 1000.0;
    REQUIRE(bh.coefficients(r).radial < 1.0 / (1.0 - r * r));
  }
}

TEST_CASE("line element") {
  const auto bh = MetricModel::brody_hughston();
  const auto s = QubitState::from_spherical(0.646675, 2.51509, 5.89259);
  const SphericalDifferential ds{4.17588e-6, -8.44724e-6, 7.82807e-6};
  CHECK(line_element_distance(bh, s, ds) == doctest::Approx(2.14985e-6).epsilon(1e-5));
  for (const auto& m : registered_metrics()) CHECK(line_element_distance(m, s, {}) == 0.0);

  const auto c = bh.coefficients(0.646675);
  const double r = 0.646675, st = std::sin(2.51509);
  const double manual = std::sqrt(c.radial * ds.dr * ds.dr +
                                  c.normal * r * r * (ds.dtheta * ds.dtheta + st * st * ds.dphi * ds.dphi));
  CHECK(line_element_distance(bh, s, ds) == doctest::Approx(manual).epsilon(1e-14));
}

TEST_CASE("imputed f") {
  CHECK(imputed_f(1.0) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(imputed_f(0.0) == doctest::Approx(6.09929).epsilon(1e-6));
  CHECK(imputed_f_series_intercept() == doctest::Approx(6.09929).epsilon(1e-6));
  CHECK(imputed_f_series_slope() == doctest::Approx(5.70491).epsilon(1e-6));
  CHECK(imputed_f_series_intercept() == doctest::Approx((-3 + 4 * kE - kE * kE) / ((kE - 3) * (kE - 3))));

  // Closed form, away from t = 1.
  for (double t : {0.05, 0.3, 0.7, 0.95}) {
    const double r = (1 - t) / (1 + t);
    const double direct = -(t - 1) * (t - 1) / (2 * (1 + t) + (t - 1) / std::tanh(r / 2));
    CHECK(imputed_f(t) == doctest::Approx(direct).epsilon(1e-12));
  }

  double previous = imputed_f(0.0);
  double worst_gap = 0.0;
  for (int i = 1; i <= 2000; ++i) {
    const double t = i / 2000.0;
    const double f = imputed_f(t);
    REQUIRE(f > previous);
    REQUIRE(imputed_f_series(t) <= f);
    worst_gap = std::max(worst_gap, f - imputed_f_series(t));
    previous = f;
  }
  // On the Fisher-adjusted scale f/12.
  CHECK(worst_gap / 12.0 < 0.02);
  CHECK(worst_gap == doctest::Approx(12.0 - imputed_f_series(1.0)));
}

TEST_CASE("dominance diagnostics") {
  std::vector<double> grid;
  for (int i = 1; i < 100; ++i) grid.push_back(i / 100.0);
  const auto bh = MetricModel::brody_hughston();
  const auto bures = MetricModel::monotone(MonotoneFamily::kBures);
  const auto maximal = MetricModel::monotone(MonotoneFamily::kMaximal);

  const auto same = dominance_report(bh, bh, grid);
  for (const auto& s : same.samples) {
    REQUIRE(s.radial_difference == 0.0);
    REQUIRE(s.normal_difference == 0.0);
    REQUIRE(std::abs(s.min_eigenvalue) < 1e-15);
  }
  CHECK(same.a_dominates);

  const auto max_over_min = dominance_report(maximal, bures, grid);
  CHECK(max_over_min.a_dominates);
  for (const auto& s : max_over_min.samples) REQUIRE(s.min_eigenvalue >= -1e-12);

  const auto bh_bures = dominance_report(bh, bures, grid);
  CHECK_FALSE(bh_bures.a_dominates);
  CHECK(bh_bures.b_radial_exceeds_a);
  const auto& half = bh_bures.samples[49];
  CHECK(half.r == doctest::Approx(0.5));
  CHECK(half.radial_difference < 0.0);

  const auto origin = dominance_report(bh, bures, grid, DominanceNormalization::kOriginMatched);
  CHECK(origin.scale == doctest::Approx(1.0 / 12));
  const auto quarter = dominance_report(bh, bures, grid, DominanceNormalization::kQuarterScaled);
  CHECK(quarter.scale == doctest::Approx(0.25));
  CHECK(quarter.regions.size() == 4);
}
