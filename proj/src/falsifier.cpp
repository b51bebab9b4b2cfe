#include "bloch/falsifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "bloch/errors.hpp"
#include "bloch/parallel.hpp"

namespace bloch {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double wrapped_difference(double a, double b) {
  double d = std::remainder(a - b, 2.0 * kPi);
  if (d == -kPi) d = kPi;
  return d;
}

std::optional<ViolationRecord> run_trial(const SearchConfig& cfg, std::uint64_t trial) {
  TrialStream rng(cfg.seed, trial);
  const double scale = cfg.differential_scale;
  Spherical s;
  SphericalDifferential d;
  // Uniform in the ball; redraw until the perturbed point is a valid chart
  // point strictly inside the ball.
  for (;;) {
    s.r = std::cbrt(rng.uniform());
    s.theta = std::acos(1.0 - 2.0 * rng.uniform());
    s.phi = 2.0 * kPi * rng.uniform();
    d.dr = scale * (2.0 * rng.uniform() - 1.0);
    d.dtheta = scale * (2.0 * rng.uniform() - 1.0);
    d.dphi = scale * (2.0 * rng.uniform() - 1.0);
    const double r2 = s.r + d.dr;
    const double t2 = s.theta + d.dtheta;
    if (s.r > 0.0 && r2 > 0.0 && s.r < 1.0 && r2 < 1.0 && t2 >= 0.0 && t2 <= kPi) break;
  }
  const double u = cfg.unital_only ? 0.0 : 2.0 * kPi * rng.uniform();
  const double v = 2.0 * kPi * rng.uniform();

  const auto report = evaluate_case(cfg.metric, s, d, u, v);
  if (!(report.post_distance > report.pre_distance * (1.0 + cfg.relative_margin))) return std::nullopt;
  return ViolationRecord{s, d, u, v, report.pre_distance, report.post_distance, report.ratio, cfg.seed, trial};
}

}  // namespace

void SearchConfig::validate() const {
  if (trials < 1) throw DomainError("search needs at least one trial");
  if (!(differential_scale > 0.0 && differential_scale <= 1e-3)) {
    throw DomainError("differential scale must lie in (0, 1e-3]");
  }
  if (!(relative_margin >= 0.0)) throw DomainError("relative margin must be nonnegative");
}

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial)
    : state_(mix64(seed ^ mix64(trial + 0x9e3779b97f4a7c15ULL))) {}

std::uint64_t TrialStream::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double TrialStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

CaseReport evaluate_case(const MetricModel& metric, const Spherical& state, const SphericalDifferential& d, double u,
                         double v) {
  const auto rho1 = QubitState::from_spherical(state.r, state.theta, state.phi);
  const auto rho2 = QubitState::from_spherical(state.r + d.dr, state.theta + d.dtheta, state.phi + d.dphi);
  const auto channel = QubitChannel::trigonometric(u, v);
  const auto img1 = apply(channel, rho1);
  const auto img2 = apply(channel, rho2);

  CaseReport out;
  out.state = rho1.spherical();
  out.perturbed = rho2.spherical();
  out.image = img1.spherical();
  out.perturbed_image = img2.spherical();
  out.pre_distance = line_element_distance(metric, rho1, d);
  const SphericalDifferential image_d{out.perturbed_image.r - out.image.r, out.perturbed_image.theta - out.image.theta,
                                      wrapped_difference(out.perturbed_image.phi, out.image.phi)};
  out.post_distance = line_element_distance(metric, img1, image_d);
  out.ratio = out.post_distance / out.pre_distance;
  out.violation = out.post_distance > out.pre_distance;
  return out;
}

CaseReport verify_case(const MetricModel& metric, const ViolationRecord& record) {
  return evaluate_case(metric, record.state, record.differential, record.u, record.v);
}

ViolationRecord reference_counterexample() {
  ViolationRecord rec;
  rec.state = {0.646675, 2.51509, 5.89259};
  rec.differential = {-4.17588e-6, 8.44724e-6, -7.82807e-6};
  rec.u = 2.43564;
  rec.v = 0.0289153;
  const auto report = verify_case(MetricModel::brody_hughston(), rec);
  rec.pre_distance = report.pre_distance;
  rec.post_distance = report.post_distance;
  rec.ratio = report.ratio;
  return rec;
}

Spherical reference_image() { return {0.546143, 0.752553, 0.351613}; }

Spherical reference_perturbed_image() { return {0.546138, 0.752544, 0.351621}; }

SearchResult search(const SearchConfig& cfg) {
  cfg.validate();
  constexpr std::uint64_t kBatch = 1 << 16;
  SearchResult result;
  result.trials = cfg.trials;
  std::vector<std::optional<ViolationRecord>> slots;
  for (std::uint64_t begin = 0; begin < cfg.trials; begin += kBatch) {
    const std::uint64_t count = std::min(kBatch, cfg.trials - begin);
    slots.assign(count, std::nullopt);
    parallel_for(
        count, [&](std::size_t i) { slots[i] = run_trial(cfg, begin + i); }, cfg.workers);
    for (auto& slot : slots) {
      if (slot) result.violations.push_back(*slot);
    }
  }
  return result;
}

}  // namespace bloch
