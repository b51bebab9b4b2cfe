#include "bloch/bayes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "bloch/errors.hpp"

namespace bloch {

namespace {

constexpr double kGolden = std::numbers::phi;

std::vector<Eigen::Vector3d> normalized(std::vector<Eigen::Vector3d> v) {
  for (auto& a : v) a.normalize();
  return v;
}

// Cyclic permutations of (0, a, b).
void push_cyclic(std::vector<Eigen::Vector3d>& out, double a, double b) {
  out.emplace_back(0.0, a, b);
  out.emplace_back(a, b, 0.0);
  out.emplace_back(b, 0.0, a);
}

std::vector<Eigen::Vector3d> cube_diagonals() {
  return normalized({{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}});
}

}  // namespace

MetricModel prior_metric(std::string_view name) {
  if (name == "BH") return MetricModel::brody_hughston();
  if (name == "B") return MetricModel::monotone(MonotoneFamily::kBures);
  if (name == "MC") return MetricModel::monotone(MonotoneFamily::kMorozovaChentsov);
  if (name == "GKS") return MetricModel::monotone(MonotoneFamily::kIdentric);
  if (name == "MBH" || name == "~BH") return MetricModel::modified_brody_hughston();
  return MetricModel::parse(name);
}

std::string prior_name(const MetricModel& metric) {
  switch (metric.kind()) {
    case MetricKind::kBrodyHughston: return "BH";
    case MetricKind::kModifiedBrodyHughston: return "~BH";
    case MetricKind::kBachGuiasu: return "BG";
    case MetricKind::kMonotone:
      switch (metric.family()) {
        case MonotoneFamily::kBures: return "B";
        case MonotoneFamily::kMorozovaChentsov: return "MC";
        case MonotoneFamily::kIdentric: return "GKS";
        default: return metric.id();
      }
  }
  return metric.id();
}

BallDensity prior(const MetricModel& metric, const QuadratureSpec& spec) {
  return normalize(
      "p_" + prior_name(metric),
      [metric](const BallPoint& p) { return metric.log_radial_volume(p.radial()) + std::log(p.sin_theta); },
      spec, true);
}

BallDensity prior(std::string_view name, const QuadratureSpec& spec) { return prior(prior_metric(name), spec); }

AxisSet AxisSet::platonic(Polyhedron solid) {
  switch (solid) {
    case Polyhedron::kOctahedron:
      return {"OCTAHEDRON-3", {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()}};
    case Polyhedron::kCube:
      return {"CUBE-4", cube_diagonals()};
    case Polyhedron::kIcosahedron: {
      std::vector<Eigen::Vector3d> v;
      push_cyclic(v, 1.0, kGolden);
      push_cyclic(v, 1.0, -kGolden);
      return {"ICOSAHEDRON-6", normalized(std::move(v))};
    }
    case Polyhedron::kDodecahedron: {
      auto v = cube_diagonals();
      std::vector<Eigen::Vector3d> extra;
      push_cyclic(extra, 1.0 / kGolden, kGolden);
      push_cyclic(extra, 1.0 / kGolden, -kGolden);
      for (auto& a : normalized(std::move(extra))) v.push_back(a);
      return {"DODECAHEDRON-10", std::move(v)};
    }
  }
  throw UnknownIdError("unknown polyhedron");
}

AxisSet AxisSet::parse(std::string_view label) {
  if (label == "OCTAHEDRON-3" || label == "oct") return platonic(Polyhedron::kOctahedron);
  if (label == "CUBE-4" || label == "cube") return platonic(Polyhedron::kCube);
  if (label == "ICOSAHEDRON-6" || label == "icos") return platonic(Polyhedron::kIcosahedron);
  if (label == "DODECAHEDRON-10" || label == "dode") return platonic(Polyhedron::kDodecahedron);
  throw UnknownIdError("unknown axis set: " + std::string(label));
}

AxisSet AxisSet::custom(std::string label, std::vector<Eigen::Vector3d> axes) {
  if (axes.empty()) throw DomainError("axis set must not be empty");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (std::abs(axes[i].norm() - 1.0) > 1e-12) throw DomainError("axis " + std::to_string(i) + " is not a unit vector");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(std::abs(axes[i].dot(axes[j])) - 1.0) <= 1e-12) {
        throw DomainError("axes " + std::to_string(j) + " and " + std::to_string(i) + " coincide up to sign");
      }
    }
  }
  return {std::move(label), std::move(axes)};
}

std::string AxisSet::short_name() const {
  if (label_ == "OCTAHEDRON-3") return "oct";
  if (label_ == "CUBE-4") return "cube";
  if (label_ == "ICOSAHEDRON-6") return "icos";
  if (label_ == "DODECAHEDRON-10") return "dode";
  return label_;
}

AxisSet AxisSet::rotated(const Eigen::Matrix3d& rotation) const {
  std::vector<Eigen::Vector3d> v;
  v.reserve(axes_.size());
  for (const auto& a : axes_) v.push_back((rotation * a).normalized());
  return {label_ + "(rotated)", std::move(v)};
}

LikelihoodSpec LikelihoodSpec::parse(std::string_view name) {
  std::size_t split = 0;
  while (split < name.size() && !std::isdigit(static_cast<unsigned char>(name[split]))) ++split;
  if (split == 0 || split == name.size()) throw UnknownIdError("unknown likelihood: " + std::string(name));
  const auto axes = AxisSet::parse(name.substr(0, split));
  int total = 0;
  try {
    total = std::stoi(std::string(name.substr(split)));
  } catch (const std::exception&) {
    throw UnknownIdError("unknown likelihood: " + std::string(name));
  }
  const int n = static_cast<int>(axes.size());
  if (total <= 0 || total % n != 0) {
    throw UnknownIdError("likelihood '" + std::string(name) + "' needs a positive multiple of " +
                         std::to_string(n) + " pairs");
  }
  return {axes, total / n};
}

std::string LikelihoodSpec::name() const {
  return axes.short_name() + std::to_string(pairs_per_axis * static_cast<int>(axes.size()));
}

std::string LikelihoodSpec::superscript() const {
  const std::string count = std::to_string(pairs_per_axis * static_cast<int>(axes.size()));
  if (axes.label() == "OCTAHEDRON-3") return count;
  return count + "/" + axes.short_name();
}

double log_likelihood(const LikelihoodSpec& spec, const Eigen::Vector3d& x) {
  double acc = 0.0;
  for (const auto& n : spec.axes.axes()) {
    const double c = n.dot(x);
    // Rounding can push (n.x)^2 just past 1 on the axes.
    acc += std::log1p(-std::min(c * c, 1.0));
  }
  acc *= spec.pairs_per_axis;
  if (spec.pairs_per_axis == 1) acc -= std::numbers::ln2 * static_cast<double>(spec.axes.size());
  return acc;
}

BallDensity posterior(const BallDensity& prior, const LikelihoodSpec& likelihood, const QuadratureSpec& spec) {
  if (likelihood.pairs_per_axis < 1) throw DomainError("pairs per axis must be >= 1");
  const std::string base = prior.label().starts_with("p_") ? prior.label().substr(2) : prior.label();
  auto log_prior = prior.log_unnormalized();
  return normalize(
      "P_" + base + "^(" + likelihood.superscript() + ")",
      [log_prior, likelihood](const BallPoint& p) { return log_prior(p) + log_likelihood(likelihood, p.x); }, spec);
}

ClarkeReport clarke_compare(const BallDensity& p, const BallDensity& q, std::span<const LikelihoodSpec> ladder,
                            const QuadratureSpec& spec) {
  ClarkeReport report;
  report.p = p.label();
  report.q = q.label();
  report.p_to_q = relative_entropy(p, q, spec);
  report.q_to_p = relative_entropy(q, p, spec);
  for (const auto& rung : ladder) {
    ClarkeRung row;
    row.likelihood = rung.name();
    row.p_posterior_to_q = relative_entropy(posterior(p, rung, spec), q, spec);
    row.q_posterior_to_p = relative_entropy(posterior(q, rung, spec), p, spec);
    if (!report.breakdown_rung && row.p_posterior_to_q >= report.p_to_q) {
      report.breakdown_rung = report.rungs.size();
    }
    report.rungs.push_back(row);
  }
  if (!report.rungs.empty()) {
    const auto& first = report.rungs.front();
    report.p_more_noninformative = first.p_posterior_to_q < report.p_to_q && first.q_posterior_to_p > report.q_to_p;
  }
  return report;
}

BallDensity named_density(std::string_view name, const QuadratureSpec& spec) {
  constexpr std::string_view tag = ":posterior:";
  const auto at = name.find(tag);
  if (at == std::string_view::npos) return prior(name, spec);
  const auto base = prior(name.substr(0, at), spec);
  return posterior(base, LikelihoodSpec::parse(name.substr(at + tag.size())), spec);
}

}  // namespace bloch
