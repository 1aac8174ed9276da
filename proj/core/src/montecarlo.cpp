#include "flowermatch/montecarlo.hpp"

#include <cmath>
#include <random>

#include "flowermatch/error.hpp"
#include "flowermatch/matching.hpp"
#include "flowermatch/metrics.hpp"
#include "flowermatch/parallel.hpp"

namespace flowermatch {

void McConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::InvalidParameter, "trials must be >= 1");
  if (n_flowers < static_cast<int>(kMinClusterSize)) {
    throw Error(ErrorCode::TooFewPoints, "n_flowers must be >= 2");
  }
  noise.validate();
}

Cluster simulate_initial_cluster(std::size_t n, rng::Engine& stream, const SampleRange& range) {
  if (n < kMinClusterSize) {
    throw Error(ErrorCode::TooFewPoints, "simulated cluster needs at least 2 points");
  }
  if (!(range.hi > range.lo) || !std::isfinite(range.lo) || !std::isfinite(range.hi)) {
    throw Error(ErrorCode::InvalidParameter, "sample range must satisfy lo < hi");
  }
  std::uniform_real_distribution<double> uniform(range.lo, range.hi);
  Cluster c;
  c.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = uniform(stream);
    const double y = uniform(stream);
    const double z = uniform(stream);
    c.points.emplace_back(x, y, z);
  }
  return c;
}

Cluster perturb(const Cluster& c, const NoiseModel& noise, rng::Engine& stream) {
  c.validate();
  noise.validate();
  const Eigen::Vector3d sigmas = noise.axis_sigmas();
  std::normal_distribution<double> standard(0.0, 1.0);
  Cluster out = c;
  for (auto& p : out.points) {
    for (int axis = 0; axis < 3; ++axis) p(axis) += sigmas(axis) * standard(stream);
  }
  return out;
}

McStats sample_statistics(std::span<const Descriptor> samples) {
  McStats stats;
  stats.trials = samples.size();
  if (samples.empty()) {
    stats.degenerate = true;
    return stats;
  }
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (const auto& s : samples) sum += s.as_vector();
  stats.mean = sum / static_cast<double>(samples.size());
  if (samples.size() < 2) {
    stats.degenerate = true;
    return stats;
  }
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (const auto& s : samples) {
    const Eigen::Vector2d d = s.as_vector() - stats.mean;
    acc += d * d.transpose();
  }
  stats.cov = acc / static_cast<double>(samples.size() - 1);
  return stats;
}

McStats mc_descriptor_stats(const Cluster& c, const McConfig& cfg) {
  cfg.validate();
  c.validate();
  if (c.size() < kMinClusterSize) throw Error(ErrorCode::TooFewPoints, "cluster needs at least 2 points");

  std::vector<Descriptor> samples(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
    auto stream = rng::make_stream(cfg.seed, rng::Domain::Perturbation, t);
    samples[t] = compute_descriptor(perturb(c, cfg.noise, stream));
  });

  McStats stats = sample_statistics(samples);
  if (cfg.keep_samples) stats.samples = std::move(samples);
  return stats;
}

double outlier_percentage(std::span<const Descriptor> samples, const DescriptorDistribution& dist,
                          double confidence) {
  if (samples.empty()) throw Error(ErrorCode::InvalidParameter, "no samples to evaluate");
  const double threshold = chi2_threshold(confidence, kDescriptorDof);
  const MahalanobisGate gate(dist);
  std::size_t outliers = 0;
  for (const auto& s : samples) {
    if (gate.squared(s.as_vector()) > threshold) ++outliers;
  }
  return 100.0 * static_cast<double>(outliers) / static_cast<double>(samples.size());
}

double outlier_percentage(const McStats& stats, const DescriptorDistribution& dist, double confidence) {
  if (!stats.samples) {
    throw Error(ErrorCode::InvalidParameter, "Monte Carlo samples were not retained (keep_samples)");
  }
  return outlier_percentage(std::span<const Descriptor>(*stats.samples), dist, confidence);
}

}  // namespace flowermatch
