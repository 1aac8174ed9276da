#pragma once

// Brute-force reference for the unscented transform: perturb a cluster many
// times, compute descriptors, and take sample statistics.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "flowermatch/descriptor.hpp"
#include "flowermatch/rng.hpp"
#include "flowermatch/unscented.hpp"

namespace flowermatch {

/// Half-open coordinate range for simulated flower positions (meters).
struct SampleRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct McConfig {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  NoiseModel noise;
  /// Flowers in a simulated initial cluster; unused when a cluster is given.
  int n_flowers = 3;
  bool keep_samples = false;
  /// 0 = hardware concurrency. Results do not depend on this.
  std::size_t threads = 1;

  void validate() const;
};

struct McStats {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  /// (trials - 1)-normalized sample covariance; zero when degenerate.
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  /// Set when fewer than two samples make the covariance undefined.
  bool degenerate = false;
  std::size_t trials = 0;
  std::optional<std::vector<Descriptor>> samples;
};

/// n points with every coordinate uniform on [range.lo, range.hi).
Cluster simulate_initial_cluster(std::size_t n, rng::Engine& stream, const SampleRange& range = {});

/// Adds independent zero-mean Gaussian noise to every coordinate. The
/// standard-normal draws depend only on the stream, so the same stream
/// scaled by two noise levels gives proportional displacements.
Cluster perturb(const Cluster& c, const NoiseModel& noise, rng::Engine& stream);

/// Trial t perturbs `c` with the stream (cfg.seed, Perturbation, t).
/// Output is bit-identical for any cfg.threads.
McStats mc_descriptor_stats(const Cluster& c, const McConfig& cfg);

/// Sample mean and (n - 1)-normalized covariance.
McStats sample_statistics(std::span<const Descriptor> samples);

/// Percentage of samples whose squared Mahalanobis distance to `dist`
/// exceeds the chi-square threshold at `confidence` with two degrees of
/// freedom. Throws SingularCovariance.
double outlier_percentage(std::span<const Descriptor> samples, const DescriptorDistribution& dist,
                          double confidence);

/// As above using the retained samples; InvalidParameter if none were kept.
double outlier_percentage(const McStats& stats, const DescriptorDistribution& dist, double confidence);

}  // namespace flowermatch
