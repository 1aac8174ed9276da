#pragma once

// Seeded synthetic protocols: the unscented-vs-Monte-Carlo noise sweep, the
// padding study over mixed-size clusters, and generated frame datasets.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "flowermatch/datasets.hpp"
#include "flowermatch/descriptor.hpp"
#include "flowermatch/montecarlo.hpp"
#include "flowermatch/unscented.hpp"

namespace flowermatch {

inline constexpr std::uint64_t kDefaultSeed = 1170;

struct NoiseSweepConfig {
  std::vector<double> noise_levels{0.01, 0.02, 0.03, 0.04, 0.05};
  std::size_t trials = 10000;
  std::uint64_t seed = kDefaultSeed;
  int flowers = 3;
  SampleRange range;
  double confidence = 0.95;
  double padding = 0.0;
  UtParams ut;
  std::size_t threads = 1;
};

struct NoiseSweepRow {
  double noise = 0.0;
  double frobenius_norm = 0.0;  // ||MC cov - UT cov||_F
  double outlier_pct = 0.0;     // MC samples outside the UT gate
  Eigen::Vector2d mc_mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d mc_cov = Eigen::Matrix2d::Zero();
  DescriptorDistribution ut;
};

struct NoiseSweepResult {
  Cluster cluster;
  std::vector<NoiseSweepRow> rows;
};

/// One seeded cluster; for each noise level a Monte Carlo run and a UT
/// distribution. Every level reuses the same per-trial standard-normal
/// draws, scaled by the noise.
NoiseSweepResult run_noise_sweep(const NoiseSweepConfig& cfg);

struct PaddingArm {
  double noise = 0.01;
  double padding = 0.0;
};

struct PaddingStudyConfig {
  std::size_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  int min_flowers = 3;
  int max_flowers = 6;
  SampleRange range;
  double confidence = 0.95;
  UtParams ut;
  PaddingArm baseline{0.01, 0.0};
  PaddingArm padded{0.01, 0.005};
  std::size_t threads = 1;
};

struct PaddingArmResult {
  PaddingArm arm;
  std::size_t samples = 0;
  /// Observations that matched their own reference distribution.
  std::size_t correct_matches = 0;
  /// Summed over references with a correct match.
  std::size_t false_positives = 0;
  /// false_positives / correct_matches.
  double avg_false_positives = 0.0;
};

struct PaddingStudyResult {
  PaddingArmResult baseline;
  PaddingArmResult padded;
};

/// Sample i: flower count uniform in [min, max], reference cluster uniform
/// in `range`, UT distribution with the arm's noise and padding, and one
/// observation perturbed with the arm's noise. A false positive of i is any
/// other observation with the same flower count inside i's gate.
PaddingArmResult run_padding_arm(const PaddingStudyConfig& cfg, const PaddingArm& arm);
PaddingStudyResult run_padding_study(const PaddingStudyConfig& cfg);

struct SyntheticDatasetConfig {
  std::size_t frames = 1000;
  int flowers = 3;
  double noise = 0.01;
  std::uint64_t seed = kDefaultSeed;
  SampleRange range;
  /// Probability that a frame gains or loses one detection.
  double corrupt_fraction = 0.0;
  std::string name = "synthetic";
};

struct SyntheticDataset {
  Cluster base;
  /// Unpruned frames, frame_id = index.
  std::vector<Cluster> frames;
};

/// One seeded base cluster observed `frames` times with Gaussian noise.
SyntheticDataset generate_synthetic_frames(const SyntheticDatasetConfig& cfg);

/// generate_synthetic_frames followed by pruning to cfg.flowers.
LoadedDataset generate_synthetic_dataset(const SyntheticDatasetConfig& cfg);

}  // namespace flowermatch
