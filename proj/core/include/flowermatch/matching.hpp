#pragma once

// Cluster identity decisions: squared Mahalanobis distance of an observed
// descriptor to a reference distribution, gated by a chi-square quantile
// and by flower-count equality.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowermatch/datasets.hpp"
#include "flowermatch/descriptor.hpp"
#include "flowermatch/unscented.hpp"

namespace flowermatch {

/// Descriptor dimension, hence chi-square degrees of freedom.
inline constexpr int kDescriptorDof = 2;

/// Covariances with a larger condition number are treated as singular.
inline constexpr double kMaxConditionNumber = 1e12;

/// Precomputed inverse covariance of one distribution.
class MahalanobisGate {
 public:
  /// Throws SingularCovariance if cov is not positive definite or its
  /// condition number exceeds kMaxConditionNumber.
  explicit MahalanobisGate(const DescriptorDistribution& dist);

  double squared(const Eigen::Vector2d& x) const {
    const Eigen::Vector2d d = x - mean_;
    return d.dot(inverse_ * d);
  }

  const Eigen::Vector2d& mean() const { return mean_; }
  int flower_count() const { return flower_count_; }

 private:
  Eigen::Vector2d mean_;
  Eigen::Matrix2d inverse_;
  int flower_count_;
};

double squared_mahalanobis(const Descriptor& x, const DescriptorDistribution& dist);
double mahalanobis(const Descriptor& x, const DescriptorDistribution& dist);

struct MatchConfig {
  double confidence = 0.95;
  double padding = 0.0;
  bool require_count = true;

  void validate() const;
};

struct MatchResult {
  bool matched = false;
  double d2 = 0.0;
  double threshold = 0.0;
  bool count_ok = false;
  std::int64_t frame_id = 0;
};

/// matched = d2 < threshold && count_ok. A distance exactly on the
/// threshold is not a match.
MatchResult is_match(const Descriptor& x, int n_observed, const DescriptorDistribution& dist,
                     const MatchConfig& cfg, std::int64_t frame_id = 0);

/// Same decision with a prebuilt gate and threshold (hot loops).
MatchResult is_match(const Eigen::Vector2d& x, int n_observed, const MahalanobisGate& gate,
                     double threshold, bool require_count, std::int64_t frame_id = 0);

struct PairResult {
  std::size_t ref_index = 0;
  std::size_t obs_index = 0;
  std::int64_t ref_frame = 0;
  MatchResult result;
};

struct ReferenceSummary {
  std::size_t ref_index = 0;
  std::int64_t ref_frame = 0;
  /// Only meaningful for aligned datasets with an observed frame at ref_index.
  bool has_diagonal = false;
  bool diagonal_matched = false;
  std::size_t off_diagonal_matches = 0;
};

struct MatchReport {
  std::string reference_name;
  std::string observed_name;
  std::size_t reference_frames = 0;
  std::size_t observed_frames = 0;
  bool aligned = true;
  double threshold = 0.0;
  MatchConfig config;

  /// Row-major over (reference, observed).
  std::vector<PairResult> pairs;
  std::vector<ReferenceSummary> per_reference;

  std::size_t total_matches = 0;
  /// The following are zero when !aligned.
  std::size_t diagonal_pairs = 0;
  std::size_t correct_matches = 0;
  std::size_t off_diagonal_matches = 0;
  /// Mean off-diagonal match count over references whose diagonal matched.
  double avg_false_positives = 0.0;
};

struct MatchRunOptions {
  /// Observed frame i is the same physical instant as reference frame i.
  bool aligned = true;
  /// Keep every pair result (can be large: |ref| x |obs|).
  bool keep_pairs = true;
  std::size_t threads = 1;
};

/// Builds one UT distribution per reference frame (with cfg.padding) and
/// gates every observed frame against every reference. Errors carry the
/// (ref_frame, obs_frame) context.
MatchReport match_datasets(const Dataset& reference, const Dataset& observed, const NoiseModel& noise,
                           const UtParams& ut, const MatchConfig& cfg, const MatchRunOptions& opts = {});

}  // namespace flowermatch
