#include "flowermatch/matching.hpp"

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "flowermatch/error.hpp"
#include "flowermatch/metrics.hpp"
#include "flowermatch/parallel.hpp"

namespace flowermatch {

MahalanobisGate::MahalanobisGate(const DescriptorDistribution& dist)
    : mean_(dist.mean), flower_count_(dist.flower_count) {
  if (!dist.cov.allFinite() || !dist.mean.allFinite()) {
    throw Error(ErrorCode::SingularCovariance, "distribution has non-finite entries");
  }
  const Eigen::Matrix2d sym = 0.5 * (dist.cov + dist.cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sym, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber) {
    throw Error(ErrorCode::SingularCovariance,
                "descriptor covariance is singular or ill-conditioned; add padding or noise");
  }
  inverse_ = sym.inverse();
}

double squared_mahalanobis(const Descriptor& x, const DescriptorDistribution& dist) {
  return MahalanobisGate(dist).squared(x.as_vector());
}

double mahalanobis(const Descriptor& x, const DescriptorDistribution& dist) {
  return std::sqrt(squared_mahalanobis(x, dist));
}

void MatchConfig::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidConfidence, "confidence must be in (0, 1)");
  }
  if (!std::isfinite(padding) || padding < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "padding must be finite and >= 0");
  }
}

MatchResult is_match(const Eigen::Vector2d& x, int n_observed, const MahalanobisGate& gate,
                     double threshold, bool require_count, std::int64_t frame_id) {
  MatchResult r;
  r.frame_id = frame_id;
  r.threshold = threshold;
  r.d2 = gate.squared(x);
  r.count_ok = !require_count || n_observed == gate.flower_count();
  r.matched = r.count_ok && r.d2 < threshold;
  return r;
}

MatchResult is_match(const Descriptor& x, int n_observed, const DescriptorDistribution& dist,
                     const MatchConfig& cfg, std::int64_t frame_id) {
  cfg.validate();
  const double threshold = chi2_threshold(cfg.confidence, kDescriptorDof);
  return is_match(x.as_vector(), n_observed, MahalanobisGate(dist), threshold, cfg.require_count,
                  frame_id);
}

MatchReport match_datasets(const Dataset& reference, const Dataset& observed, const NoiseModel& noise,
                           const UtParams& ut, const MatchConfig& cfg, const MatchRunOptions& opts) {
  cfg.validate();
  if (reference.frames.empty()) throw Error(ErrorCode::EmptyAfterPruning, "reference dataset is empty");
  if (observed.frames.empty()) throw Error(ErrorCode::EmptyAfterPruning, "observed dataset is empty");

  const std::size_t n_ref = reference.frames.size();
  const std::size_t n_obs = observed.frames.size();
  const double threshold = chi2_threshold(cfg.confidence, kDescriptorDof);

  std::vector<Eigen::Vector2d> obs_desc(n_obs);
  std::vector<int> obs_count(n_obs);
  for (std::size_t j = 0; j < n_obs; ++j) {
    const auto& frame = observed.frames[j];
    try {
      obs_desc[j] = compute_descriptor(frame).as_vector();
    } catch (const Error& e) {
      throw e.with_context("observed frame " + std::to_string(frame.frame_id));
    }
    obs_count[j] = static_cast<int>(frame.size());
  }

  MatchReport report;
  report.reference_name = reference.name;
  report.observed_name = observed.name;
  report.reference_frames = n_ref;
  report.observed_frames = n_obs;
  report.aligned = opts.aligned;
  report.threshold = threshold;
  report.config = cfg;
  report.per_reference.resize(n_ref);
  if (opts.keep_pairs) report.pairs.resize(n_ref * n_obs);

  parallel_for(n_ref, opts.threads, [&](std::size_t i) {
    const auto& frame = reference.frames[i];
    std::optional<MahalanobisGate> gate;
    try {
      gate.emplace(ut_descriptor_distribution(frame, noise, ut, cfg.padding));
    } catch (const Error& e) {
      throw e.with_context("reference frame " + std::to_string(frame.frame_id));
    }
    ReferenceSummary summary;
    summary.ref_index = i;
    summary.ref_frame = frame.frame_id;
    summary.has_diagonal = opts.aligned && i < n_obs;
    for (std::size_t j = 0; j < n_obs; ++j) {
      const MatchResult r = is_match(obs_desc[j], obs_count[j], *gate, threshold, cfg.require_count,
                                     observed.frames[j].frame_id);
      if (opts.keep_pairs) report.pairs[i * n_obs + j] = PairResult{i, j, frame.frame_id, r};
      if (!r.matched) continue;
      if (summary.has_diagonal && i == j) {
        summary.diagonal_matched = true;
      } else {
        ++summary.off_diagonal_matches;
      }
    }
    report.per_reference[i] = summary;
  });

  std::size_t fp_over_correct = 0;
  for (const auto& s : report.per_reference) {
    report.total_matches += s.off_diagonal_matches + (s.diagonal_matched ? 1 : 0);
    if (!opts.aligned) continue;
    if (s.has_diagonal) ++report.diagonal_pairs;
    report.off_diagonal_matches += s.off_diagonal_matches;
    if (s.diagonal_matched) {
      ++report.correct_matches;
      fp_over_correct += s.off_diagonal_matches;
    }
  }
  if (report.correct_matches > 0) {
    report.avg_false_positives =
        static_cast<double>(fp_over_correct) / static_cast<double>(report.correct_matches);
  }
  return report;
}

}  // namespace flowermatch
