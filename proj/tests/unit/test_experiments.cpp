#include <gtest/gtest.h>

#include "flowermatch/experiments.hpp"
#include "flowermatch/metrics.hpp"

namespace flowermatch {
namespace {

TEST(NoiseSweep, RowsFollowGridAndAreReproducible) {
  NoiseSweepConfig cfg;
  cfg.trials = 2000;
  const auto a = run_noise_sweep(cfg);
  const auto b = run_noise_sweep(cfg);
  ASSERT_EQ(a.rows.size(), 5u);
  EXPECT_EQ(a.cluster.size(), 3u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].noise, cfg.noise_levels[i]);
    EXPECT_EQ(a.rows[i].frobenius_norm, b.rows[i].frobenius_norm);
    EXPECT_EQ(a.rows[i].outlier_pct, b.rows[i].outlier_pct);
    EXPECT_NEAR(a.rows[i].frobenius_norm, frobenius_distance(a.rows[i].mc_cov, a.rows[i].ut.cov), 1e-18);
    EXPECT_GE(a.rows[i].outlier_pct, 0.0);
    EXPECT_LE(a.rows[i].outlier_pct, 100.0);
  }
}

TEST(NoiseSweep, ThreadsDoNotChangeOutput) {
  NoiseSweepConfig cfg;
  cfg.trials = 1500;
  const auto one = run_noise_sweep(cfg);
  cfg.threads = 3;
  const auto three = run_noise_sweep(cfg);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].mc_cov, three.rows[i].mc_cov);
    EXPECT_EQ(one.rows[i].outlier_pct, three.rows[i].outlier_pct);
  }
}

TEST(NoiseSweep, FrobeniusGrowsWithNoise) {
  NoiseSweepConfig cfg;
  cfg.trials = 4000;
  const auto r = run_noise_sweep(cfg);
  EXPECT_GT(r.rows.back().frobenius_norm, 10.0 * r.rows.front().frobenius_norm);
}

TEST(PaddingStudy, ZeroPaddingArmsAreIdentical) {
  PaddingStudyConfig cfg;
  cfg.samples = 600;
  cfg.padded = cfg.baseline;
  const auto r = run_padding_study(cfg);
  EXPECT_EQ(r.baseline.correct_matches, r.padded.correct_matches);
  EXPECT_EQ(r.baseline.false_positives, r.padded.false_positives);
  EXPECT_EQ(r.baseline.avg_false_positives, r.padded.avg_false_positives);
}

TEST(PaddingStudy, PaddingNeverLosesMatches) {
  PaddingStudyConfig cfg;
  cfg.samples = 800;
  const auto r = run_padding_study(cfg);
  EXPECT_EQ(r.baseline.samples, 800u);
  EXPECT_GE(r.padded.correct_matches, r.baseline.correct_matches);
  EXPECT_GE(r.padded.false_positives, r.baseline.false_positives);
  EXPECT_LE(r.padded.correct_matches, 800u);
}

TEST(PaddingStudy, ThreadsDoNotChangeOutput) {
  PaddingStudyConfig cfg;
  cfg.samples = 400;
  const auto one = run_padding_study(cfg);
  cfg.threads = 4;
  const auto four = run_padding_study(cfg);
  EXPECT_EQ(one.padded.false_positives, four.padded.false_positives);
  EXPECT_EQ(one.baseline.correct_matches, four.baseline.correct_matches);
}

TEST(SyntheticDataset, FramesShareBaseAndIds) {
  SyntheticDatasetConfig cfg;
  cfg.frames = 100;
  cfg.flowers = 5;
  const auto s = generate_synthetic_frames(cfg);
  ASSERT_EQ(s.frames.size(), 100u);
  EXPECT_EQ(s.base.size(), 5u);
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    EXPECT_EQ(s.frames[i].frame_id, static_cast<std::int64_t>(i));
    ASSERT_EQ(s.frames[i].size(), 5u);
    EXPECT_LT((s.frames[i].points[0] - s.base.points[0]).norm(), 0.1);
  }
}

}  // namespace
}  // namespace flowermatch
