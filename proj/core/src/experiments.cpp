#include "flowermatch/experiments.hpp"

#include <random>
#include <string>

#include "flowermatch/error.hpp"
#include "flowermatch/matching.hpp"
#include "flowermatch/metrics.hpp"
#include "flowermatch/parallel.hpp"

namespace flowermatch {

NoiseSweepResult run_noise_sweep(const NoiseSweepConfig& cfg) {
  if (cfg.noise_levels.empty()) throw Error(ErrorCode::InvalidParameter, "noise grid is empty");
  if (cfg.flowers < static_cast<int>(kMinClusterSize)) {
    throw Error(ErrorCode::TooFewPoints, "noise sweep needs at least 2 flowers");
  }

  NoiseSweepResult out;
  auto cluster_stream = rng::make_stream(cfg.seed, rng::Domain::InitialCluster, 0);
  out.cluster = simulate_initial_cluster(static_cast<std::size_t>(cfg.flowers), cluster_stream, cfg.range);

  for (const double noise : cfg.noise_levels) {
    McConfig mc;
    mc.trials = cfg.trials;
    mc.seed = cfg.seed;
    mc.noise.sigma = noise;
    mc.n_flowers = cfg.flowers;
    mc.keep_samples = true;
    mc.threads = cfg.threads;

    NoiseSweepRow row;
    row.noise = noise;
    const McStats stats = mc_descriptor_stats(out.cluster, mc);
    row.mc_mean = stats.mean;
    row.mc_cov = stats.cov;
    row.ut = ut_descriptor_distribution(out.cluster, mc.noise, cfg.ut, cfg.padding);
    row.frobenius_norm = frobenius_distance(stats.cov, row.ut.cov);
    row.outlier_pct = outlier_percentage(stats, row.ut, cfg.confidence);
    out.rows.push_back(row);
  }
  return out;
}

PaddingArmResult run_padding_arm(const PaddingStudyConfig& cfg, const PaddingArm& arm) {
  if (cfg.samples == 0) throw Error(ErrorCode::InvalidParameter, "padding study needs samples");
  if (cfg.min_flowers < static_cast<int>(kMinClusterSize) || cfg.max_flowers < cfg.min_flowers) {
    throw Error(ErrorCode::InvalidParameter, "flower range must satisfy 2 <= min <= max");
  }
  MatchConfig match_cfg{cfg.confidence, arm.padding, true};
  match_cfg.validate();
  const double threshold = chi2_threshold(cfg.confidence, kDescriptorDof);
  NoiseModel noise;
  noise.sigma = arm.noise;
  noise.validate();

  const std::size_t n = cfg.samples;
  std::vector<DescriptorDistribution> refs(n);
  std::vector<Eigen::Vector2d> obs(n);
  std::vector<int> counts(n);

  parallel_for(n, cfg.threads, [&](std::size_t i) {
    auto count_stream = rng::make_stream(cfg.seed, rng::Domain::FlowerCount, i);
    std::uniform_int_distribution<int> pick(cfg.min_flowers, cfg.max_flowers);
    counts[i] = pick(count_stream);

    auto cluster_stream = rng::make_stream(cfg.seed, rng::Domain::InitialCluster, i);
    const Cluster c = simulate_initial_cluster(static_cast<std::size_t>(counts[i]), cluster_stream, cfg.range);
    try {
      refs[i] = ut_descriptor_distribution(c, noise, cfg.ut, arm.padding);
    } catch (const Error& e) {
      throw e.with_context("sample " + std::to_string(i));
    }
    auto perturb_stream = rng::make_stream(cfg.seed, rng::Domain::Perturbation, i);
    obs[i] = compute_descriptor(perturb(c, noise, perturb_stream)).as_vector();
  });

  // Observations grouped by flower count; the count gate rejects the rest.
  std::vector<std::vector<std::size_t>> by_count(static_cast<std::size_t>(cfg.max_flowers) + 1);
  for (std::size_t j = 0; j < n; ++j) by_count[static_cast<std::size_t>(counts[j])].push_back(j);

  std::vector<std::uint8_t> correct(n, 0);
  std::vector<std::size_t> false_pos(n, 0);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const MahalanobisGate gate(refs[i]);
    for (const std::size_t j : by_count[static_cast<std::size_t>(counts[i])]) {
      if (gate.squared(obs[j]) < threshold) {
        if (j == i) {
          correct[i] = 1;
        } else {
          ++false_pos[i];
        }
      }
    }
  });

  PaddingArmResult r;
  r.arm = arm;
  r.samples = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!correct[i]) continue;
    ++r.correct_matches;
    r.false_positives += false_pos[i];
  }
  if (r.correct_matches > 0) {
    r.avg_false_positives = static_cast<double>(r.false_positives) / static_cast<double>(r.correct_matches);
  }
  return r;
}

PaddingStudyResult run_padding_study(const PaddingStudyConfig& cfg) {
  return {run_padding_arm(cfg, cfg.baseline), run_padding_arm(cfg, cfg.padded)};
}

SyntheticDataset generate_synthetic_frames(const SyntheticDatasetConfig& cfg) {
  if (cfg.flowers < static_cast<int>(kMinClusterSize)) {
    throw Error(ErrorCode::TooFewPoints, "synthetic clusters need at least 2 flowers");
  }
  if (!(cfg.corrupt_fraction >= 0.0 && cfg.corrupt_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "corrupt fraction must be in [0, 1]");
  }
  NoiseModel noise;
  noise.sigma = cfg.noise;
  noise.validate();

  SyntheticDataset out;
  auto base_stream = rng::make_stream(cfg.seed, rng::Domain::InitialCluster, 0);
  out.base = simulate_initial_cluster(static_cast<std::size_t>(cfg.flowers), base_stream, cfg.range);
  out.base.source = cfg.name;

  out.frames.reserve(cfg.frames);
  for (std::size_t i = 0; i < cfg.frames; ++i) {
    auto stream = rng::make_stream(cfg.seed, rng::Domain::Perturbation, i);
    Cluster frame = perturb(out.base, noise, stream);
    frame.frame_id = static_cast<std::int64_t>(i);

    auto corrupt = rng::make_stream(cfg.seed, rng::Domain::Corruption, i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(corrupt) < cfg.corrupt_fraction) {
      if (unit(corrupt) < 0.5) {
        frame.points.pop_back();
      } else {
        std::uniform_real_distribution<double> coord(cfg.range.lo, cfg.range.hi);
        const double x = coord(corrupt);
        const double y = coord(corrupt);
        const double z = coord(corrupt);
        frame.points.emplace_back(x, y, z);
      }
    }
    out.frames.push_back(std::move(frame));
  }
  return out;
}

LoadedDataset generate_synthetic_dataset(const SyntheticDatasetConfig& cfg) {
  SyntheticDataset synth = generate_synthetic_frames(cfg);
  return prune_frames(std::move(synth.frames), cfg.flowers, cfg.name);
}

}  // namespace flowermatch
