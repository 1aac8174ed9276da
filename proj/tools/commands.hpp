#pragma once

// Subcommand bodies, separate from argument parsing so tests can drive them.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flowermatch/experiments.hpp"
#include "flowermatch/geometry.hpp"
#include "flowermatch/unscented.hpp"

namespace flowermatch::cli {

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  double confidence = 0.95;
  std::vector<double> noise;  // empty = command default
  std::optional<double> padding;
  double alpha = 1e-3;
  double beta = 2.0;
  double kappa = 0.0;
  std::optional<int> flowers;
  std::size_t trials = 10000;
  std::optional<std::filesystem::path> out;
  std::size_t threads = 0;
  double extent = 1.0;
  DepthModel depth_model = DepthModel::Ray;

  UtParams ut() const { return UtParams{alpha, beta, kappa, 1}; }
  /// First noise value, or `fallback`.
  double noise_or(double fallback) const { return noise.empty() ? fallback : noise.front(); }
  /// Throws InvalidParameter / InvalidConfidence before any computation.
  void validate() const;
};

struct PaddingStudyOptions {
  std::size_t samples = 10000;
  int min_flowers = 3;
  int max_flowers = 6;
  std::optional<double> padded_noise;
};

struct MatchOptions {
  std::filesystem::path reference;
  std::filesystem::path observed;
  std::optional<int> observed_flowers;
  bool unaligned = false;
  bool no_count_gate = false;
};

struct DescribeOptions {
  std::filesystem::path dataset;
  std::size_t frame = 0;
};

struct GenerateOptions {
  std::filesystem::path output;
  std::size_t frames = 1000;
  double corrupt = 0.0;
  std::string name = "synthetic";
};

// Each returns a process exit code. Data goes to files (or `out` when no
// output directory is set); diagnostics go to `err`.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_padding_study(const RunConfig& cfg, const PaddingStudyOptions& opts, std::ostream& out,
                      std::ostream& err);
int cmd_match(const RunConfig& cfg, const MatchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_describe(const RunConfig& cfg, const DescribeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_generate(const RunConfig& cfg, const GenerateOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace flowermatch::cli
