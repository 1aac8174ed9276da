#pragma once

// Frame datasets: JSON Lines (or CSV) ingestion, flower-count pruning, and
// persistence of datasets and descriptor distributions.
//
// JSONL record, one per line:
//   {"version":1, "frame_id":7, "flowers":[[x,y,z], ...]}
//   {"version":1, "frame_id":8, "raw":{"pixels":[[u,v,depth], ...],
//        "intrinsics":{"fx":..,"fy":..,"cx":..,"cy":..} | {"K":[[..],[..],[..]]},
//        "pose":[[4 rows of 4]]}}
// An optional first line {"version":1,"type":"header","name":..,"flower_count":..}
// names the dataset. "timestamp" is accepted and ignored; unknown keys are
// ignored. Units are meters.
//
// CSV fallback (header row required): frame_id,flower_idx,x,y,z

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowermatch/descriptor.hpp"
#include "flowermatch/geometry.hpp"
#include "flowermatch/unscented.hpp"

namespace flowermatch {

inline constexpr int kSchemaVersion = 1;

struct Dataset {
  std::vector<Cluster> frames;
  int declared_flower_count = 0;
  std::string name;
};

struct PruneEntry {
  std::int64_t frame_id = 0;
  std::size_t found_count = 0;
};

struct PruneReport {
  std::size_t kept = 0;
  std::vector<PruneEntry> dropped;
};

struct LoadedDataset {
  Dataset dataset;
  PruneReport prune;
};

struct LoadOptions {
  /// Overrides the header's flower_count when set.
  std::optional<int> expected_count;
  DepthModel depth_model = DepthModel::Ray;
  /// Dataset name; defaults to the header name, then the file stem.
  std::optional<std::string> name;
};

enum class DatasetFormat { JsonLines, Csv };

/// Drops frames whose point count differs from `expected_count`.
/// Throws EmptyAfterPruning if nothing survives.
LoadedDataset prune_frames(std::vector<Cluster> frames, int expected_count, std::string name);

/// Parses records, lifts raw ones through the geometry module, then prunes.
/// Throws ParseError (with 1-based line number), SchemaVersionMismatch,
/// EmptyAfterPruning, or geometry errors with line context.
LoadedDataset read_dataset(std::istream& in, DatasetFormat format, const LoadOptions& opts = {});

/// Format chosen by extension: .csv is CSV, anything else JSON Lines.
/// Throws IoError if the file cannot be opened.
LoadedDataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Writes a header line and one "flowers" record per frame.
void write_dataset(std::ostream& out, const Dataset& d);
void save_dataset(const std::filesystem::path& path, const Dataset& d);

/// JSON document {"version":1,"mean":[..],"cov":[[..],[..]],"flower_count":N}.
std::string distribution_to_json(const DescriptorDistribution& dist);

/// Throws SchemaVersionMismatch for a wrong version or missing field,
/// InvalidDistribution if cov asymmetry exceeds 1e-9.
DescriptorDistribution distribution_from_json(std::string_view text);

void save_distribution(const std::filesystem::path& path, const DescriptorDistribution& dist);
DescriptorDistribution load_distribution(const std::filesystem::path& path);

/// Asymmetry accepted when reading a distribution back.
inline constexpr double kLoadSymmetryTolerance = 1e-9;

}  // namespace flowermatch
