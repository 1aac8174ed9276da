#pragma once

// Centroid-relative cluster descriptor: inertia (sum of squared distances to
// the centroid, m^2) and mean distance to the centroid (m).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowermatch/geometry.hpp"

namespace flowermatch {

/// One frame's flower centers.
struct Cluster {
  std::vector<Point3> points;
  std::int64_t frame_id = 0;
  std::optional<std::string> source;

  std::size_t size() const { return points.size(); }

  /// Throws EmptyCluster / NonFinitePoint.
  void validate() const;
};

struct Descriptor {
  double inertia = 0.0;       // m^2
  double avg_distance = 0.0;  // m

  Eigen::Vector2d as_vector() const { return {inertia, avg_distance}; }
  static Descriptor from_vector(const Eigen::Vector2d& v) { return {v.x(), v.y()}; }

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

/// Smallest cluster the descriptor is defined for.
inline constexpr std::size_t kMinClusterSize = 2;

Point3 centroid(std::span<const Point3> points);
Point3 centroid(const Cluster& c);

Descriptor compute_descriptor(std::span<const Point3> points);
Descriptor compute_descriptor(const Cluster& c);

/// Descriptor of a flattened state [x1, y1, z1, x2, ...]; size must be a
/// multiple of 3. This is the map the unscented transform propagates.
Descriptor descriptor_from_state(std::span<const double> state);

/// Row-major flattening used as the UT state layout.
Eigen::VectorXd flatten(std::span<const Point3> points);

}  // namespace flowermatch
