#include "flowermatch/descriptor.hpp"

#include <cmath>
#include <string>

#include "flowermatch/error.hpp"

namespace flowermatch {

namespace {

void require_descriptor_size(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyCluster, "cluster has no points");
  if (n < kMinClusterSize) {
    throw Error(ErrorCode::TooFewPoints,
                "descriptor needs at least " + std::to_string(kMinClusterSize) + " points, got " +
                    std::to_string(n));
  }
}

}  // namespace

void Cluster::validate() const {
  if (points.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      throw Error(ErrorCode::NonFinitePoint, "point " + std::to_string(i) + " is not finite");
    }
  }
}

Point3 centroid(std::span<const Point3> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyCluster, "cannot take centroid of empty cluster");
  Point3 sum = Point3::Zero();
  for (const auto& p : points) sum += p;
  return sum / static_cast<double>(points.size());
}

Point3 centroid(const Cluster& c) { return centroid(std::span<const Point3>(c.points)); }

Descriptor compute_descriptor(std::span<const Point3> points) {
  require_descriptor_size(points.size());
  const Point3 c = centroid(points);
  double inertia = 0.0;
  double dist_sum = 0.0;
  for (const auto& p : points) {
    const double d2 = (p - c).squaredNorm();
    inertia += d2;
    dist_sum += std::sqrt(d2);
  }
  return {inertia, dist_sum / static_cast<double>(points.size())};
}

Descriptor compute_descriptor(const Cluster& c) {
  return compute_descriptor(std::span<const Point3>(c.points));
}

Descriptor descriptor_from_state(std::span<const double> state) {
  if (state.size() % 3 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "state size must be a multiple of 3");
  }
  const std::size_t n = state.size() / 3;
  require_descriptor_size(n);

  double cx = 0.0, cy = 0.0, cz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cx += state[3 * i];
    cy += state[3 * i + 1];
    cz += state[3 * i + 2];
  }
  const auto count = static_cast<double>(n);
  cx /= count;
  cy /= count;
  cz /= count;

  double inertia = 0.0;
  double dist_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = state[3 * i] - cx;
    const double dy = state[3 * i + 1] - cy;
    const double dz = state[3 * i + 2] - cz;
    const double d2 = dx * dx + dy * dy + dz * dz;
    inertia += d2;
    dist_sum += std::sqrt(d2);
  }
  return {inertia, dist_sum / count};
}

Eigen::VectorXd flatten(std::span<const Point3> points) {
  Eigen::VectorXd out(3 * static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.segment<3>(3 * static_cast<Eigen::Index>(i)) = points[i];
  }
  return out;
}

}  // namespace flowermatch
