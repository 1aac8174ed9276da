#pragma once

// Back-projection of pixel detections with depth into 3D, and the rigid
// camera-to-world transform.

#include <span>
#include <vector>

#include <Eigen/Core>

namespace flowermatch {

struct Cluster;

/// A position in meters.
using Point3 = Eigen::Vector3d;

/// Pinhole intrinsics with zero skew, all in pixels.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  /// Throws InvalidIntrinsics unless fx, fy > 0 and cx, cy finite.
  void validate() const;
};

/// Builds intrinsics from a full 3x3 K. Rejects nonzero skew and a bottom
/// row other than [0, 0, 1].
CameraIntrinsics intrinsics_from_matrix(const Eigen::Matrix3d& k);

/// Camera-to-world homogeneous transform.
struct CameraPose {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();

  static constexpr double kOrthonormalityTolerance = 1e-6;

  CameraPose() = default;
  explicit CameraPose(const Eigen::Matrix4d& m) : matrix(m) {}

  static CameraPose from_rotation_translation(const Eigen::Matrix3d& rotation,
                                              const Eigen::Vector3d& translation);

  Eigen::Matrix3d rotation() const { return matrix.topLeftCorner<3, 3>(); }
  Eigen::Vector3d translation() const { return matrix.topRightCorner<3, 1>(); }

  /// Throws InvalidPose if the bottom row is not exactly [0,0,0,1] or the
  /// rotation block is not orthonormal with det +1 (within tolerance).
  void validate() const;
};

struct PixelDetection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // meters
};

/// How a depth sample relates to the back-projected ray.
enum class DepthModel {
  Ray,    // distance along the viewing ray (default)
  ZAxis,  // distance along the camera optical axis
};

/// Lifts a detection into the camera frame. With DepthModel::Ray the result
/// has Euclidean norm equal to det.depth.
Point3 lift_pixel(const PixelDetection& det, const CameraIntrinsics& k,
                  DepthModel model = DepthModel::Ray);

/// rotation * p + translation.
Point3 to_world(const Point3& p, const CameraPose& pose);

/// Lifts and transforms every detection of one frame, preserving order.
/// Errors carry the offending detection index.
Cluster frame_to_cluster(std::span<const PixelDetection> dets, const CameraIntrinsics& k,
                         const CameraPose& pose, DepthModel model = DepthModel::Ray);

}  // namespace flowermatch
