#include "flowermatch/geometry.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "flowermatch/descriptor.hpp"
#include "flowermatch/error.hpp"

namespace flowermatch {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw Error(ErrorCode::InvalidIntrinsics, "focal lengths must be positive and finite");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorCode::InvalidIntrinsics, "principal point must be finite");
  }
}

CameraIntrinsics intrinsics_from_matrix(const Eigen::Matrix3d& k) {
  if (k(0, 1) != 0.0) {
    throw Error(ErrorCode::InvalidIntrinsics, "nonzero skew is not supported");
  }
  if (k(1, 0) != 0.0 || k(2, 0) != 0.0 || k(2, 1) != 0.0 || k(2, 2) != 1.0) {
    throw Error(ErrorCode::InvalidIntrinsics, "K must be upper triangular with K(2,2) = 1");
  }
  CameraIntrinsics out{k(0, 0), k(1, 1), k(0, 2), k(1, 2)};
  out.validate();
  return out;
}

CameraPose CameraPose::from_rotation_translation(const Eigen::Matrix3d& rotation,
                                                 const Eigen::Vector3d& translation) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return CameraPose(m);
}

void CameraPose::validate() const {
  if (!matrix.allFinite()) {
    throw Error(ErrorCode::InvalidPose, "pose contains non-finite entries");
  }
  if (matrix(3, 0) != 0.0 || matrix(3, 1) != 0.0 || matrix(3, 2) != 0.0 || matrix(3, 3) != 1.0) {
    throw Error(ErrorCode::InvalidPose, "bottom row must be [0, 0, 0, 1]");
  }
  const Eigen::Matrix3d r = rotation();
  const double ortho_err = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho_err > kOrthonormalityTolerance) {
    throw Error(ErrorCode::InvalidPose,
                "rotation block is not orthonormal (max |R^T R - I| = " + std::to_string(ortho_err) + ")");
  }
  if (std::abs(r.determinant() - 1.0) > kOrthonormalityTolerance) {
    throw Error(ErrorCode::InvalidPose, "rotation block must have determinant +1");
  }
}

Point3 lift_pixel(const PixelDetection& det, const CameraIntrinsics& k, DepthModel model) {
  k.validate();
  if (!(det.depth > 0.0) || !std::isfinite(det.depth)) {
    throw Error(ErrorCode::NonPositiveDepth, "depth must be positive, got " + std::to_string(det.depth));
  }
  if (!std::isfinite(det.u) || !std::isfinite(det.v)) {
    throw Error(ErrorCode::NonFinitePoint, "pixel coordinates must be finite");
  }
  // K^-1 [u v 1]^T for a zero-skew pinhole.
  const Eigen::Vector3d ray((det.u - k.cx) / k.fx, (det.v - k.cy) / k.fy, 1.0);
  switch (model) {
    case DepthModel::ZAxis:
      return det.depth * ray;
    case DepthModel::Ray:
    default:
      return det.depth * ray.normalized();
  }
}

Point3 to_world(const Point3& p, const CameraPose& pose) {
  pose.validate();
  return pose.rotation() * p + pose.translation();
}

Cluster frame_to_cluster(std::span<const PixelDetection> dets, const CameraIntrinsics& k,
                         const CameraPose& pose, DepthModel model) {
  if (dets.empty()) {
    throw Error(ErrorCode::EmptyFrame, "frame has no detections");
  }
  Cluster out;
  out.points.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    try {
      out.points.push_back(to_world(lift_pixel(dets[i], k, model), pose));
    } catch (const Error& e) {
      throw e.with_context("detection " + std::to_string(i));
    }
  }
  return out;
}

}  // namespace flowermatch
