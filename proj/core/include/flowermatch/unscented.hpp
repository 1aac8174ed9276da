#pragma once

// Scaled unscented transform: sigma-point generation, recombination, and the
// descriptor-space Gaussian of a cluster with isotropic (or per-axis)
// positional noise.

#include <cstddef>
#include <functional>
#include <optional>

#include <Eigen/Core>

#include "flowermatch/descriptor.hpp"

namespace flowermatch {

/// Sigma-point scaling. `dim` is the state length L.
struct UtParams {
  double alpha = 1e-3;
  double beta = 2.0;
  double kappa = 0.0;
  std::size_t dim = 1;

  UtParams with_dim(std::size_t l) const {
    UtParams p = *this;
    p.dim = l;
    return p;
  }

  /// The usual operating range for alpha is [1e-4, 1]; values outside are
  /// accepted but worth a warning at the tool layer.
  bool alpha_in_recommended_range() const { return alpha >= 1e-4 && alpha <= 1.0; }

  /// Throws InvalidParameter for dim == 0 or non-finite scalars.
  void validate() const;
};

/// alpha^2 (L + kappa) - L. Throws DegenerateScaling when L + lambda == 0.
double ut_lambda(const UtParams& p);

struct UtWeights {
  Eigen::VectorXd mean;  // length 2L+1
  Eigen::VectorXd cov;   // length 2L+1
};

UtWeights ut_weights(const UtParams& p);

/// 2L+1 sigma points stored column-wise: column 0 is the prior mean, columns
/// 1..L and L+1..2L are the +/- spreads along the Cholesky columns.
struct SigmaPointSet {
  Eigen::MatrixXd points;
  Eigen::VectorXd mean_weights;
  Eigen::VectorXd cov_weights;

  std::size_t dim() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t count() const { return static_cast<std::size_t>(points.cols()); }
};

/// Lower Cholesky factor of a symmetric PSD matrix. On failure, adds
/// 1e-12 * trace / L to the diagonal and retries (three times at most).
/// An all-zero matrix yields a zero factor. Throws CholeskyFailure.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& cov);

/// Throws DegenerateScaling if L + lambda <= 0, DimensionMismatch if shapes
/// disagree with p.dim, CholeskyFailure if cov is not PSD.
SigmaPointSet sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                           const UtParams& p);

struct GaussianEstimate {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Weighted mean and covariance of propagated sigma points (one column per
/// sigma point, same order as `set.points`).
///
/// Sums are taken relative to the propagated centre point y0. With
/// d_i = y_i - y0 and dbar = sum_{i>=1} w_i d_i:
///   mean = y0 + dbar
///   cov  = sum_{i>=1} w_i d_i d_i^T + (w0c - w0m - 1) dbar dbar^T
/// where w0c - w0m - 1 = beta - alpha^2. This equals the plain weighted sums
/// over all 2L+1 points, but the large negative centre weight of a small
/// alpha never enters a subtraction.
GaussianEstimate recombine(const SigmaPointSet& set, const Eigen::MatrixXd& propagated);

using StateMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Propagates every sigma point through `f` and recombines.
GaussianEstimate unscented_transform(const SigmaPointSet& set, const StateMap& f);

/// Per-coordinate Gaussian positional noise, standard deviation in meters.
struct NoiseModel {
  double sigma = 0.01;
  /// Optional per-axis (x, y, z) standard deviations overriding `sigma`.
  std::optional<Eigen::Vector3d> per_axis;

  Eigen::Vector3d axis_sigmas() const {
    return per_axis ? *per_axis : Eigen::Vector3d::Constant(sigma);
  }

  /// Throws InvalidNoise unless every standard deviation is finite and > 0.
  void validate() const;
};

/// Gaussian over (inertia, avg_distance) plus the flower count it describes.
struct DescriptorDistribution {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  int flower_count = 0;

  static constexpr double kSymmetryTolerance = 1e-12;
  static constexpr double kPsdTolerance = 1e-12;

  /// Throws InvalidDistribution if cov is asymmetric beyond `symmetry_tol`,
  /// has an eigenvalue below -kPsdTolerance, or anything is non-finite.
  void validate(double symmetry_tol = kSymmetryTolerance) const;
};

/// Runs the unscented transform with state = flattened 3N coordinates,
/// prior covariance diag(axis sigma^2), map = compute_descriptor. `padding`
/// is added to both diagonal entries of the result. `p.dim` is ignored and
/// replaced by 3N.
DescriptorDistribution ut_descriptor_distribution(const Cluster& c, const NoiseModel& noise,
                                                  const UtParams& p, double padding = 0.0);

}  // namespace flowermatch
