#pragma once

// Matrix comparison and chi-square quantiles.

#include <Eigen/Core>

namespace flowermatch {

using Matrix2 = Eigen::Matrix2d;

/// sqrt(sum |a_ij|^2).
double frobenius_norm(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// frobenius_norm(a - b); throws DimensionMismatch on shape mismatch.
double frobenius_distance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                          const Eigen::Ref<const Eigen::MatrixXd>& b);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. Series
/// expansion below x = a + 1, Lentz continued fraction for Q above.
double regularized_gamma_p(double a, double x);

/// P(chi^2_dof <= x).
double chi2_cdf(double x, int dof);

/// t with P(chi^2_dof <= t) = confidence. Closed form -2 ln(1 - confidence)
/// for dof = 2, bisection otherwise. Throws InvalidConfidence unless
/// 0 < confidence < 1, InvalidDof unless dof >= 1.
double chi2_threshold(double confidence, int dof);

/// Always inverts chi2_cdf by bisection on [0, dof + 20 sqrt(2 dof)]
/// (extended if needed) to an absolute tolerance well under 1e-8.
double chi2_threshold_bisection(double confidence, int dof);

}  // namespace flowermatch

namespace flowermatch {

/// Axes of the region {x : (x - center)^T cov^-1 (x - center) <= threshold}.
struct ConfidenceEllipse {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  /// Semi-axis lengths sqrt(eigenvalue * threshold), major first.
  double semi_major = 0.0;
  double semi_minor = 0.0;
  /// Angle of the major axis from the first coordinate axis, radians.
  double angle = 0.0;
  double threshold = 0.0;
};

/// Throws InvalidConfidence; eigenvalues below zero are clamped to zero.
ConfidenceEllipse confidence_ellipse(const Eigen::Vector2d& center, const Matrix2& cov,
                                     double confidence);

}  // namespace flowermatch
