#include "flowermatch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <string>

#include "flowermatch/error.hpp"

namespace flowermatch {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEpsilon = 1e-16;

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by modified Lentz.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_args(double confidence, int dof) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidConfidence,
                "confidence must be a fraction in (0, 1), got " + std::to_string(confidence));
  }
  if (dof < 1) throw Error(ErrorCode::InvalidDof, "degrees of freedom must be >= 1");
}

}  // namespace

double frobenius_norm(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) sum += a(i, j) * a(i, j);
  }
  return std::sqrt(sum);
}

double frobenius_distance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                          const Eigen::Ref<const Eigen::MatrixXd>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrices differ in shape");
  }
  return frobenius_norm(a - b);
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidParameter, "gamma shape must be > 0");
  if (x < 0.0 || std::isnan(x)) throw Error(ErrorCode::InvalidParameter, "gamma argument must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi2_cdf(double x, int dof) {
  if (dof < 1) throw Error(ErrorCode::InvalidDof, "degrees of freedom must be >= 1");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_threshold_bisection(double confidence, int dof) {
  check_args(confidence, dof);
  double lo = 0.0;
  double hi = dof + 20.0 * std::sqrt(2.0 * dof);
  while (chi2_cdf(hi, dof) < confidence) hi *= 2.0;

  // Bisect to a bracket well under the 1e-8 target.
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf(mid, dof) < confidence) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double chi2_threshold(double confidence, int dof) {
  check_args(confidence, dof);
  if (dof == 2) return -2.0 * std::log1p(-confidence);
  return chi2_threshold_bisection(confidence, dof);
}

}  // namespace flowermatch

#include <Eigen/Eigenvalues>

namespace flowermatch {

ConfidenceEllipse confidence_ellipse(const Eigen::Vector2d& center, const Matrix2& cov,
                                     double confidence) {
  ConfidenceEllipse e;
  e.center = center;
  e.threshold = chi2_threshold(confidence, 2);
  const Matrix2 sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix2> es(sym);
  // Eigen sorts eigenvalues ascending.
  const double minor = std::max(0.0, es.eigenvalues()(0));
  const double major = std::max(0.0, es.eigenvalues()(1));
  e.semi_major = std::sqrt(major * e.threshold);
  e.semi_minor = std::sqrt(minor * e.threshold);
  const Eigen::Vector2d axis = es.eigenvectors().col(1);
  e.angle = std::atan2(axis.y(), axis.x());
  // Fold into (-pi/2, pi/2] so the sign of the eigenvector does not leak out.
  if (e.angle > std::numbers::pi / 2) e.angle -= std::numbers::pi;
  if (e.angle <= -std::numbers::pi / 2) e.angle += std::numbers::pi;
  return e;
}

}  // namespace flowermatch
