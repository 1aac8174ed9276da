#include "flowermatch/unscented.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "flowermatch/error.hpp"

namespace flowermatch {

void UtParams::validate() const {
  if (dim == 0) throw Error(ErrorCode::InvalidParameter, "state dimension L must be >= 1");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::InvalidParameter, "alpha, beta and kappa must be finite");
  }
  if (alpha == 0.0) throw Error(ErrorCode::InvalidParameter, "alpha must be nonzero");
}

double ut_lambda(const UtParams& p) {
  p.validate();
  const auto l = static_cast<double>(p.dim);
  const double lambda = p.alpha * p.alpha * (l + p.kappa) - l;
  if (l + lambda == 0.0) {
    throw Error(ErrorCode::DegenerateScaling, "L + lambda == 0; raise kappa or alpha");
  }
  return lambda;
}

UtWeights ut_weights(const UtParams& p) {
  const double lambda = ut_lambda(p);
  const auto l = static_cast<double>(p.dim);
  const auto n = static_cast<Eigen::Index>(2 * p.dim + 1);

  UtWeights w;
  w.mean = Eigen::VectorXd::Constant(n, 1.0 / (2.0 * (l + lambda)));
  w.cov = w.mean;
  w.mean(0) = lambda / (l + lambda);
  w.cov(0) = lambda / (l + lambda) + 1.0 - p.alpha * p.alpha + p.beta;
  return w;
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "covariance must be square and non-empty");
  }
  if (!cov.allFinite()) throw Error(ErrorCode::CholeskyFailure, "covariance has non-finite entries");

  const double scale = cov.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorCode::CholeskyFailure, "covariance is not symmetric");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();

  const double jitter = 1e-12 * cov.trace() / static_cast<double>(cov.rows());
  Eigen::MatrixXd work = cov;
  for (int attempt = 0; attempt < 3 && jitter > 0.0; ++attempt) {
    work.diagonal().array() += jitter;
    llt.compute(work);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw Error(ErrorCode::CholeskyFailure, "covariance is not positive semi-definite");
}

SigmaPointSet sigma_points(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                           const UtParams& p) {
  p.validate();
  if (static_cast<std::size_t>(mean.size()) != p.dim || cov.rows() != mean.size() ||
      cov.cols() != mean.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "mean/covariance shape does not match L = " + std::to_string(p.dim));
  }
  const double lambda = ut_lambda(p);
  const auto l = static_cast<double>(p.dim);
  if (!(l + lambda > 0.0)) {
    throw Error(ErrorCode::DegenerateScaling,
                "L + lambda = " + std::to_string(l + lambda) +
                    " <= 0 has no square root; raise kappa");
  }

  const Eigen::MatrixXd spread = std::sqrt(l + lambda) * cholesky_with_jitter(cov);
  const auto dim = mean.size();

  SigmaPointSet set;
  set.points.resize(dim, 2 * dim + 1);
  set.points.col(0) = mean;
  for (Eigen::Index i = 0; i < dim; ++i) {
    set.points.col(1 + i) = mean + spread.col(i);
    set.points.col(1 + dim + i) = mean - spread.col(i);
  }
  auto w = ut_weights(p);
  set.mean_weights = std::move(w.mean);
  set.cov_weights = std::move(w.cov);
  return set;
}

GaussianEstimate recombine(const SigmaPointSet& set, const Eigen::MatrixXd& propagated) {
  const auto n = propagated.cols();
  if (n != set.points.cols() || n == 0) {
    throw Error(ErrorCode::DimensionMismatch, "propagated column count must equal sigma point count");
  }
  const auto out_dim = propagated.rows();
  const Eigen::VectorXd y0 = propagated.col(0);

  Eigen::VectorXd dbar = Eigen::VectorXd::Zero(out_dim);
  Eigen::VectorXd cov_first = Eigen::VectorXd::Zero(out_dim);
  Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(out_dim, out_dim);
  for (Eigen::Index i = 1; i < n; ++i) {
    const Eigen::VectorXd d = propagated.col(i) - y0;
    dbar += set.mean_weights(i) * d;
    cov_first += set.cov_weights(i) * d;
    outer.noalias() += set.cov_weights(i) * d * d.transpose();
  }

  // sum_i wc_i (d_i - dbar)(d_i - dbar)^T expanded; d_0 = 0.
  const double wc_sum = set.cov_weights.sum();
  GaussianEstimate est;
  est.mean = y0 + dbar;
  est.cov = outer - cov_first * dbar.transpose() - dbar * cov_first.transpose() +
            wc_sum * dbar * dbar.transpose();
  est.cov = 0.5 * (est.cov + est.cov.transpose()).eval();
  return est;
}

GaussianEstimate unscented_transform(const SigmaPointSet& set, const StateMap& f) {
  Eigen::MatrixXd propagated;
  for (Eigen::Index i = 0; i < set.points.cols(); ++i) {
    const Eigen::VectorXd y = f(set.points.col(i));
    if (i == 0) propagated.resize(y.size(), set.points.cols());
    if (y.size() != propagated.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "state map returned inconsistent output sizes");
    }
    propagated.col(i) = y;
  }
  return recombine(set, propagated);
}

void NoiseModel::validate() const {
  const Eigen::Vector3d s = axis_sigmas();
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(s(i)) || !(s(i) > 0.0)) {
      throw Error(ErrorCode::InvalidNoise, "noise standard deviation must be finite and > 0");
    }
  }
}

void DescriptorDistribution::validate(double symmetry_tol) const {
  if (!mean.allFinite() || !cov.allFinite()) {
    throw Error(ErrorCode::InvalidDistribution, "distribution has non-finite entries");
  }
  if (std::abs(cov(0, 1) - cov(1, 0)) > symmetry_tol) {
    throw Error(ErrorCode::InvalidDistribution, "covariance is not symmetric");
  }
  const Eigen::Matrix2d sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTolerance) {
    throw Error(ErrorCode::InvalidDistribution, "covariance is not positive semi-definite");
  }
  if (flower_count < 0) throw Error(ErrorCode::InvalidDistribution, "negative flower count");
}

namespace {

using Descriptor2L = std::array<long double, 2>;

// (inertia, avg_distance) of the state x + sign * offset, accumulated in
// long double. `offset` may be null.
Descriptor2L descriptor_extended(const Eigen::VectorXd& x, const double* offset, double sign) {
  const auto n = x.size() / 3;
  std::vector<std::array<long double, 3>> pts(static_cast<std::size_t>(n));
  std::array<long double, 3> c{0.0L, 0.0L, 0.0L};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) {
      long double v = x(3 * i + k);
      if (offset) v += static_cast<long double>(sign) * offset[3 * i + k];
      pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = v;
      c[static_cast<std::size_t>(k)] += v;
    }
  }
  for (auto& v : c) v /= static_cast<long double>(n);
  long double inertia = 0.0L, dist = 0.0L;
  for (const auto& q : pts) {
    long double r2 = 0.0L;
    for (std::size_t k = 0; k < 3; ++k) r2 += (q[k] - c[k]) * (q[k] - c[k]);
    inertia += r2;
    dist += std::sqrt(r2);
  }
  return {inertia, dist / static_cast<long double>(n)};
}

}  // namespace

DescriptorDistribution ut_descriptor_distribution(const Cluster& c, const NoiseModel& noise,
                                                  const UtParams& p, double padding) {
  c.validate();
  noise.validate();
  if (!std::isfinite(padding) || padding < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "padding must be finite and >= 0");
  }
  if (c.size() < kMinClusterSize) {
    throw Error(ErrorCode::TooFewPoints, "descriptor needs at least 2 points");
  }

  const std::size_t l = 3 * c.size();
  // The descriptor ignores translation, so work in centroid coordinates: the
  // sigma-point offsets are tiny and would otherwise be added to (and then
  // cancelled from) coordinates of arbitrary magnitude.
  const Point3 center = centroid(c);
  std::vector<Point3> centered(c.points);
  for (auto& q : centered) q -= center;
  const Eigen::VectorXd prior_mean = flatten(centered);
  const Eigen::Vector3d variances = noise.axis_sigmas().array().square();
  Eigen::VectorXd diag(static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < c.size(); ++i) diag.segment<3>(3 * static_cast<Eigen::Index>(i)) = variances;
  const Eigen::MatrixXd prior_cov = diag.asDiagonal();

  const UtParams q = p.with_dim(l);
  const SigmaPointSet set = sigma_points(prior_mean, prior_cov, q);

  // Propagate offsets from the centre point in extended precision; with a
  // small alpha the mean weights are ~1/alpha^2, so rounding each descriptor
  // to double first would dominate the result.
  const auto n = static_cast<Eigen::Index>(l);
  const Eigen::MatrixXd spread =
      std::sqrt(static_cast<double>(l) + ut_lambda(q)) * cholesky_with_jitter(prior_cov);
  const Descriptor2L y0 = descriptor_extended(prior_mean, nullptr, 0.0);
  Eigen::MatrixXd propagated = Eigen::MatrixXd::Zero(2, set.points.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Descriptor2L plus = descriptor_extended(prior_mean, spread.col(i).data(), 1.0);
    const Descriptor2L minus = descriptor_extended(prior_mean, spread.col(i).data(), -1.0);
    for (int k = 0; k < 2; ++k) {
      propagated(k, 1 + i) = static_cast<double>(plus[k] - y0[k]);
      propagated(k, 1 + n + i) = static_cast<double>(minus[k] - y0[k]);
    }
  }
  const GaussianEstimate est = recombine(set, propagated);

  DescriptorDistribution out;
  out.mean = est.mean + Eigen::Vector2d(static_cast<double>(y0[0]), static_cast<double>(y0[1]));
  out.cov = est.cov;
  out.cov.diagonal().array() += padding;
  out.flower_count = static_cast<int>(c.size());
  out.validate();
  return out;
}

}  // namespace flowermatch
