#include "absorbkit/metrics.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace absorbkit {

GaussianSummary fit_gaussian(const Dataset& dataset, double cov_regularization) {
  const auto n = static_cast<Eigen::Index>(dataset.n());
  const auto d = static_cast<Eigen::Index>(dataset.d());
  if (n < 2) throw TooFewSamples(static_cast<std::size_t>(n), 2);

  GaussianSummary summary;
  summary.mean = dataset.values.colwise().mean().transpose();
  const Eigen::MatrixXd centered = dataset.values.rowwise() - summary.mean.transpose();
  summary.cov = (centered.transpose() * centered) / static_cast<double>(n);
  summary.cov += cov_regularization * Eigen::MatrixXd::Identity(d, d);

  if (Eigen::LLT<Eigen::MatrixXd>(summary.cov).info() != Eigen::Success) {
    throw NotPositiveDefinite();
  }
  return summary;
}

double gaussian_divergence(const GaussianSummary& p, const GaussianSummary& q) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  if (p.dim() != q.dim()) throw DimensionMismatch(p.dim(), q.dim());
  if (p.cov.rows() != d || p.cov.cols() != d || q.cov.rows() != d || q.cov.cols() != d) {
    throw DimensionMismatch(static_cast<std::size_t>(d), static_cast<std::size_t>(p.cov.rows()));
  }

  const Eigen::LLT<Eigen::MatrixXd> llt_p(p.cov);
  const Eigen::LLT<Eigen::MatrixXd> llt_q(q.cov);
  if (llt_p.info() != Eigen::Success || llt_q.info() != Eigen::Success) {
    throw NotPositiveDefinite();
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd p_inv = llt_p.solve(identity);
  const Eigen::MatrixXd q_inv = llt_q.solve(identity);

  const double trace_term = (p_inv * q.cov).trace() + (q_inv * p.cov).trace() -
                            2.0 * static_cast<double>(d);
  const Eigen::VectorXd mean_diff = p.mean - q.mean;
  const double quad_term = mean_diff.dot((p_inv + q_inv) * mean_diff);
  return 0.5 * trace_term + 0.5 * quad_term;
}

double dataset_divergence(const Dataset& a, const Dataset& b, double cov_regularization) {
  if (a.d() != b.d()) throw DimensionMismatch(a.d(), b.d());
  return gaussian_divergence(fit_gaussian(a, cov_regularization),
                             fit_gaussian(b, cov_regularization));
}

}  // namespace absorbkit
