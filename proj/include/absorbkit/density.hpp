#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "absorbkit/types.hpp"

namespace absorbkit {

//! Gaussian mixture with regularized covariances. Cholesky factors are
//! cached at construction for evaluation.
struct GmmModel {
  Eigen::VectorXd mixture_weights;        // sums to 1
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covariances;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> cholesky;  // one per component
  std::vector<double> log_norm_const;     // -(d/2)log(2pi) - (1/2)log|Sigma_j|
  std::vector<double> log_likelihood_path;  // training log-likelihood per EM iteration

  std::size_t components() const { return means.size(); }
  std::size_t dim() const { return means.empty() ? 0 : static_cast<std::size_t>(means[0].size()); }
};

//! Gaussian product-kernel density over a stored point set with one
//! bandwidth per dimension.
struct KdeModel {
  Eigen::MatrixXd points;
  Eigen::VectorXd bandwidth;  // all entries > 0 and finite

  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
};

//! A fitted global density realizing f(. | data).
using DensityModel = std::variant<GmmModel, KdeModel>;

//! Fits a Gaussian mixture by EM with k-means++-style seeding. Runs until
//! the relative log-likelihood change drops below 1e-8 or 200 iterations.
//! Covariances get cov_regularization added to their diagonals each M-step.
GmmModel fit_gmm(const Dataset& dataset, int m_components, double cov_regularization,
                 std::uint64_t seed);

//! Fits a KDE on the dataset with the given bandwidth rule.
KdeModel fit_kde(const Dataset& dataset, const BandwidthRule& rule);

//! Log density of the model at a point. Always finite.
double evaluate_log_density(const DensityModel& model, const Eigen::VectorXd& point);

//! Density of the model at a point; exp of the log form, so extremely remote
//! points can underflow to zero even though the log value stays finite.
double evaluate_density(const DensityModel& model, const Eigen::VectorXd& point);

//! Leave-one-out log density log f(x_i | data without row i) under the
//! configured backend. The KDE backend refits on the n-1 remaining rows
//! (exact leave-one-out); the GMM backend evaluates a model fitted on all n
//! rows, accepting the O(1/n) self-contribution bias.
double leave_one_out_log_density(const Dataset& dataset, std::size_t i, const AbsorbConfig& config);

//! Linear-domain counterpart of leave_one_out_log_density.
double leave_one_out_density(const Dataset& dataset, std::size_t i, const AbsorbConfig& config);

//! Leave-one-out log densities for every sample at once. For the GMM
//! backend this fits one model and evaluates it n times; per-point
//! evaluation is data-parallel.
Eigen::VectorXd leave_one_out_log_densities(const Dataset& dataset, const AbsorbConfig& config);

}  // namespace absorbkit
