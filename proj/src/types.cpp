#include "absorbkit/types.hpp"

#include <cmath>
#include <limits>

namespace absorbkit {

Dataset validate(Dataset dataset) {
  if (dataset.values.rows() < 1 || dataset.values.cols() < 1) {
    throw EmptyDataset();
  }
  for (Eigen::Index i = 0; i < dataset.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < dataset.values.cols(); ++j) {
      if (!std::isfinite(dataset.values(i, j))) {
        throw NonFiniteEntry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }
  return dataset;
}

SampleWeights SampleWeights::uniform(std::size_t n) {
  Eigen::VectorXd log_w =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), -std::log(static_cast<double>(n)));
  return SampleWeights(std::move(log_w), 0);
}

SampleWeights::SampleWeights(Eigen::VectorXd log_w, int iteration)
    : log_w_(std::move(log_w)), iteration_(iteration) {
  normalize();
}

double SampleWeights::weight(std::size_t i) const {
  if (i >= size()) throw IndexOutOfRange(i, size());
  return std::exp(log_w_(static_cast<Eigen::Index>(i)));
}

double SampleWeights::log_weight(std::size_t i) const {
  if (i >= size()) throw IndexOutOfRange(i, size());
  return log_w_(static_cast<Eigen::Index>(i));
}

void SampleWeights::normalize() {
  // log-sum-exp with max shift; idempotent and invariant to a constant
  // scaling of the underlying linear weights.
  const double shift = log_w_.maxCoeff();
  const double lse = shift + std::log((log_w_.array() - shift).exp().sum());
  log_w_.array() -= lse;
}

void validate_config(const AbsorbConfig& config, std::size_t n) {
  if (config.k < 1 || config.k >= n) {
    throw ConfigInvalid("k must satisfy 1 <= k <= n-1, got k=" + std::to_string(config.k) +
                        " for n=" + std::to_string(n));
  }
  if (!(config.epsilon > 0.0)) {
    throw ConfigInvalid("epsilon must be > 0");
  }
  if (config.max_iterations < 1) {
    throw ConfigInvalid("max_iterations must be >= 1");
  }
  if (config.cov_regularization < 0.0) {
    throw ConfigInvalid("cov_regularization must be >= 0");
  }
  if (const auto* gmm = std::get_if<GmmBackend>(&config.density_backend)) {
    if (gmm->components < 1) throw ConfigInvalid("GMM component count must be >= 1");
    if (static_cast<std::size_t>(gmm->components) > n) {
      throw ConfigInvalid("GMM component count exceeds sample count");
    }
  }
  if (const auto* kde = std::get_if<KdeBackend>(&config.density_backend)) {
    if (const auto* fixed = std::get_if<FixedBandwidth>(&kde->bandwidth)) {
      if (!(fixed->value > 0.0)) throw ConfigInvalid("fixed bandwidth must be > 0");
    }
  }
}

}  // namespace absorbkit
