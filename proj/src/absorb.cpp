#include "absorbkit/absorb.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "absorbkit/density.hpp"
#include "absorbkit/metrics.hpp"
#include "absorbkit/neighbors.hpp"
#include "absorbkit/parallel.hpp"

namespace absorbkit {

SampleWeights update_weights(const SampleWeights& weights, const Eigen::VectorXd& densities) {
  if (static_cast<std::size_t>(densities.size()) != weights.size()) {
    throw DimensionMismatch(weights.size(), static_cast<std::size_t>(densities.size()));
  }
  for (Eigen::Index i = 0; i < densities.size(); ++i) {
    if (!(densities(i) > 0.0) || !std::isfinite(densities(i))) {
      throw NonPositiveDensity(static_cast<std::size_t>(i));
    }
  }
  return update_weights_log(weights, densities.array().log().matrix());
}

SampleWeights update_weights_log(const SampleWeights& weights,
                                 const Eigen::VectorXd& log_densities) {
  if (static_cast<std::size_t>(log_densities.size()) != weights.size()) {
    throw DimensionMismatch(weights.size(), static_cast<std::size_t>(log_densities.size()));
  }
  for (Eigen::Index i = 0; i < log_densities.size(); ++i) {
    // -inf corresponds to a zero density; +inf/NaN to a broken model.
    if (!std::isfinite(log_densities(i))) {
      throw NonPositiveDensity(static_cast<std::size_t>(i));
    }
  }
  Eigen::VectorXd log_w = weights.log_weights() + log_densities;
  return SampleWeights(std::move(log_w), weights.iteration() + 1);
}

Dataset absorb_step(const Dataset& dataset, const SampleWeights& weights,
                    const NeighborhoodIndex& index) {
  const std::size_t n = dataset.n();
  if (weights.size() != n) {
    throw DimensionMismatch(n, weights.size());
  }
  if (index.n() != n) {
    throw DimensionMismatch(n, index.n());
  }

  const Eigen::MatrixXd& old_positions = dataset.values;
  const Eigen::VectorXd& log_w = weights.log_weights();
  Eigen::MatrixXd next(old_positions.rows(), old_positions.cols());

  // Every row reads pre-step positions only; the neighbor sums run in the
  // lists' (distance, index) order, shifted by the largest neighbor
  // log-weight so the denominator cannot underflow to zero.
  parallel_for(n, [&](std::size_t i) {
    const auto& nbrs = index.neighbors[i];
    double shift = log_w(static_cast<Eigen::Index>(i));
    for (const std::size_t j : nbrs) {
      shift = std::max(shift, log_w(static_cast<Eigen::Index>(j)));
    }
    if (!std::isfinite(shift)) {
      throw ZeroWeightNeighborhood(i);
    }
    const double self_w = std::exp(log_w(static_cast<Eigen::Index>(i)) - shift);
    Eigen::RowVectorXd numer = self_w * old_positions.row(static_cast<Eigen::Index>(i));
    double denom = self_w;
    for (const std::size_t j : nbrs) {
      const double w = std::exp(log_w(static_cast<Eigen::Index>(j)) - shift);
      numer += w * old_positions.row(static_cast<Eigen::Index>(j));
      denom += w;
    }
    next.row(static_cast<Eigen::Index>(i)) = numer / denom;
  });

  return Dataset(std::move(next));
}

AbsorbResult run(const Dataset& dataset, const AbsorbConfig& config, bool capture_snapshots) {
  Dataset current = validate(dataset);
  const std::size_t n = current.n();
  validate_config(config, n);

  AbsorbResult result{Dataset{}, SampleWeights::uniform(n), {}, false, 0, {}};
  GaussianSummary previous_fit = fit_gaussian(current, config.cov_regularization);

  for (int itn = 1; itn <= config.max_iterations; ++itn) {
    const Eigen::VectorXd log_densities = leave_one_out_log_densities(current, config);
    result.final_weights = update_weights_log(result.final_weights, log_densities);

    const NeighborhoodIndex index = build_index(current, config.k);
    Dataset next = absorb_step(current, result.final_weights, index);

    const GaussianSummary fit = fit_gaussian(next, config.cov_regularization);
    const double step_divergence = gaussian_divergence(fit, previous_fit);
    const double mean_displacement =
        (next.values - current.values).rowwise().norm().mean();
    const Eigen::VectorXd w = result.final_weights.weights();

    result.trace.push_back({itn, step_divergence, mean_displacement, w.minCoeff(), w.maxCoeff()});
    result.iterations_run = itn;

    current = std::move(next);
    previous_fit = fit;
    if (capture_snapshots) {
      result.snapshots.push_back(current);
    }

    if (step_divergence < config.epsilon) {
      result.converged = true;
      break;
    }
  }

  result.denoised = std::move(current);
  return result;
}

}  // namespace absorbkit
