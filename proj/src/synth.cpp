#include "absorbkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "absorbkit/random.hpp"

namespace absorbkit {

std::size_t ContaminationReport::outlier_count() const {
  return static_cast<std::size_t>(std::count(outlier_mask.begin(), outlier_mask.end(), true));
}

std::vector<std::size_t> ContaminationReport::outlier_indices() const {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < outlier_mask.size(); ++i) {
    if (outlier_mask[i]) indices.push_back(i);
  }
  return indices;
}

Dataset gen_gaussian(std::size_t n, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                     std::uint64_t seed) {
  if (n < 1) throw EmptyDataset();
  const Eigen::Index d = mean.size();
  if (cov.rows() != d || cov.cols() != d) {
    throw DimensionMismatch(static_cast<std::size_t>(d), static_cast<std::size_t>(cov.rows()));
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite();
  const Eigen::MatrixXd chol = llt.matrixL();

  Rng rng(seed);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    Eigen::VectorXd z(d);
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    values.row(i) = (mean + chol * z).transpose();
  }
  return Dataset(std::move(values));
}

Dataset gen_nonlinear(std::size_t n, NonlinearShape shape, double noise_sigma,
                      std::uint64_t seed) {
  if (n < 1) throw EmptyDataset();
  if (noise_sigma < 0.0) throw ConfigInvalid("noise_sigma must be >= 0");

  Rng rng(seed);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), 2);

  if (shape == NonlinearShape::SineCurve) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double t = (2.0 * rng.uniform01() - 1.0) * std::numbers::pi;
      values(i, 0) = t;
      values(i, 1) = std::sin(t);
    }
  } else {
    // First half on the upper unit circle, rest on the lower circle
    // centered at (1, 0.5); the usual two-moons layout.
    const auto first = static_cast<Eigen::Index>((n + 1) / 2);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double t = rng.uniform01() * std::numbers::pi;
      if (i < first) {
        values(i, 0) = std::cos(t);
        values(i, 1) = std::sin(t);
      } else {
        values(i, 0) = 1.0 - std::cos(t);
        values(i, 1) = 0.5 - std::sin(t);
      }
    }
  }

  if (noise_sigma > 0.0) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      values(i, 0) += noise_sigma * rng.normal();
      values(i, 1) += noise_sigma * rng.normal();
    }
  }
  return Dataset(std::move(values));
}

std::pair<Dataset, ContaminationReport> contaminate(const Dataset& dataset, double rate,
                                                    double noise_sigma, std::uint64_t seed) {
  const std::size_t n = dataset.n();
  if (!(rate > 0.0) || !(rate < 1.0)) throw RateOutOfRange(rate);
  const auto count = static_cast<std::size_t>(std::lround(rate * static_cast<double>(n)));
  if (count < 1) throw RateOutOfRange(rate);
  if (!(noise_sigma > 0.0)) throw ConfigInvalid("noise_sigma must be > 0");

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  ContaminationReport report;
  report.outlier_mask.assign(n, false);
  report.rate = rate;
  report.noise_sigma = noise_sigma;
  report.seed = seed;
  for (std::size_t r = 0; r < count; ++r) {
    report.outlier_mask[order[r]] = true;
  }

  Dataset contaminated = dataset;
  // Perturb in ascending row order so the draw sequence does not depend on
  // the shuffle layout beyond which rows were picked.
  for (std::size_t i = 0; i < n; ++i) {
    if (!report.outlier_mask[i]) continue;
    for (Eigen::Index j = 0; j < contaminated.values.cols(); ++j) {
      contaminated.values(static_cast<Eigen::Index>(i), j) += noise_sigma * rng.normal();
    }
  }
  return {std::move(contaminated), std::move(report)};
}

double default_noise_sigma(const Dataset& dataset) {
  const auto n = static_cast<double>(dataset.n());
  const Eigen::RowVectorXd mean = dataset.values.colwise().mean();
  const Eigen::MatrixXd centered = dataset.values.rowwise() - mean;
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const double max_variance = solver.eigenvalues().maxCoeff();
  return 6.0 * std::sqrt(std::max(max_variance, 0.0));
}

}  // namespace absorbkit
