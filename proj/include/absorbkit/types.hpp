#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "absorbkit/errors.hpp"

namespace absorbkit {

//! A fixed n-by-d matrix of finite real-valued samples, one row per sample.
struct Dataset {
  Eigen::MatrixXd values;

  Dataset() = default;
  explicit Dataset(Eigen::MatrixXd m) : values(std::move(m)) {}

  std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(values.cols()); }

  Eigen::VectorXd row(std::size_t i) const {
    return values.row(static_cast<Eigen::Index>(i)).transpose();
  }
};

//! Checks finiteness and non-emptiness; returns the dataset unchanged on success.
Dataset validate(Dataset dataset);

//! Per-sample importance weights, kept in log domain so that repeated
//! multiplication by small densities never underflows. Exposed weights are
//! always the normalized exp(log_w).
class SampleWeights {
public:
  //! Uniform 1/n weights at iteration 0.
  static SampleWeights uniform(std::size_t n);

  //! Constructs from raw log-weights; normalizes immediately.
  SampleWeights(Eigen::VectorXd log_w, int iteration);

  std::size_t size() const { return static_cast<std::size_t>(log_w_.size()); }
  int iteration() const { return iteration_; }

  const Eigen::VectorXd& log_weights() const { return log_w_; }

  //! Normalized linear-domain weights; sums to 1 within 1e-12.
  Eigen::VectorXd weights() const { return log_w_.array().exp(); }

  double weight(std::size_t i) const;
  double log_weight(std::size_t i) const;

private:
  void normalize();

  Eigen::VectorXd log_w_;
  int iteration_ = 0;
};

//! For every sample, the indices of its k nearest neighbors, sorted by
//! ascending distance with ties broken by ascending index. A sample never
//! appears in its own list.
struct NeighborhoodIndex {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> neighbors;

  std::size_t n() const { return neighbors.size(); }
};

//! Moments (mu, Sigma) of a single Gaussian fitted to a dataset.
struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  std::size_t dim() const { return static_cast<std::size_t>(mean.size()); }
};

struct ScottBandwidth {};

struct FixedBandwidth {
  double value = 1.0;
};

//! Bandwidth selection for the KDE backend. Scott's rule uses the factor
//! n^(-1/(d+4)) scaled by the per-dimension standard deviation.
using BandwidthRule = std::variant<ScottBandwidth, FixedBandwidth>;

struct GmmBackend {
  int components = 1;
};

struct KdeBackend {
  BandwidthRule bandwidth = ScottBandwidth{};
};

using DensityBackend = std::variant<GmmBackend, KdeBackend>;

//! Parameters of one absorbing run. Every random choice downstream derives
//! from `seed`.
struct AbsorbConfig {
  std::size_t k = 10;
  double epsilon = 1e-3;
  int max_iterations = 50;
  DensityBackend density_backend = GmmBackend{1};
  double cov_regularization = 1e-6;
  std::uint64_t seed = 0;
};

//! Throws ConfigInvalid unless the config is usable on an n-sample dataset.
void validate_config(const AbsorbConfig& config, std::size_t n);

}  // namespace absorbkit
