#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "absorbkit/types.hpp"

namespace absorbkit {

enum class NonlinearShape { SineCurve, TwoMoons };

//! Which rows were perturbed, and with what.
struct ContaminationReport {
  std::vector<bool> outlier_mask;  // true = perturbed
  double rate = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  std::size_t outlier_count() const;
  std::vector<std::size_t> outlier_indices() const;
};

//! n i.i.d. draws from N(mean, cov).
Dataset gen_gaussian(std::size_t n, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                     std::uint64_t seed);

//! Points on a 1-D manifold in 2-D plus isotropic Gaussian jitter.
//! SineCurve: (t, sin t) with t uniform on [-pi, pi]. TwoMoons: two unit
//! half-circles, the lower one centered at (1, 0.5).
Dataset gen_nonlinear(std::size_t n, NonlinearShape shape, double noise_sigma, std::uint64_t seed);

//! Adds N(0, noise_sigma^2 I) to round(rate*n) rows chosen uniformly by
//! seed; every unselected row stays bit-identical.
std::pair<Dataset, ContaminationReport> contaminate(const Dataset& dataset, double rate,
                                                    double noise_sigma, std::uint64_t seed);

//! Default contamination scale: 6 standard deviations of the data's
//! largest-variance direction.
double default_noise_sigma(const Dataset& dataset);

}  // namespace absorbkit
