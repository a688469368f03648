#pragma once

#include <vector>

#include <Eigen/Dense>

#include "absorbkit/types.hpp"

namespace absorbkit {

//! One completed iteration of the absorbing loop.
struct IterationRecord {
  int iteration = 0;              // 1-based
  double step_divergence = 0.0;   // divergence between successive Gaussian fits
  double mean_displacement = 0.0; // mean L2 move of a sample this iteration
  double min_weight = 0.0;        // smallest normalized weight after the update
  double max_weight = 0.0;        // largest normalized weight after the update
};

using IterationTrace = std::vector<IterationRecord>;

struct AbsorbResult {
  Dataset denoised;
  SampleWeights final_weights;
  IterationTrace trace;
  bool converged = false;
  int iterations_run = 0;
  //! Post-step positions per iteration; filled only when requested.
  std::vector<Dataset> snapshots;
};

//! Multiplies each weight by its sample's density and renormalizes;
//! increments the iteration counter. Densities must be positive and finite.
SampleWeights update_weights(const SampleWeights& weights, const Eigen::VectorXd& densities);

//! Log-domain variant: adds log densities to the log weights. This is the
//! form the run loop uses, since remote outliers can have linear densities
//! below the smallest representable double.
SampleWeights update_weights_log(const SampleWeights& weights, const Eigen::VectorXd& log_densities);

//! Re-estimates every sample as the weighted average of its k nearest
//! neighbors (weights taken from the neighbors). All new rows are computed
//! from the pre-step positions.
Dataset absorb_step(const Dataset& dataset, const SampleWeights& weights,
                    const NeighborhoodIndex& index);

//! The full absorbing loop: per iteration, update weights from leave-one-out
//! densities, rebuild the neighbor index on current positions, apply
//! absorb_step, then test the divergence between successive Gaussian fits
//! against epsilon.
AbsorbResult run(const Dataset& dataset, const AbsorbConfig& config,
                 bool capture_snapshots = false);

}  // namespace absorbkit
