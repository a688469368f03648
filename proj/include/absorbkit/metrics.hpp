#pragma once

#include "absorbkit/types.hpp"

namespace absorbkit {

//! Column means and biased (1/n) covariance with a regularization diagonal.
GaussianSummary fit_gaussian(const Dataset& dataset, double cov_regularization);

//! Symmetric Gaussian divergence
//!   1/2 trace(Sp^-1 Sq + Sq^-1 Sp - 2I)
//!   + 1/2 (mp - mq)^T (Sp^-1 + Sq^-1) (mp - mq),
//! which equals KL(p||q) + KL(q||p) for Gaussians. Zero iff p == q.
double gaussian_divergence(const GaussianSummary& p, const GaussianSummary& q);

//! Divergence between single-Gaussian fits of two datasets.
double dataset_divergence(const Dataset& a, const Dataset& b, double cov_regularization);

}  // namespace absorbkit
