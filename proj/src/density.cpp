#include "absorbkit/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "absorbkit/parallel.hpp"
#include "absorbkit/random.hpp"

namespace absorbkit {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
constexpr int kMaxEmIterations = 200;
constexpr double kEmRelTolerance = 1e-8;

template <typename Derived>
double log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  const double shift = v.maxCoeff();
  if (!std::isfinite(shift)) return shift;
  return shift + std::log((v.derived().array() - shift).exp().sum());
}

struct ComponentEvaluator {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_norm_const = 0.0;  // -(d/2) log(2pi) - (1/2) log|Sigma|

  static ComponentEvaluator make(const Eigen::MatrixXd& cov) {
    ComponentEvaluator ev;
    ev.llt.compute(cov);
    if (ev.llt.info() != Eigen::Success) {
      throw NotPositiveDefinite();
    }
    const double half_log_det = ev.llt.matrixLLT().diagonal().array().log().sum();
    ev.log_norm_const = -0.5 * static_cast<double>(cov.rows()) * kLog2Pi - half_log_det;
    return ev;
  }

  double log_pdf(const Eigen::VectorXd& diff) const {
    const Eigen::VectorXd y = llt.matrixL().solve(diff);
    return log_norm_const - 0.5 * y.squaredNorm();
  }
};

//! k-means++-style seeding: first center uniform, later centers drawn with
//! probability proportional to the squared distance to the nearest chosen
//! center.
std::vector<std::size_t> seed_centers(const Eigen::MatrixXd& x, int m, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> centers;
  centers.reserve(static_cast<std::size_t>(m));
  centers.push_back(rng.uniform_index(n));

  Eigen::VectorXd min_sq = (x.rowwise() - x.row(static_cast<Eigen::Index>(centers[0])))
                               .rowwise()
                               .squaredNorm();
  while (centers.size() < static_cast<std::size_t>(m)) {
    const double total = min_sq.sum();
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      for (Eigen::Index i = 0; i < min_sq.size(); ++i) {
        target -= min_sq(i);
        if (target <= 0.0) {
          pick = static_cast<std::size_t>(i);
          break;
        }
      }
    } else {
      pick = rng.uniform_index(n);  // all remaining points coincide with a center
    }
    centers.push_back(pick);
    const Eigen::VectorXd sq =
        (x.rowwise() - x.row(static_cast<Eigen::Index>(pick))).rowwise().squaredNorm();
    min_sq = min_sq.cwiseMin(sq);
  }
  return centers;
}

}  // namespace

GmmModel fit_gmm(const Dataset& dataset, int m_components, double cov_regularization,
                 std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(dataset.n());
  const auto d = static_cast<Eigen::Index>(dataset.d());
  if (m_components < 1) {
    throw ConfigInvalid("GMM component count must be >= 1");
  }
  const auto m = static_cast<Eigen::Index>(m_components);
  if (n < m) {
    throw TooFewSamples(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  }
  const Eigen::MatrixXd& x = dataset.values;

  GmmModel model;
  model.mixture_weights = Eigen::VectorXd::Zero(m);
  model.means.assign(static_cast<std::size_t>(m), Eigen::VectorXd::Zero(d));
  model.covariances.assign(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(d, d));

  // Hard assignment to the seeded centers provides the initial parameters.
  Rng rng(seed);
  const std::vector<std::size_t> centers = seed_centers(x, m_components, rng);
  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m; ++j) {
      const double sq =
          (x.row(i) - x.row(static_cast<Eigen::Index>(centers[static_cast<std::size_t>(j)])))
              .squaredNorm();
      if (sq < best) {
        best = sq;
        assignment[static_cast<std::size_t>(i)] = j;
      }
    }
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index j = assignment[static_cast<std::size_t>(i)];
      counts(j) += 1.0;
      model.means[static_cast<std::size_t>(j)] += x.row(i).transpose();
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      if (counts(j) < static_cast<double>(d) + 1.0 && cov_regularization == 0.0) {
        throw DegenerateComponent(static_cast<std::size_t>(j));
      }
      model.means[static_cast<std::size_t>(j)] /= std::max(counts(j), 1.0);
      model.mixture_weights(j) = counts(j) / static_cast<double>(n);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)]);
      const Eigen::VectorXd diff = x.row(i).transpose() - model.means[j];
      model.covariances[j] += diff * diff.transpose();
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      model.covariances[static_cast<std::size_t>(j)] /= std::max(counts(j), 1.0);
      model.covariances[static_cast<std::size_t>(j)] += cov_regularization * identity;
    }
    // An empty cluster cannot happen with k-means++ seeding (every center's
    // own point has distance zero to it), but a zero mixture weight would
    // break the E-step, so fall back to a uniform share.
    for (Eigen::Index j = 0; j < m; ++j) {
      if (model.mixture_weights(j) <= 0.0) {
        model.mixture_weights(j) = 1.0 / static_cast<double>(n);
      }
    }
    model.mixture_weights /= model.mixture_weights.sum();
  }

  Eigen::MatrixXd log_resp(n, m);
  Eigen::MatrixXd resp(n, m);
  double previous_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < kMaxEmIterations; ++iter) {
    // E-step in log domain.
    std::vector<ComponentEvaluator> evals;
    evals.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
      evals.push_back(ComponentEvaluator::make(model.covariances[static_cast<std::size_t>(j)]));
    }
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd diff =
            x.row(i).transpose() - model.means[static_cast<std::size_t>(j)];
        log_resp(i, j) = std::log(model.mixture_weights(j)) +
                         evals[static_cast<std::size_t>(j)].log_pdf(diff);
      }
      const double lse = log_sum_exp(log_resp.row(i));
      ll += lse;
      resp.row(i) = (log_resp.row(i).array() - lse).exp();
    }
    model.log_likelihood_path.push_back(ll);

    if (std::abs(ll - previous_ll) <= kEmRelTolerance * (1.0 + std::abs(ll))) {
      break;
    }
    previous_ll = ll;

    // M-step with a regularization diagonal on every covariance.
    for (Eigen::Index j = 0; j < m; ++j) {
      double nj = resp.col(j).sum();
      if (nj < static_cast<double>(d) + 1.0 && cov_regularization == 0.0) {
        throw DegenerateComponent(static_cast<std::size_t>(j));
      }
      model.mixture_weights(j) = nj / static_cast<double>(n);
      nj = std::max(nj, 1e-12);  // a starved component keeps finite parameters
      Eigen::VectorXd mu = (resp.col(j).transpose() * x).transpose() / nj;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd diff = x.row(i).transpose() - mu;
        cov += resp(i, j) * (diff * diff.transpose());
      }
      cov /= nj;
      cov += cov_regularization * identity;
      model.means[static_cast<std::size_t>(j)] = std::move(mu);
      model.covariances[static_cast<std::size_t>(j)] = std::move(cov);
    }
  }

  for (Eigen::Index j = 0; j < m; ++j) {
    auto ev = ComponentEvaluator::make(model.covariances[static_cast<std::size_t>(j)]);
    model.log_norm_const.push_back(ev.log_norm_const);
    model.cholesky.push_back(std::move(ev.llt));
  }
  return model;
}

KdeModel fit_kde(const Dataset& dataset, const BandwidthRule& rule) {
  const auto n = static_cast<Eigen::Index>(dataset.n());
  const auto d = static_cast<Eigen::Index>(dataset.d());
  if (n < 1) throw TooFewSamples(0, 1);

  KdeModel model;
  model.points = dataset.values;
  model.bandwidth = Eigen::VectorXd::Ones(d);

  if (const auto* fixed = std::get_if<FixedBandwidth>(&rule)) {
    if (!(fixed->value > 0.0) || !std::isfinite(fixed->value)) {
      throw ConfigInvalid("fixed bandwidth must be a positive finite value");
    }
    model.bandwidth.setConstant(fixed->value);
    return model;
  }

  // Scott's factor scaled by the per-dimension standard deviation; a tiny
  // floor keeps constant columns usable.
  const double factor = std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
  const Eigen::RowVectorXd mean = model.points.colwise().mean();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = (model.points.col(j).array() - mean(j)).square().mean();
    const double h = factor * std::sqrt(var);
    model.bandwidth(j) = (std::isfinite(h) && h > 0.0) ? h : 1e-9;
  }
  return model;
}

double evaluate_log_density(const DensityModel& model, const Eigen::VectorXd& point) {
  if (const auto* gmm = std::get_if<GmmModel>(&model)) {
    if (static_cast<std::size_t>(point.size()) != gmm->dim()) {
      throw DimensionMismatch(gmm->dim(), static_cast<std::size_t>(point.size()));
    }
    Eigen::VectorXd log_terms(static_cast<Eigen::Index>(gmm->components()));
    for (std::size_t j = 0; j < gmm->components(); ++j) {
      const Eigen::VectorXd diff = point - gmm->means[j];
      const Eigen::VectorXd y = gmm->cholesky[j].matrixL().solve(diff);
      log_terms(static_cast<Eigen::Index>(j)) =
          std::log(gmm->mixture_weights(static_cast<Eigen::Index>(j))) + gmm->log_norm_const[j] -
          0.5 * y.squaredNorm();
    }
    return log_sum_exp(log_terms);
  }

  const auto& kde = std::get<KdeModel>(model);
  if (point.size() != kde.points.cols()) {
    throw DimensionMismatch(kde.dim(), static_cast<std::size_t>(point.size()));
  }
  const Eigen::Index n = kde.points.rows();
  const double const_part =
      -kde.bandwidth.array().log().sum() - 0.5 * static_cast<double>(point.size()) * kLog2Pi;
  Eigen::VectorXd exponents(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const Eigen::ArrayXd z =
        (point - kde.points.row(p).transpose()).array() / kde.bandwidth.array();
    exponents(p) = -0.5 * z.square().sum();
  }
  return const_part + log_sum_exp(exponents) - std::log(static_cast<double>(n));
}

double evaluate_density(const DensityModel& model, const Eigen::VectorXd& point) {
  return std::exp(evaluate_log_density(model, point));
}

namespace {

Dataset without_row(const Dataset& dataset, std::size_t i) {
  const auto n = static_cast<Eigen::Index>(dataset.n());
  Eigen::MatrixXd reduced(n - 1, dataset.values.cols());
  reduced.topRows(static_cast<Eigen::Index>(i)) = dataset.values.topRows(static_cast<Eigen::Index>(i));
  reduced.bottomRows(n - 1 - static_cast<Eigen::Index>(i)) =
      dataset.values.bottomRows(n - 1 - static_cast<Eigen::Index>(i));
  return Dataset(std::move(reduced));
}

}  // namespace

double leave_one_out_log_density(const Dataset& dataset, std::size_t i,
                                 const AbsorbConfig& config) {
  const std::size_t n = dataset.n();
  if (i >= n) throw IndexOutOfRange(i, n);
  if (n < 2) throw TooFewSamples(n, 2);

  const Eigen::VectorXd point = dataset.row(i);
  if (const auto* gmm = std::get_if<GmmBackend>(&config.density_backend)) {
    // One model on all n rows; the O(1/n) self-contribution is accepted in
    // exchange for a single EM run per call.
    const DensityModel model =
        fit_gmm(dataset, gmm->components, config.cov_regularization, config.seed);
    return evaluate_log_density(model, point);
  }
  const auto& kde = std::get<KdeBackend>(config.density_backend);
  const DensityModel model = fit_kde(without_row(dataset, i), kde.bandwidth);
  return evaluate_log_density(model, point);
}

double leave_one_out_density(const Dataset& dataset, std::size_t i, const AbsorbConfig& config) {
  return std::exp(leave_one_out_log_density(dataset, i, config));
}

Eigen::VectorXd leave_one_out_log_densities(const Dataset& dataset, const AbsorbConfig& config) {
  const std::size_t n = dataset.n();
  if (n < 2) throw TooFewSamples(n, 2);
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));

  if (const auto* gmm = std::get_if<GmmBackend>(&config.density_backend)) {
    const DensityModel model =
        fit_gmm(dataset, gmm->components, config.cov_regularization, config.seed);
    parallel_for(n, [&](std::size_t i) {
      out(static_cast<Eigen::Index>(i)) = evaluate_log_density(model, dataset.row(i));
    });
    return out;
  }

  const auto& kde = std::get<KdeBackend>(config.density_backend);
  parallel_for(n, [&](std::size_t i) {
    const DensityModel model = fit_kde(without_row(dataset, i), kde.bandwidth);
    out(static_cast<Eigen::Index>(i)) = evaluate_log_density(model, dataset.row(i));
  });
  return out;
}

}  // namespace absorbkit
