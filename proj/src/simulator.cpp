#include "ddlab/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "ddlab/errors.hpp"
#include "ddlab/random.hpp"

namespace ddlab {

namespace {

double relu(double z, double tau) {
  if (tau <= 0.0) return std::max(0.0, z);
  return std::max(0.0, z) + tau * std::log1p(std::exp(-std::abs(z) / tau));
}

double relu_slope(double z, double tau, double zero_slope) {
  if (tau <= 0.0) {
    if (z > 0.0) return 1.0;
    if (z < 0.0) return 0.0;
    return zero_slope;
  }
  return 1.0 / (1.0 + std::exp(-z / tau));
}

void check_dims(const Dataset& ds, const Eigen::VectorXd& beta) {
  if (beta.size() != ds.d)
    throw DimensionMismatch("beta has size " + std::to_string(beta.size()) +
                            ", dataset dimension is " + std::to_string(ds.d));
}

// Ridge regression of the +-1 labels on (x/sqrt(d), 1): the exact minimizer
// of the quadratic that the square-loss risk becomes when every activation
// is on its linear piece. Used as the warm start of train_erm: the smooth
// basin it lands in is the one the asymptotic theory describes, whereas
// descent from zero wedges into nonsmooth kink points with much worse
// generalization.
void all_active_ridge(const Dataset& ds, double lambda, bool freeze_bias,
                      Eigen::VectorXd* beta, double* bias) {
  const int d = ds.d;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  const Eigen::VectorXd targets = ds.labels.cast<double>();

  if (freeze_bias) {
    Eigen::MatrixXd gram = ds.features.transpose() * ds.features / d;
    gram.diagonal().array() += lambda;
    *beta = gram.ldlt().solve(ds.features.transpose() * targets * inv_sqrt_d);
    *bias = 0.0;
    return;
  }

  Eigen::MatrixXd gram(d + 1, d + 1);
  gram.topLeftCorner(d, d) = ds.features.transpose() * ds.features / d;
  gram.topLeftCorner(d, d).diagonal().array() += lambda;
  const Eigen::VectorXd col_sums = ds.features.colwise().sum() * inv_sqrt_d;
  gram.block(0, d, d, 1) = col_sums;
  gram.block(d, 0, 1, d) = col_sums.transpose();
  gram(d, d) = ds.n;

  Eigen::VectorXd rhs(d + 1);
  rhs.head(d) = ds.features.transpose() * targets * inv_sqrt_d;
  rhs[d] = targets.sum();

  const Eigen::VectorXd u = gram.ldlt().solve(rhs);
  *beta = u.head(d);
  *bias = u[d];
}

double risk_at(const Dataset& ds, const Eigen::VectorXd& beta, double bias,
               double lambda, MarginLoss loss, double tau) {
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(ds.d));
  Eigen::VectorXd z = ds.features * beta * inv_sqrt_d;
  double acc = 0.0;
  for (int i = 0; i < ds.n; ++i) {
    const double margin = ds.labels[i] * relu(z[i] + bias, tau);
    acc += loss_value(loss, margin);
  }
  return acc + 0.5 * lambda * beta.squaredNorm();
}

}  // namespace

Dataset generate_dataset(int d, int n, double rho1, std::uint64_t seed) {
  if (d < 1 || n < 1) throw ConfigError("generate_dataset requires d, n >= 1");
  GaussianStream teacher(split_seed(seed, streams::kTeacher));
  Eigen::VectorXd eta(d);
  for (int j = 0; j < d; ++j) eta[j] = teacher.normal();
  return generate_dataset(d, n, rho1, seed, eta);
}

Dataset generate_dataset(int d, int n, double rho1, std::uint64_t seed,
                         const Eigen::VectorXd& eta) {
  if (d < 1 || n < 1) throw ConfigError("generate_dataset requires d, n >= 1");
  if (!(rho1 > 0.0) || !(rho1 < 1.0))
    throw ConfigError("rho1 must lie strictly inside (0, 1)");
  if (eta.size() != d)
    throw DimensionMismatch("eta size does not match dimension d");

  Dataset ds;
  ds.d = d;
  ds.n = n;
  ds.seed = seed;
  ds.eta = eta;
  ds.labels.resize(n);
  ds.features.resize(n, d);

  GaussianStream labels(split_seed(seed, streams::kLabels));
  for (int i = 0; i < n; ++i)
    ds.labels[i] = labels.uniform() < rho1 ? 1 : -1;

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  GaussianStream noise(split_seed(seed, streams::kNoise));
  for (int i = 0; i < n; ++i) {
    const double shift = ds.labels[i] * inv_sqrt_d;
    for (int j = 0; j < d; ++j)
      ds.features(i, j) = eta[j] * shift + noise.normal();
  }
  return ds;
}

double empirical_risk(const Dataset& ds, const Eigen::VectorXd& beta,
                      double bias, double lambda, MarginLoss loss) {
  check_dims(ds, beta);
  return risk_at(ds, beta, bias, lambda, loss, 0.0);
}

std::pair<Eigen::VectorXd, double> risk_gradient(
    const Dataset& ds, const Eigen::VectorXd& beta, double bias, double lambda,
    MarginLoss loss, double tau, double zero_slope) {
  check_dims(ds, beta);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(ds.d));
  Eigen::VectorXd z = ds.features * beta * inv_sqrt_d;

  Eigen::VectorXd coeff(ds.n);
  double grad_bias = 0.0;
  for (int i = 0; i < ds.n; ++i) {
    const double zi = z[i] + bias;
    const double y = ds.labels[i];
    const double margin = y * relu(zi, tau);
    coeff[i] = loss_derivative(loss, margin) * y * relu_slope(zi, tau, zero_slope);
    grad_bias += coeff[i];
  }
  Eigen::VectorXd grad_beta =
      ds.features.transpose() * coeff * inv_sqrt_d + lambda * beta;
  return {std::move(grad_beta), grad_bias};
}

TrainedStudent train_erm(const Dataset& ds, double lambda, MarginLoss loss,
                         const TrainOptions& opts) {
  if (!(lambda > 0.0)) throw ConfigError("train_erm requires lambda > 0");
  if (!(opts.learning_rate > 0.0))
    throw ConfigError("learning_rate must be > 0");
  const double tau = opts.relu_smoothing_tau;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(ds.d);
  double bias = 0.0;
  double risk = risk_at(ds, beta, bias, lambda, loss, tau);
  const double initial_risk = risk;
  if (opts.risk_trace) {
    opts.risk_trace->clear();
    opts.risk_trace->push_back(risk);
  }

  // Warm start: jump to the all-active ridge point when it improves on the
  // zero baseline. Kept only as a candidate so the zero-start risk stays the
  // reference the caller can rely on.
  {
    Eigen::VectorXd warm_beta;
    double warm_bias = 0.0;
    all_active_ridge(ds, lambda, opts.freeze_bias, &warm_beta, &warm_bias);
    const double warm_risk = risk_at(ds, warm_beta, warm_bias, lambda, loss, tau);
    if (warm_risk < risk) {
      beta = std::move(warm_beta);
      bias = warm_bias;
      risk = warm_risk;
      if (opts.risk_trace) opts.risk_trace->push_back(risk);
    }
  }

  double step = opts.learning_rate;
  bool converged = false;
  int epoch = 0;

  for (; epoch < opts.max_epochs; ++epoch) {
    auto [g_beta, g_bias] = risk_gradient(ds, beta, bias, lambda, loss, tau, 0.0);
    if (opts.freeze_bias) g_bias = 0.0;
    double g_max = std::max(g_beta.lpNorm<Eigen::Infinity>(), std::abs(g_bias));

    // The zero start has every activation exactly on the kink; with the
    // subgradient-0 convention the gradient vanishes there even though
    // descent directions exist. Probe the right derivative once.
    if (g_max == 0.0 && tau <= 0.0) {
      std::tie(g_beta, g_bias) = risk_gradient(ds, beta, bias, lambda, loss, tau, 1.0);
      if (opts.freeze_bias) g_bias = 0.0;
      g_max = std::max(g_beta.lpNorm<Eigen::Infinity>(), std::abs(g_bias));
    }
    if (g_max <= 1e-4 * (1.0 + std::abs(risk))) {
      converged = true;
      break;
    }

    double new_risk = risk;
    bool accepted = false;
    const double dir_sq = g_beta.squaredNorm() + g_bias * g_bias;
    double t = step;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd beta_t = beta - t * g_beta;
      const double bias_t = bias - t * g_bias;
      const double risk_t = risk_at(ds, beta_t, bias_t, lambda, loss, tau);
      if (risk_t < risk && risk_t <= risk - 1e-4 * t * dir_sq) {
        beta = beta_t;
        bias = bias_t;
        new_risk = risk_t;
        step = std::min(opts.learning_rate, 2.0 * t);
        accepted = true;
        break;
      }
      t *= 0.5;
    }

    // On the exact-ReLU risk the subgradient ray can cross a kink so close
    // by that no representable step descends; report the stall through
    // converged=false rather than spinning out the epoch budget.
    if (!accepted) break;
    const double drop = risk - new_risk;
    risk = new_risk;
    if (opts.risk_trace) opts.risk_trace->push_back(risk);
    if (risk > 1e6 * std::max(initial_risk, 1e-300))
      throw Diverged("training risk exceeded 1e6 times its initial value");
    if (opts.tolerance > 0.0 &&
        drop <= opts.tolerance * std::max(1.0, std::abs(risk))) {
      converged = true;
      ++epoch;
      break;
    }
  }

  TrainedStudent out;
  out.beta = std::move(beta);
  out.bias = bias;
  out.r_hat = out.beta.squaredNorm() / ds.d;
  out.s_hat = out.beta.dot(ds.eta) / ds.d;
  out.final_risk = risk_at(ds, out.beta, bias, lambda, loss, 0.0);
  out.converged = converged;
  out.epochs = epoch;
  return out;
}

int classify(const Eigen::VectorXd& beta, double bias,
             const Eigen::VectorXd& x) {
  if (x.size() != beta.size())
    throw DimensionMismatch("classify: x and beta sizes differ");
  const double z =
      x.dot(beta) / std::sqrt(static_cast<double>(beta.size())) + bias;
  return z > 0.0 ? 1 : -1;
}

double empirical_test_error(const Eigen::VectorXd& beta, double bias,
                            const Eigen::VectorXd& eta, double rho1,
                            int n_test, std::uint64_t seed) {
  if (n_test < 1) throw ConfigError("empirical_test_error requires n_test >= 1");
  if (eta.size() != beta.size())
    throw DimensionMismatch("empirical_test_error: eta and beta sizes differ");
  const int d = static_cast<int>(beta.size());
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  GaussianStream test(split_seed(seed, streams::kTest));
  Eigen::VectorXd x(d);
  long misclassified = 0;
  for (int i = 0; i < n_test; ++i) {
    const int y = test.uniform() < rho1 ? 1 : -1;
    const double shift = y * inv_sqrt_d;
    for (int j = 0; j < d; ++j) x[j] = eta[j] * shift + test.normal();
    if (classify(beta, bias, x) != y) ++misclassified;
  }
  return static_cast<double>(misclassified) / n_test;
}

}  // namespace ddlab
