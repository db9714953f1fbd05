#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ddlab/loss.hpp"

namespace ddlab {

/// Finite-size teacher sample: row i of features is eta * y_i / sqrt(d)
/// plus standard Gaussian noise, labels are +1 with probability rho1.
/// Everything is reconstructable from (d, n, rho1, seed).
struct Dataset {
  int d = 0;
  int n = 0;
  Eigen::VectorXd eta;
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXi labels;    // entries in {-1, +1}
  std::uint64_t seed = 0;
};

Dataset generate_dataset(int d, int n, double rho1, std::uint64_t seed);

/// Same sampling with a caller-supplied teacher direction (the label and
/// noise streams are unchanged, so forcing eta = 0 yields pure-noise rows).
Dataset generate_dataset(int d, int n, double rho1, std::uint64_t seed,
                         const Eigen::VectorXd& eta);

struct TrainOptions {
  double learning_rate = 1.0;  // maximum line-search step
  int max_epochs = 2000;
  double relu_smoothing_tau = 0.0;  // 0 = exact ReLU with subgradient
  double tolerance = 0.0;           // relative risk-change stop; 0 disables
  std::uint64_t seed = 0;           // optimizer stream (reserved)
  bool freeze_bias = false;
  std::vector<double>* risk_trace = nullptr;  // per-epoch accepted risks
};

struct TrainedStudent {
  Eigen::VectorXd beta;
  double bias = 0.0;
  double r_hat = 0.0;  // |beta|^2 / d
  double s_hat = 0.0;  // beta.eta / d
  double final_risk = 0.0;
  bool converged = false;
  int epochs = 0;
};

/// Ridge-regularized empirical risk of the ReLU student:
///   sum_i l(y_i * relu(x_i.beta/sqrt(d) + bias)) + lambda/2 * |beta|^2.
double empirical_risk(const Dataset& ds, const Eigen::VectorXd& beta,
                      double bias, double lambda, MarginLoss loss);

/// Analytic (sub)gradient of the risk above in (beta, bias). zero_slope is
/// the ReLU slope used exactly on the kink z = 0 (default 0); tau > 0
/// switches to the smoothed ablation relu_tau(z) = tau*log(1+e^{z/tau}).
std::pair<Eigen::VectorXd, double> risk_gradient(
    const Dataset& ds, const Eigen::VectorXd& beta, double bias, double lambda,
    MarginLoss loss, double tau = 0.0, double zero_slope = 0.0);

/// Deterministic empirical-risk minimization. The reference initialization
/// is beta = 0, bias = 0; the optimizer first jumps to the all-active ridge
/// point when that lowers the risk (the smooth basin of the landscape),
/// then runs full-batch subgradient descent with backtracking line search.
/// The zero start sits exactly on every ReLU kink where the subgradient-0
/// convention stalls, so a vanishing gradient there is re-probed with the
/// right derivative. Accepted iterates never increase the risk; converged
/// reports whether the gradient test was met (a nonsmooth stall or an
/// exhausted epoch budget reports false). Throws Diverged if the risk blows
/// past 1e6 times its initial value.
TrainedStudent train_erm(const Dataset& ds, double lambda, MarginLoss loss,
                         const TrainOptions& opts = {});

/// +1 iff x.beta/sqrt(d) + bias > 0, else -1 (ReLU output 0 maps to -1).
int classify(const Eigen::VectorXd& beta, double bias,
             const Eigen::VectorXd& x);

/// Misclassified fraction on n_test fresh teacher samples drawn from the
/// test stream of `seed`.
double empirical_test_error(const Eigen::VectorXd& beta, double bias,
                            const Eigen::VectorXd& eta, double rho1,
                            int n_test, std::uint64_t seed);

}  // namespace ddlab
