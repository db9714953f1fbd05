#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddlab/errors.hpp"
#include "ddlab/generalization.hpp"
#include "ddlab/loss.hpp"
#include "ddlab/random.hpp"
#include "ddlab/simulator.hpp"

using ddlab::Dataset;
using ddlab::generate_dataset;
using ddlab::MarginLoss;
using ddlab::TrainedStudent;
using ddlab::TrainOptions;

namespace {

template <class A, class B>
bool bit_equal(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("dataset generation is deterministic") {
  const Dataset a = generate_dataset(3, 5, 0.5, 7);
  const Dataset b = generate_dataset(3, 5, 0.5, 7);
  CHECK(bit_equal(a.eta, b.eta));
  CHECK(bit_equal(a.labels, b.labels));
  CHECK(bit_equal(a.features, b.features));
  const Dataset c = generate_dataset(3, 5, 0.5, 8);
  CHECK(!bit_equal(a.features, c.features));
}

TEST_CASE("zero teacher leaves pure noise independent of the labels") {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  const Dataset a = generate_dataset(4, 50, 0.3, 11, zero);
  const Dataset b = generate_dataset(4, 50, 0.9, 11, zero);
  CHECK(bit_equal(a.features, b.features));  // noise stream is label-free
  CHECK(!bit_equal(a.labels, b.labels));
}

TEST_CASE("rows decompose as teacher shift plus the seeded noise stream") {
  const int d = 6, n = 40;
  const Dataset ds = generate_dataset(d, n, 0.5, 3);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  ddlab::GaussianStream noise(
      ddlab::split_seed(3, ddlab::streams::kNoise));
  for (int i = 0; i < n; ++i) {
    const double shift = ds.labels[i] * inv_sqrt_d;
    for (int j = 0; j < d; ++j) {
      const double expected = ds.eta[j] * shift + noise.normal();
      CHECK(ds.features(i, j) == expected);
    }
  }
}

TEST_CASE("label fraction concentrates at rho1") {
  const Dataset ds = generate_dataset(200, 10000, 0.7, 1);
  const double frac =
      (ds.labels.array() == 1).cast<double>().sum() / ds.labels.size();
  CHECK(std::abs(frac - 0.7) <= 0.014);  // 3 binomial sigma
}

TEST_CASE("dataset argument validation") {
  CHECK_THROWS_AS(generate_dataset(0, 5, 0.5, 1), ddlab::ConfigError);
  CHECK_THROWS_AS(generate_dataset(5, 0, 0.5, 1), ddlab::ConfigError);
  CHECK_THROWS_AS(generate_dataset(5, 5, 1.0, 1), ddlab::ConfigError);
  CHECK_THROWS_AS(
      generate_dataset(5, 5, 0.5, 1, Eigen::VectorXd::Zero(4)),
      ddlab::DimensionMismatch);
}

TEST_CASE("empirical risk at reference points") {
  const Dataset ds = generate_dataset(10, 30, 0.5, 5);
  // beta = 0, bias = 0: every margin is 0, so risk = n * l(0)
  CHECK(ddlab::empirical_risk(ds, Eigen::VectorXd::Zero(10), 0.0, 0.3,
                              MarginLoss::Square) == ds.n * 0.5);

  // all labels +1 and bias 1: margin exactly 1, square risk vanishes
  Dataset ones = ds;
  ones.labels.setOnes();
  CHECK(ddlab::empirical_risk(ones, Eigen::VectorXd::Zero(10), 1.0, 0.3,
                              MarginLoss::Square) == 0.0);

  CHECK_THROWS_AS(ddlab::empirical_risk(ds, Eigen::VectorXd::Zero(4), 0.0, 0.3,
                                        MarginLoss::Square),
                  ddlab::DimensionMismatch);
}

TEST_CASE("empirical risk matches scalar arithmetic on a tiny instance") {
  Dataset ds;
  ds.d = 2;
  ds.n = 3;
  ds.seed = 0;
  ds.eta = Eigen::VectorXd::Zero(2);
  ds.features.resize(3, 2);
  ds.features << 1.0, -2.0, 0.5, 0.25, -3.0, 1.5;
  ds.labels.resize(3);
  ds.labels << 1, -1, 1;
  Eigen::VectorXd beta(2);
  beta << 0.3, -0.2;
  const double bias = 0.1;
  const double lambda = 0.5;

  const double inv_sqrt_d = 1.0 / std::sqrt(2.0);
  double expected = 0.0;
  const double z0 = (1.0 * 0.3 + -2.0 * -0.2) * inv_sqrt_d + bias;
  const double z1 = (0.5 * 0.3 + 0.25 * -0.2) * inv_sqrt_d + bias;
  const double z2 = (-3.0 * 0.3 + 1.5 * -0.2) * inv_sqrt_d + bias;
  const auto sq = [](double m) { return 0.5 * (1.0 - m) * (1.0 - m); };
  expected += sq(1.0 * std::max(0.0, z0));
  expected += sq(-1.0 * std::max(0.0, z1));
  expected += sq(1.0 * std::max(0.0, z2));
  expected += 0.5 * lambda * (0.3 * 0.3 + 0.2 * 0.2);

  CHECK(ddlab::empirical_risk(ds, beta, bias, lambda, MarginLoss::Square) ==
        doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("analytic gradient matches finite differences off the kinks") {
  const Dataset ds = generate_dataset(5, 8, 0.5, 21);
  Eigen::VectorXd beta(5);
  beta << 0.4, -0.7, 0.2, 0.9, -0.1;
  const double bias = 0.37;
  const double lambda = 0.25;

  // precondition of the check: all activations away from the kink
  const Eigen::VectorXd z =
      ds.features * beta / std::sqrt(5.0) + Eigen::VectorXd::Constant(8, bias);
  REQUIRE(z.cwiseAbs().minCoeff() > 1e-3);

  for (MarginLoss loss :
       {MarginLoss::Square, MarginLoss::Hinge, MarginLoss::Logistic}) {
    const auto [g_beta, g_bias] =
        ddlab::risk_gradient(ds, beta, bias, lambda, loss);
    const double h = 1e-6;
    for (int j = 0; j < 5; ++j) {
      Eigen::VectorXd up = beta, dn = beta;
      up[j] += h;
      dn[j] -= h;
      const double fd = (ddlab::empirical_risk(ds, up, bias, lambda, loss) -
                         ddlab::empirical_risk(ds, dn, bias, lambda, loss)) /
                        (2.0 * h);
      CHECK(std::abs(g_beta[j] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
    const double fd_b =
        (ddlab::empirical_risk(ds, beta, bias + h, lambda, loss) -
         ddlab::empirical_risk(ds, beta, bias - h, lambda, loss)) /
        (2.0 * h);
    CHECK(std::abs(g_bias - fd_b) <= 1e-5 * std::max(1.0, std::abs(fd_b)));
  }
}

TEST_CASE("smoothed ReLU gradient also matches finite differences") {
  const Dataset ds = generate_dataset(4, 10, 0.5, 33);
  Eigen::VectorXd beta(4);
  beta << 0.3, 0.1, -0.4, 0.6;
  const auto [g_beta, g_bias] = ddlab::risk_gradient(
      ds, beta, 0.2, 0.1, MarginLoss::Logistic, /*tau=*/0.1);
  const double h = 1e-6;
  const auto risk_tau = [&](const Eigen::VectorXd& bt, double bs) {
    double acc = 0.0;
    for (int i = 0; i < ds.n; ++i) {
      const double z = ds.features.row(i).dot(bt) / 2.0 + bs;  // sqrt(4) = 2
      const double s =
          std::max(0.0, z) + 0.1 * std::log1p(std::exp(-std::abs(z) / 0.1));
      acc += ddlab::loss_value(MarginLoss::Logistic, ds.labels[i] * s);
    }
    return acc + 0.05 * bt.squaredNorm();
  };
  for (int j = 0; j < 4; ++j) {
    Eigen::VectorXd up = beta, dn = beta;
    up[j] += h;
    dn[j] -= h;
    const double fd = (risk_tau(up, 0.2) - risk_tau(dn, 0.2)) / (2.0 * h);
    CHECK(std::abs(g_beta[j] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
  }
  const double fd_b =
      (risk_tau(beta, 0.2 + h) - risk_tau(beta, 0.2 - h)) / (2.0 * h);
  CHECK(std::abs(g_bias - fd_b) <= 1e-5 * std::max(1.0, std::abs(fd_b)));
}

TEST_CASE("training descends from the zero start and is deterministic") {
  const Dataset ds = generate_dataset(50, 500, 0.5, 9);
  std::vector<double> trace;
  TrainOptions opts;
  opts.risk_trace = &trace;
  const TrainedStudent a = ddlab::train_erm(ds, 0.1, MarginLoss::Square, opts);
  CHECK(a.final_risk < ds.n * 0.5);  // strictly below the zero-start risk
  for (std::size_t k = 1; k < trace.size(); ++k)
    CHECK(trace[k] <= trace[k - 1]);  // line search never accepts an increase

  const TrainedStudent b = ddlab::train_erm(ds, 0.1, MarginLoss::Square, opts);
  CHECK(bit_equal(a.beta, b.beta));
  CHECK(a.bias == b.bias);
  CHECK(a.final_risk == b.final_risk);
}

TEST_CASE("huge regularization pins the weights near zero") {
  const Dataset ds = generate_dataset(20, 100, 0.5, 4);
  const TrainedStudent s = ddlab::train_erm(ds, 1e6, MarginLoss::Square);
  CHECK(s.beta.norm() <= 1e-2);
}

TEST_CASE("frozen bias stays at zero") {
  const Dataset ds = generate_dataset(20, 100, 0.7, 4);
  TrainOptions opts;
  opts.freeze_bias = true;
  const TrainedStudent s = ddlab::train_erm(ds, 0.1, MarginLoss::Square, opts);
  CHECK(s.bias == 0.0);
}

TEST_CASE("measured order parameters satisfy Cauchy-Schwarz") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Dataset ds = generate_dataset(40, 200, 0.6, seed);
    const TrainedStudent s = ddlab::train_erm(ds, 0.2, MarginLoss::Square);
    const double eta_sq = ds.eta.squaredNorm() / ds.d;
    CHECK(s.s_hat * s.s_hat <= s.r_hat * eta_sq * (1.0 + 1e-12));
    CHECK(s.r_hat >= 0.0);
  }
}

TEST_CASE("classify boundary convention") {
  Eigen::VectorXd beta(2);
  beta << 1.0, 0.0;
  Eigen::VectorXd x(2);
  x << 0.0, 5.0;  // z = 0 exactly
  CHECK(ddlab::classify(beta, 0.0, x) == -1);
  x << 2.0 * std::sqrt(2.0), 0.0;  // z = 2
  CHECK(ddlab::classify(beta, 0.0, x) == 1);
  x << -std::sqrt(2.0), 0.0;  // z = -1
  CHECK(ddlab::classify(beta, 0.0, x) == -1);
  CHECK_THROWS_AS(ddlab::classify(beta, 0.0, Eigen::VectorXd::Zero(3)),
                  ddlab::DimensionMismatch);
}

TEST_CASE("empirical test error against the closed-form prediction") {
  const int d = 400;
  const Dataset ds = generate_dataset(d, 2, 0.5, 17);  // only eta is used
  const double eta_sq = ds.eta.squaredNorm() / d;

  // aligned student: r_hat = s_hat = |eta|^2/d
  {
    const double emp =
        ddlab::empirical_test_error(ds.eta, 0.0, ds.eta, 0.5, 200000, 17);
    const double theory = ddlab::test_error({eta_sq, eta_sq, 0.0, 0.5});
    CHECK(std::abs(emp - theory) <= 0.005);
  }
  // orthogonal student: s = 0 gives coin-flip error
  {
    Eigen::VectorXd ortho = Eigen::VectorXd::Zero(d);
    ortho[0] = -ds.eta[1];
    ortho[1] = ds.eta[0];
    const double emp =
        ddlab::empirical_test_error(ortho, 0.0, ds.eta, 0.5, 200000, 18);
    CHECK(std::abs(emp - 0.5) <= 0.005);
  }
  // single test sample is a bare indicator
  {
    const double one =
        ddlab::empirical_test_error(ds.eta, 0.0, ds.eta, 0.5, 1, 19);
    CHECK((one == 0.0 || one == 1.0));
  }
  CHECK_THROWS_AS(
      ddlab::empirical_test_error(ds.eta, 0.0, Eigen::VectorXd::Zero(3), 0.5,
                                  10, 1),
      ddlab::DimensionMismatch);
}

TEST_CASE("test-error estimates are deterministic in the seed") {
  const Dataset ds = generate_dataset(50, 2, 0.5, 23);
  const double a =
      ddlab::empirical_test_error(ds.eta, 0.1, ds.eta, 0.6, 5000, 23);
  const double b =
      ddlab::empirical_test_error(ds.eta, 0.1, ds.eta, 0.6, 5000, 23);
  CHECK(a == b);
}
