#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddlab/errors.hpp"
#include "ddlab/loss.hpp"
#include "oracles.hpp"

using ddlab::MarginLoss;

namespace {
constexpr MarginLoss kAll[] = {MarginLoss::Square, MarginLoss::Hinge,
                               MarginLoss::Logistic};
}

TEST_CASE("loss names round-trip") {
  for (MarginLoss loss : kAll)
    CHECK(ddlab::loss_from_name(ddlab::loss_name(loss)) == loss);
  CHECK_THROWS_AS(ddlab::loss_from_name("huber"), ddlab::ConfigError);
}

TEST_CASE("loss values at reference points") {
  CHECK(ddlab::loss_value(MarginLoss::Square, 0.0) == 0.5);
  CHECK(ddlab::loss_value(MarginLoss::Square, 1.0) == 0.0);
  CHECK(ddlab::loss_value(MarginLoss::Hinge, 2.0) == 0.0);
  // log 2, frozen from high-precision evaluation
  CHECK(ddlab::loss_value(MarginLoss::Logistic, 0.0) ==
        doctest::Approx(0.69314718055994529).epsilon(1e-15));
  // stable branch far outside exp range
  CHECK(ddlab::loss_value(MarginLoss::Logistic, -1000.0) ==
        doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(ddlab::loss_value(MarginLoss::Logistic, 1000.0) == 0.0);
}

TEST_CASE("loss values are nonnegative") {
  for (MarginLoss loss : kAll)
    for (double x = -10.0; x <= 10.0; x += 0.37)
      CHECK(ddlab::loss_value(loss, x) >= 0.0);
}

TEST_CASE("convexity on a grid") {
  for (MarginLoss loss : kAll) {
    for (double x = -10.0; x <= 9.0; x += 0.13) {
      const double x1 = x, x3 = x + 1.0, x2 = x + 0.5;
      const double chord =
          0.5 * (ddlab::loss_value(loss, x1) + ddlab::loss_value(loss, x3));
      CHECK(ddlab::loss_value(loss, x2) <= chord + 1e-12);
    }
  }
}

TEST_CASE("derivatives at reference points") {
  CHECK(ddlab::loss_derivative(MarginLoss::Square, 3.0) == 2.0);
  CHECK(ddlab::loss_derivative(MarginLoss::Hinge, 0.0) == -1.0);
  CHECK(ddlab::loss_derivative(MarginLoss::Hinge, 1.0) == 0.0);  // kink choice
  CHECK(ddlab::loss_derivative(MarginLoss::Logistic, 0.0) ==
        doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("derivatives agree with central differences") {
  for (MarginLoss loss : kAll) {
    for (double x = -10.0; x <= 10.0; x += 0.0917) {
      if (loss == MarginLoss::Hinge && std::abs(x - 1.0) < 0.2) continue;
      const double fd = oracles::central_diff(
          [&](double t) { return ddlab::loss_value(loss, t); }, x);
      const double an = ddlab::loss_derivative(loss, x);
      CHECK(std::abs(an - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("prox reference points") {
  // square closed form: v = (w + 2*gamma) / (2*(gamma + 1))
  CHECK(ddlab::prox_solve(MarginLoss::Square, 1.0, 2.0) == 1.0);
  // gamma -> 0 degenerates to v = w/2 for every loss
  for (MarginLoss loss : kAll)
    CHECK(ddlab::prox_solve(loss, 1e-12, 3.0) ==
          doctest::Approx(1.5).epsilon(1e-9));
  // hinge on its l' = -1 branch, cross-checked by the bisection oracle
  const double v = ddlab::prox_solve(MarginLoss::Hinge, 0.5, 0.0);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  const double v_oracle = oracles::bisect_root(
      [&](double t) {
        return 0.5 * ddlab::loss_derivative(MarginLoss::Hinge, t) + t - 0.0;
      },
      -50.0, 50.0);
  CHECK(v == doctest::Approx(v_oracle).epsilon(1e-10));
}

TEST_CASE("prox residual property on random inputs") {
  std::mt19937_64 gen(20240811);
  std::uniform_real_distribution<double> gamma_dist(1e-12, 10.0);
  std::uniform_real_distribution<double> w_dist(-20.0, 20.0);
  for (MarginLoss loss : kAll) {
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double gamma = gamma_dist(gen);
      const double w = w_dist(gen);
      const double v = ddlab::prox_solve(loss, gamma, w);
      worst = std::max(worst, ddlab::prox_residual(loss, gamma, w, v));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("prox is nondecreasing in w") {
  for (MarginLoss loss : kAll) {
    for (double gamma : {0.1, 0.7, 3.0}) {
      double prev = ddlab::prox_solve(loss, gamma, -20.0);
      for (double w = -19.75; w <= 20.0; w += 0.25) {
        const double v = ddlab::prox_solve(loss, gamma, w);
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("square closed form matches the generic root search") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> gamma_dist(0.01, 10.0);
  std::uniform_real_distribution<double> w_dist(-20.0, 20.0);
  for (int k = 0; k < 1000; ++k) {
    const double gamma = gamma_dist(gen);
    const double w = w_dist(gen);
    const double closed = ddlab::prox_solve(MarginLoss::Square, gamma, w);
    const double generic =
        ddlab::prox_solve_bisection(MarginLoss::Square, gamma, w);
    CHECK(std::abs(closed - generic) <= 1e-10);
  }
}

TEST_CASE("prox rejects nonpositive gamma") {
  CHECK_THROWS_AS(ddlab::prox_solve(MarginLoss::Square, 0.0, 1.0),
                  ddlab::DomainViolation);
}

TEST_CASE("legendre conjugate of the square loss") {
  // conjugate is y^2/2 + y
  CHECK(ddlab::legendre_conjugate(MarginLoss::Square, 0.0, 10.0) ==
        doctest::Approx(0.0).epsilon(1e-8));
  CHECK(ddlab::legendre_conjugate(MarginLoss::Square, 2.0, 10.0) ==
        doctest::Approx(4.0).epsilon(1e-8));
  // grid-search oracle over x in [-10, 10], step 1e-4
  const double oracle = oracles::grid_max(
      [](double x) {
        return x * -1.0 - ddlab::loss_value(MarginLoss::Square, x);
      },
      -10.0, 10.0, 1e-4);
  CHECK(oracle == doctest::Approx(-0.5).epsilon(1e-7));
  CHECK(ddlab::legendre_conjugate(MarginLoss::Square, -1.0, 10.0) ==
        doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_CASE("legendre conjugate flags a boundary maximizer") {
  // square: maximizer sits at x = 1 + y, outside a bound of 5
  CHECK_THROWS_AS(ddlab::legendre_conjugate(MarginLoss::Square, 20.0, 5.0),
                  ddlab::BoundaryMaximizer);
  // hinge with y > 0: objective grows without bound
  CHECK_THROWS_AS(ddlab::legendre_conjugate(MarginLoss::Hinge, 0.5, 30.0),
                  ddlab::BoundaryMaximizer);
}

TEST_CASE("legendre identities at reference points") {
  {
    const auto [u, val] =
        ddlab::legendre_identities_check(MarginLoss::Square, 1.0);
    CHECK(u == 0.0);
    CHECK(val == doctest::Approx(0.0).epsilon(1e-8));
  }
  {
    const auto [u, val] =
        ddlab::legendre_identities_check(MarginLoss::Square, 0.0);
    CHECK(u == -1.0);
    CHECK(val == doctest::Approx(0.5).epsilon(1e-6));
  }
  {
    const auto [u, val] =
        ddlab::legendre_identities_check(MarginLoss::Logistic, 0.0);
    CHECK(u == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(val == doctest::Approx(0.69314718055994529).epsilon(1e-6));
  }
}

TEST_CASE("legendre identity reproduces l(v) on [-5, 5]") {
  for (MarginLoss loss : {MarginLoss::Square, MarginLoss::Logistic}) {
    for (double v = -5.0; v <= 5.0; v += 0.25) {
      const auto [u, val] = ddlab::legendre_identities_check(loss, v);
      (void)u;
      CHECK(std::abs(val - ddlab::loss_value(loss, v)) <= 1e-6);
    }
  }
}

TEST_CASE("legendre identities reject the hinge") {
  CHECK_THROWS_AS(ddlab::legendre_identities_check(MarginLoss::Hinge, 0.0),
                  ddlab::ConfigError);
}
