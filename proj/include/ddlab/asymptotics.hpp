#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ddlab/errors.hpp"
#include "ddlab/loss.hpp"
#include "ddlab/quadrature.hpp"

namespace ddlab {

/// The axes of every sweep: sample-to-dimension ratio, ridge strength, and
/// the +1 class probability.
struct ProblemConfig {
  double alpha;   // n/d > 0
  double lambda;  // l2 strength, >= 1e-12 (exact zero is rejected)
  double rho1;    // in (0,1)

  void validate() const;
};

/// Fixed quantities of the high-dimensional limit: r* = lim |beta|^2/d,
/// s* = lim beta.eta/d, the limiting bias b*, and the prox scale gamma*.
struct AsymptoticSolution {
  double r_star = 0.0;
  double s_star = 0.0;
  double b_star = 0.0;
  double gamma_star = 0.0;
};

struct SolverOptions {
  double tolerance = 1e-8;  // max-norm target for the four residuals
  int max_iterations = 500;
  double damping = 0.5;  // in (0, 1]
  int quad_nodes = 61;
  // Starting iterate; defaults to the square-loss closed form.
  std::optional<AsymptoticSolution> initial;

  void validate() const;
};

/// Thrown by solve_fixed_point when the iteration budget runs out; carries
/// the last iterate and its residual max-norm.
class FixedPointNonConvergence : public NonConvergence {
public:
  FixedPointNonConvergence(const AsymptoticSolution& last, double residual,
                           int iterations);
  const AsymptoticSolution& last_iterate() const noexcept { return last_; }
  double residual_norm() const noexcept { return residual_; }

private:
  AsymptoticSolution last_;
  double residual_;
};

/// Square-loss closed form:
///   gamma* = positive root of 4*lambda*g^2 + (alpha + 4*lambda - 1)*g - 1,
///   s*     = 8*alpha*gamma*rho1*rho_{-1} / (1 + gamma + 4*alpha*gamma*rho1*rho_{-1}),
///   b*     = (2 - s*) * (2*rho1 - 1),
///   r*     = (alpha*gamma^2*((s*-2)^2 - b*^2) + (1+gamma)^2*s*^2)
///            / ((1+gamma)^2 - alpha*gamma^2).
/// Throws SingularRStar at a vanishing r* denominator and NegativeRStar if
/// the formula lands outside r* >= 0 (surfaced, never clamped).
AsymptoticSolution solve_square_closed_form(const ProblemConfig& cfg);

/// Residuals of the four fixed-point equations at a candidate solution,
/// with D(w) = w - 2*prox(gamma*, w) and E the mixture expectation under
/// MixtureLaw(s*, b*, r*, rho1):
///   [ (alpha/sqrt(r*)) E[g D] - (1 - 4 lambda gamma*),
///     -alpha E[D] - s*,
///     E[y D],
///     alpha E[D^2] - (r* - s*^2) ].
Eigen::Vector4d theorem2_residuals(const AsymptoticSolution& sol,
                                   const ProblemConfig& cfg, MarginLoss loss,
                                   const HermiteRule& rule);

/// Damped Gauss-Seidel iteration on the four fixed-point equations, started
/// from the square closed form. Returns once the residual max-norm drops
/// below opts.tolerance; throws FixedPointNonConvergence otherwise and
/// DomainViolation if the iterates leave {r > 0, gamma > 0} irrecoverably.
AsymptoticSolution solve_fixed_point(const ProblemConfig& cfg, MarginLoss loss,
                                     const SolverOptions& opts = {});

/// One sweep point: the solved limit and its test error, or the error code
/// of whatever failed (sweeps never abort on a bad point).
struct CurvePoint {
  double alpha = 0.0;
  AsymptoticSolution solution{};
  double test_error = 0.0;
  std::string status = "ok";

  bool ok() const noexcept { return status == "ok"; }
};

/// Solves every alpha on the grid (closed form for square loss, fixed point
/// otherwise) and attaches the test error. alphas must be strictly
/// increasing and positive. Points are independent and evaluated in
/// parallel, results in grid order.
std::vector<CurvePoint> error_curve(const ProblemConfig& cfg_template,
                                    const std::vector<double>& alphas,
                                    MarginLoss loss,
                                    const SolverOptions& opts = {});

}  // namespace ddlab
