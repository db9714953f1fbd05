#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace ddlab {

/// Probabilists' Gauss-Hermite rule: integrates f against the standard
/// normal density, exactly for polynomials of degree <= 2n - 1.
/// nodes are ascending and symmetric about 0; weights sum to 1.
struct HermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Builds an n-node rule via Golub-Welsch on the Jacobi matrix of the
/// probabilists' Hermite recurrence. 1 <= n_nodes <= 501.
HermiteRule hermite_rule(int n_nodes);

/// Law of the pair (y, w): y = +1 with probability rho1 else -1, and
/// w | y ~ Normal(s + y*b, r).
struct MixtureLaw {
  double s = 0.0;
  double b = 0.0;
  double r = 0.0;  // variance, >= 0
  double rho1 = 0.5;
};

/// E[f(w, g, y)] with w = s + y*b + sqrt(r)*g, g standard normal:
/// rho1 * E[f | y=+1] + rho_{-1} * E[f | y=-1] under the quadrature rule.
template <class F>
double expect(const MixtureLaw& law, const HermiteRule& rule, F&& f) {
  const double sigma = std::sqrt(law.r);
  double acc = 0.0;
  for (const int y : {+1, -1}) {
    const double rho = y > 0 ? law.rho1 : 1.0 - law.rho1;
    const double mean = law.s + y * law.b;
    double cond = 0.0;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
      const double g = rule.nodes[k];
      cond += rule.weights[k] * f(mean + sigma * g, g, y);
    }
    acc += rho * cond;
  }
  return acc;
}

}  // namespace ddlab
