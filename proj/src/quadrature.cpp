#include "ddlab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include "ddlab/errors.hpp"

namespace ddlab {

HermiteRule hermite_rule(int n_nodes) {
  if (n_nodes < 1 || n_nodes > 501)
    throw UnsupportedOrder("hermite_rule supports 1..501 nodes, got " +
                           std::to_string(n_nodes));
  HermiteRule rule;
  if (n_nodes == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Ones(1);
    return rule;
  }

  // Jacobi matrix of He_k: zero diagonal, off-diagonal sqrt(k).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_nodes, n_nodes);
  for (int k = 1; k < n_nodes; ++k) {
    const double off = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);

  rule.nodes = eig.eigenvalues();  // ascending
  rule.weights = eig.eigenvectors().row(0).transpose().array().square();

  // The spectrum is symmetric about 0; fold the rule onto itself so that
  // odd moments vanish exactly and the weights sum to exactly 1.
  const int n = n_nodes;
  for (int k = 0; k < n / 2; ++k) {
    const int m = n - 1 - k;
    const double x = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[m]);
    rule.nodes[k] = -x;
    rule.nodes[m] = x;
    rule.weights[k] = w;
    rule.weights[m] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace ddlab
