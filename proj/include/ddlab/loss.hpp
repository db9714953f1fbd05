#pragma once

#include <string>
#include <string_view>
#include <utility>

namespace ddlab {

/// Margin-based convex losses, evaluated on the margin x = y * f(x).
///   Square:   l(x) = (1 - x)^2 / 2
///   Hinge:    l(x) = max{0, 1 - x}
///   Logistic: l(x) = log(1 + e^{-x})
enum class MarginLoss { Square, Hinge, Logistic };

/// Parses "square" | "hinge" | "logistic"; throws ConfigError otherwise.
MarginLoss loss_from_name(std::string_view name);
std::string_view loss_name(MarginLoss loss);

double loss_value(MarginLoss loss, double x);

/// l'(x). Hinge uses the subgradient choice l'(1) = 0 at its kink.
double loss_derivative(MarginLoss loss, double x);

/// Solves gamma * l'(v) + v = w/2 for v, gamma > 0.
/// Square and hinge have closed forms; logistic falls back to
/// prox_solve_bisection. For hinge the solution is understood in the
/// subdifferential sense (v = 1 whenever w/2 lands in the kink gap).
double prox_solve(MarginLoss loss, double gamma, double w);

/// Generic scalar root search on the nondecreasing map v -> gamma*l'(v) + v.
/// Safeguarded bisection with geometric bracket expansion, 200-iteration
/// budget; throws NonConvergence if no bracket is found.
double prox_solve_bisection(MarginLoss loss, double gamma, double w);

/// |gamma*u + v - w/2| minimized over subgradients u of l at v. Equals
/// |gamma*l'(v) + v - w/2| wherever l is differentiable; at the hinge kink
/// it measures the distance of w/2 - v to gamma * [-1, 0].
double prox_residual(MarginLoss loss, double gamma, double w, double v);

/// Numeric Legendre conjugate max_{|x| <= search_bound} {x*y - l(x)} by
/// golden-section search on the concave objective. Throws BoundaryMaximizer
/// when the maximizer sits at the search boundary (bound too small).
double legendre_conjugate(MarginLoss loss, double y, double search_bound);

/// Returns (u = l'(v), u * conj'(u) - conj(u)) with the conjugate and its
/// derivative (the argmax location) evaluated numerically. For strictly
/// convex losses the second component reproduces l(v); hinge is rejected.
std::pair<double, double> legendre_identities_check(MarginLoss loss, double v);

}  // namespace ddlab
