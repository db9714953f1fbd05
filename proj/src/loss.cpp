#include "ddlab/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddlab/errors.hpp"

namespace ddlab {

MarginLoss loss_from_name(std::string_view name) {
  if (name == "square") return MarginLoss::Square;
  if (name == "hinge") return MarginLoss::Hinge;
  if (name == "logistic") return MarginLoss::Logistic;
  throw ConfigError("unknown loss \"" + std::string(name) +
                    "\" (expected square | hinge | logistic)");
}

std::string_view loss_name(MarginLoss loss) {
  switch (loss) {
    case MarginLoss::Square: return "square";
    case MarginLoss::Hinge: return "hinge";
    case MarginLoss::Logistic: return "logistic";
  }
  return "?";
}

double loss_value(MarginLoss loss, double x) {
  switch (loss) {
    case MarginLoss::Square: {
      const double t = 1.0 - x;
      return 0.5 * t * t;
    }
    case MarginLoss::Hinge:
      return std::max(0.0, 1.0 - x);
    case MarginLoss::Logistic:
      // log(1 + e^{-x}) = max(0, -x) + log1p(e^{-|x|}), stable for |x| > 700
      return std::max(0.0, -x) + std::log1p(std::exp(-std::abs(x)));
  }
  return 0.0;
}

double loss_derivative(MarginLoss loss, double x) {
  switch (loss) {
    case MarginLoss::Square:
      return x - 1.0;
    case MarginLoss::Hinge:
      if (x < 1.0) return -1.0;
      return 0.0;  // subgradient choice at the kink
    case MarginLoss::Logistic:
      return -1.0 / (1.0 + std::exp(x));
  }
  return 0.0;
}

double prox_solve(MarginLoss loss, double gamma, double w) {
  if (!(gamma > 0.0)) throw DomainViolation("prox_solve requires gamma > 0");
  switch (loss) {
    case MarginLoss::Square:
      return (w + 2.0 * gamma) / (2.0 * (gamma + 1.0));
    case MarginLoss::Hinge: {
      const double t = 0.5 * w;
      if (t < 1.0 - gamma) return t + gamma;  // l' = -1 branch
      if (t > 1.0) return t;                  // l' = 0 branch
      return 1.0;                             // kink absorbs the gap
    }
    case MarginLoss::Logistic:
      return prox_solve_bisection(loss, gamma, w);
  }
  return 0.0;
}

double prox_solve_bisection(MarginLoss loss, double gamma, double w) {
  if (!(gamma > 0.0)) throw DomainViolation("prox_solve requires gamma > 0");
  const double target = 0.5 * w;
  const auto f = [&](double v) {
    return gamma * loss_derivative(loss, v) + v - target;
  };

  int budget = 200;

  // |l'| <= max(1, |target| + ...) near the root for the built-in losses, so
  // a bracket of a few gamma around w/2 almost always works; expand otherwise.
  double span = std::max(gamma, 1e-8);
  double lo = target - 2.0 * span;
  double hi = target + 2.0 * span;
  double flo = f(lo);
  double fhi = f(hi);
  while (flo > 0.0 && budget > 0) {
    hi = lo;
    fhi = flo;
    span *= 2.0;
    lo -= span;
    flo = f(lo);
    --budget;
  }
  while (fhi < 0.0 && budget > 0) {
    lo = hi;
    flo = fhi;
    span *= 2.0;
    hi += span;
    fhi = f(hi);
    --budget;
  }
  if (flo > 0.0 || fhi < 0.0)
    throw NonConvergence("prox bracket expansion exhausted its budget");

  double mid = 0.5 * (lo + hi);
  while (budget-- > 0) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) break;
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(mid)))
      break;
  }
  return 0.5 * (lo + hi);
}

double prox_residual(MarginLoss loss, double gamma, double w, double v) {
  const double target = 0.5 * w;
  if (loss == MarginLoss::Hinge && v == 1.0) {
    const double u = std::clamp((target - v) / gamma, -1.0, 0.0);
    return std::abs(gamma * u + v - target);
  }
  return std::abs(gamma * loss_derivative(loss, v) + v - target);
}

namespace {

struct GoldenResult {
  double arg_max;
  double value;
};

// Golden-section search for the maximum of the concave map
// x -> x*y - l(x) over [-bound, bound].
GoldenResult golden_max(MarginLoss loss, double y, double bound) {
  const auto h = [&](double x) { return x * y - loss_value(loss, x); };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = -bound;
  double b = bound;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double hc = h(c);
  double hd = h(d);
  const double tol = 1e-11 * std::max(1.0, bound);
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    if (hc >= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - gr * (b - a);
      hc = h(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + gr * (b - a);
      hd = h(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, h(x)};
}

}  // namespace

double legendre_conjugate(MarginLoss loss, double y, double search_bound) {
  if (!(search_bound > 0.0))
    throw DomainViolation("legendre_conjugate requires search_bound > 0");
  const GoldenResult res = golden_max(loss, y, search_bound);
  const double edge = std::max(1e-6, 1e-6 * search_bound);
  if (search_bound - std::abs(res.arg_max) <= edge)
    throw BoundaryMaximizer("conjugate maximizer at the search boundary");
  return res.value;
}

std::pair<double, double> legendre_identities_check(MarginLoss loss, double v) {
  if (loss == MarginLoss::Hinge)
    throw ConfigError("legendre_identities_check requires a strictly convex loss");
  const double u = loss_derivative(loss, v);
  const double bound = std::max(50.0, 2.0 * std::abs(v) + 10.0);
  const GoldenResult res = golden_max(loss, u, bound);
  if (bound - std::abs(res.arg_max) <= 1e-6 * bound)
    throw BoundaryMaximizer("conjugate maximizer at the search boundary");
  // conj'(u) is the maximizer location, conj(u) the maximum value
  return {u, u * res.arg_max - res.value};
}

}  // namespace ddlab
