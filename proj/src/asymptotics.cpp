#include "ddlab/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "ddlab/generalization.hpp"
#include "ddlab/parallel.hpp"

namespace ddlab {

void ProblemConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ConfigError("alpha must be positive and finite");
  if (!(lambda >= 1e-12) || !std::isfinite(lambda))
    throw ConfigError("lambda must be >= 1e-12 (exact 0 is not supported)");
  if (!(rho1 > 0.0) || !(rho1 < 1.0))
    throw ConfigError("rho1 must lie strictly inside (0, 1)");
}

void SolverOptions::validate() const {
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(damping > 0.0) || !(damping <= 1.0))
    throw ConfigError("damping must lie in (0, 1]");
}

FixedPointNonConvergence::FixedPointNonConvergence(
    const AsymptoticSolution& last, double residual, int iterations)
    : NonConvergence("fixed point not converged after " +
                     std::to_string(iterations) +
                     " iterations, residual max-norm " +
                     std::to_string(residual)),
      last_(last),
      residual_(residual) {}

AsymptoticSolution solve_square_closed_form(const ProblemConfig& cfg) {
  cfg.validate();

  // Positive root of 4*lambda*g^2 + (alpha + 4*lambda - 1)*g - 1 = 0.
  // The root product is -1/(4*lambda) < 0, so exactly one root is positive;
  // the two branches below avoid cancellation for either sign of b.
  const double b = cfg.alpha + 4.0 * cfg.lambda - 1.0;
  const double sq = std::sqrt(b * b + 16.0 * cfg.lambda);
  const double gamma = b >= 0.0 ? 2.0 / (sq + b) : (sq - b) / (8.0 * cfg.lambda);

  const double rr = cfg.rho1 * (1.0 - cfg.rho1);
  const double s =
      8.0 * cfg.alpha * gamma * rr / (1.0 + gamma + 4.0 * cfg.alpha * gamma * rr);
  const double bias = (2.0 - s) * (2.0 * cfg.rho1 - 1.0);

  const double one_g = 1.0 + gamma;
  const double denom = one_g * one_g - cfg.alpha * gamma * gamma;
  if (std::abs(denom) < 1e-12)
    throw SingularRStar("r* denominator (1+gamma)^2 - alpha*gamma^2 vanishes");
  const double num = cfg.alpha * gamma * gamma * ((s - 2.0) * (s - 2.0) - bias * bias) +
                     one_g * one_g * s * s;
  const double r = num / denom;
  if (r < 0.0)
    throw NegativeRStar("closed form yields r* < 0 outside its validity region");

  return {r, s, bias, gamma};
}

Eigen::Vector4d theorem2_residuals(const AsymptoticSolution& sol,
                                   const ProblemConfig& cfg, MarginLoss loss,
                                   const HermiteRule& rule) {
  const MixtureLaw law{sol.s_star, sol.b_star, sol.r_star, cfg.rho1};
  const auto d_of = [&](double w) {
    return w - 2.0 * prox_solve(loss, sol.gamma_star, w);
  };

  const double e_gd =
      expect(law, rule, [&](double w, double g, int) { return g * d_of(w); });
  const double e_d =
      expect(law, rule, [&](double w, double, int) { return d_of(w); });
  const double e_yd =
      expect(law, rule, [&](double w, double, int y) { return y * d_of(w); });
  const double e_dd = expect(law, rule, [&](double w, double, int) {
    const double t = d_of(w);
    return t * t;
  });

  Eigen::Vector4d res;
  res[0] = cfg.alpha / std::sqrt(sol.r_star) * e_gd -
           (1.0 - 4.0 * cfg.lambda * sol.gamma_star);
  res[1] = -cfg.alpha * e_d - sol.s_star;
  res[2] = e_yd;
  res[3] = cfg.alpha * e_dd - (sol.r_star - sol.s_star * sol.s_star);
  return res;
}

namespace {

void project_domain(AsymptoticSolution& x) {
  if (!std::isfinite(x.r_star) || !std::isfinite(x.s_star) ||
      !std::isfinite(x.b_star) || !std::isfinite(x.gamma_star))
    throw DomainViolation("fixed-point iterate left the finite domain");
  x.gamma_star = std::max(x.gamma_star, 1e-10);
  x.r_star = std::max({x.r_star, x.s_star * x.s_star, 1e-12});
}

// Root of b -> E[y*D(w)] under MixtureLaw(s, b, r); the map is nondecreasing
// in b, so a bracketed bisection is safe.
double solve_bias_equation(const AsymptoticSolution& x,
                           const ProblemConfig& cfg, MarginLoss loss,
                           const HermiteRule& rule) {
  const auto phi = [&](double bias) {
    const MixtureLaw law{x.s_star, bias, x.r_star, cfg.rho1};
    return expect(law, rule, [&](double w, double, int y) {
      return y * (w - 2.0 * prox_solve(loss, x.gamma_star, w));
    });
  };

  double span = 1.0 + std::abs(x.b_star);
  double lo = x.b_star - span;
  double hi = x.b_star + span;
  double flo = phi(lo);
  double fhi = phi(hi);
  for (int k = 0; k < 60 && flo > 0.0; ++k) {
    hi = lo;
    fhi = flo;
    span *= 2.0;
    lo -= span;
    flo = phi(lo);
  }
  for (int k = 0; k < 60 && fhi < 0.0; ++k) {
    lo = hi;
    flo = fhi;
    span *= 2.0;
    hi += span;
    fhi = phi(hi);
  }
  if (flo > 0.0 || fhi < 0.0)
    throw DomainViolation("bias equation has no bracketed root");

  for (int k = 0; k < 100; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = phi(mid);
    if (fm == 0.0) return mid;
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

AsymptoticSolution solve_fixed_point(const ProblemConfig& cfg, MarginLoss loss,
                                     const SolverOptions& opts) {
  cfg.validate();
  opts.validate();
  const HermiteRule rule = hermite_rule(opts.quad_nodes);

  AsymptoticSolution x =
      opts.initial ? *opts.initial : solve_square_closed_form(cfg);
  project_domain(x);

  const double theta = opts.damping;
  double residual = std::numeric_limits<double>::infinity();

  for (int it = 0; it <= opts.max_iterations; ++it) {
    const Eigen::Vector4d res = theorem2_residuals(x, cfg, loss, rule);
    if (!res.allFinite())
      throw DomainViolation("fixed-point residuals are not finite");
    residual = res.cwiseAbs().maxCoeff();
    if (residual <= opts.tolerance) return x;
    if (it == opts.max_iterations) break;

    const auto d_of = [&](double w) {
      return w - 2.0 * prox_solve(loss, x.gamma_star, w);
    };

    // (i) s from the first-moment equation
    {
      const MixtureLaw law{x.s_star, x.b_star, x.r_star, cfg.rho1};
      const double e_d =
          expect(law, rule, [&](double w, double, int) { return d_of(w); });
      x.s_star += theta * (-cfg.alpha * e_d - x.s_star);
    }
    // (ii) b from the stationarity of the bias
    {
      const double b_root = solve_bias_equation(x, cfg, loss, rule);
      x.b_star += theta * (b_root - x.b_star);
    }
    // (iii) r from the second-moment equation
    {
      const MixtureLaw law{x.s_star, x.b_star, x.r_star, cfg.rho1};
      const double e_dd = expect(law, rule, [&](double w, double, int) {
        const double t = d_of(w);
        return t * t;
      });
      x.r_star +=
          theta * (x.s_star * x.s_star + cfg.alpha * e_dd - x.r_star);
    }
    project_domain(x);
    // (iv) gamma from the g-correlation equation
    {
      const MixtureLaw law{x.s_star, x.b_star, x.r_star, cfg.rho1};
      const double e_gd = expect(
          law, rule, [&](double w, double g, int) { return g * d_of(w); });
      const double g_new =
          (1.0 - cfg.alpha / std::sqrt(x.r_star) * e_gd) / (4.0 * cfg.lambda);
      x.gamma_star += theta * (g_new - x.gamma_star);
    }
    project_domain(x);
  }
  throw FixedPointNonConvergence(x, residual, opts.max_iterations);
}

std::vector<CurvePoint> error_curve(const ProblemConfig& cfg_template,
                                    const std::vector<double>& alphas,
                                    MarginLoss loss, const SolverOptions& opts) {
  if (alphas.empty()) throw ConfigError("alpha grid is empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw ConfigError("alpha grid must be positive");
    if (i > 0 && !(alphas[i] > alphas[i - 1]))
      throw ConfigError("alpha grid must be strictly increasing");
  }

  std::vector<CurvePoint> curve(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t i) {
    CurvePoint& pt = curve[i];
    pt.alpha = alphas[i];
    try {
      ProblemConfig cfg = cfg_template;
      cfg.alpha = alphas[i];
      pt.solution = loss == MarginLoss::Square
                        ? solve_square_closed_form(cfg)
                        : solve_fixed_point(cfg, loss, opts);
      pt.test_error = test_error({pt.solution.r_star, pt.solution.s_star,
                                  pt.solution.b_star, cfg.rho1});
    } catch (const Error& e) {
      pt.status = e.code();
      pt.test_error = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return curve;
}

}  // namespace ddlab
