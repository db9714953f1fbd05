#include "ddlab/generalization.hpp"

#include <cmath>

#include "ddlab/errors.hpp"

namespace ddlab {

double std_normal_cdf(double z) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  if (z < 0.0) return 0.5 * std::erfc(-z * inv_sqrt2);
  return 1.0 - 0.5 * std::erfc(z * inv_sqrt2);
}

double test_error(const ErrorInputs& in) {
  if (!(in.r > 0.0)) throw InvalidR("test_error requires r > 0");
  const double inv_sigma = 1.0 / std::sqrt(in.r);
  return in.rho1 * std_normal_cdf(-(in.s + in.b) * inv_sigma) +
         (1.0 - in.rho1) * std_normal_cdf(-(in.s - in.b) * inv_sigma);
}

}  // namespace ddlab
