#pragma once

namespace ddlab {

/// Standard normal CDF through erfc. Both tails are evaluated from the same
/// complementary branch, so Phi(-z) and 1 - Phi(z) share one erfc call and
/// the symmetry carries no systematic bias; relative accuracy holds deep
/// into the lower tail.
double std_normal_cdf(double z);

/// Inputs of the closed-form test error: the order parameters r = |beta|^2/d
/// and s = beta.eta/d of a fixed student, its bias, and the +1 class mass.
struct ErrorInputs {
  double r;     // > 0
  double s;
  double b;
  double rho1;  // in (0,1)
};

/// Misclassification probability of the fixed student on fresh teacher data:
///   1 - rho1*Phi((s+b)/sqrt(r)) - rho_{-1}*Phi((s-b)/sqrt(r)),
/// computed as the cancellation-free sum of the two tail masses.
/// Throws InvalidR when r <= 0.
double test_error(const ErrorInputs& in);

}  // namespace ddlab
