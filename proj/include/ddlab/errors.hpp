#pragma once

#include <stdexcept>
#include <string>

namespace ddlab {

// Base class for library errors. code() is a stable machine-readable token;
// sweep drivers record it in the CSV status column instead of aborting.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

struct NonConvergence : Error {
  explicit NonConvergence(const std::string& what)
      : Error("non_convergence", what) {}
};

struct BoundaryMaximizer : Error {
  explicit BoundaryMaximizer(const std::string& what)
      : Error("boundary_maximizer", what) {}
};

struct UnsupportedOrder : Error {
  explicit UnsupportedOrder(const std::string& what)
      : Error("unsupported_order", what) {}
};

struct SingularRStar : Error {
  explicit SingularRStar(const std::string& what)
      : Error("singular_r_star", what) {}
};

struct NegativeRStar : Error {
  explicit NegativeRStar(const std::string& what)
      : Error("negative_r_star", what) {}
};

struct DomainViolation : Error {
  explicit DomainViolation(const std::string& what)
      : Error("domain_violation", what) {}
};

struct InvalidR : Error {
  explicit InvalidR(const std::string& what) : Error("invalid_r", what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension_mismatch", what) {}
};

struct Diverged : Error {
  explicit Diverged(const std::string& what) : Error("diverged", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("config_error", what) {}
};

struct MissingColumn : Error {
  explicit MissingColumn(const std::string& what)
      : Error("missing_column", what) {}
};

}  // namespace ddlab
