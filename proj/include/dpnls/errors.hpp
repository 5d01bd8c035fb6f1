#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dpnls {

// Every library error carries a stable code (used verbatim in CLI error
// documents) and the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string module, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)), module_(std::move(module)) {}
  const std::string& code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  std::string code_;
  std::string module_;
};

// Bad user input: parameters outside the admissible region, malformed config.
struct ValidationError : Error {
  ValidationError(std::string module, const std::string& what)
      : Error("ValidationError", std::move(module), what) {}
};

// Numeric conditions detected while computing.
struct NumericError : Error {
  using Error::Error;
};

// A closed-form denominator vanished at the requested point.
struct SingularPoint : NumericError {
  explicit SingularPoint(double eta_at, const std::string& what)
      : NumericError("SingularPoint", "families", what), eta(eta_at) {}
  double eta;
};

// Family construction needs a real integration amplitude but a_squared < 0.
struct NonRealAmplitude : NumericError {
  explicit NonRealAmplitude(const std::string& what)
      : NumericError("NonRealAmplitude", "families", what) {}
};

// Root pattern has no closed-form family (complex pairs).
struct UnsupportedPattern : NumericError {
  explicit UnsupportedPattern(const std::string& what)
      : NumericError("UnsupportedPattern", "quartic", what) {}
};

// Two clusterings of the roots are consistent within the tolerance.
struct AmbiguousClustering : NumericError {
  explicit AmbiguousClustering(const std::string& what)
      : NumericError("AmbiguousClustering", "quartic", what) {}
};

// degenerate_limits called on a descriptor with no coincident roots.
struct NotDegenerate : NumericError {
  explicit NotDegenerate(const std::string& what)
      : NumericError("NotDegenerate", "families", what) {}
};

// Adaptive integrator step size collapsed.
struct StiffnessFailure : NumericError {
  explicit StiffnessFailure(double eta_at, const std::string& what)
      : NumericError("StiffnessFailure", "verify", what), eta(eta_at) {}
  double eta;
};

// Special-function argument outside the real domain.
struct DomainError : NumericError {
  explicit DomainError(const std::string& what)
      : NumericError("DomainError", "special", what) {}
};

// Residual scan had no admissible points left after exclusion.
struct AllPointsSingular : NumericError {
  explicit AllPointsSingular(const std::string& what)
      : NumericError("AllPointsSingular", "verify", what) {}
};

}  // namespace dpnls
