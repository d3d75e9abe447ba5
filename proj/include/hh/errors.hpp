#pragma once

#include <stdexcept>
#include <string>

namespace hh {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct UnboundParameter : Error {
  explicit UnboundParameter(const std::string& name)
      : Error("unbound parameter: " + name), parameter(name) {}
  std::string parameter;
};

// A singular locus, a log/sqrt/division argument, or a pow base is within
// threshold of zero at the requested point.
struct SingularPoint : Error {
  explicit SingularPoint(const std::string& msg) : Error("singular point: " + msg) {}
};

struct DegenerateMetric : Error {
  explicit DegenerateMetric(const std::string& msg) : Error("degenerate metric: " + msg) {}
};

// det(g) too close to the negative real axis: the principal-branch volume
// density is ambiguous, so duality splits are refused instead of guessed.
struct BranchAmbiguity : Error {
  explicit BranchAmbiguity(const std::string& msg) : Error("branch ambiguity: " + msg) {}
};

struct NotKilling : Error {
  explicit NotKilling(const std::string& msg) : Error("not a Killing field: " + msg) {}
};

// Mixed null/nonnull signals that would contradict the invariant
// characterization; treated as an internal consistency failure.
struct TheoremViolation : Error {
  explicit TheoremViolation(const std::string& msg) : Error("invariant criterion violated: " + msg) {}
};

struct DegenerateLegendre : Error {
  explicit DegenerateLegendre(const std::string& msg) : Error("degenerate Legendre transform: " + msg) {}
};

struct DegenerateSigma : Error {
  explicit DegenerateSigma(const std::string& msg) : Error("degenerate Sigma data: " + msg) {}
};

struct DegenerateV : Error {
  explicit DegenerateV(const std::string& msg) : Error("degenerate V: " + msg) {}
};

struct ComplexLeak : Error {
  explicit ComplexLeak(const std::string& msg) : Error("complex leak: " + msg) {}
};

struct LorentzianObstruction : Error {
  explicit LorentzianObstruction(const std::string& msg)
      : Error("Lorentzian obstruction: " + msg) {}
};

struct NoConvergence : Error {
  NoConvergence(const std::string& msg, double best) : Error("no convergence: " + msg), best_residual(best) {}
  double best_residual;
};

struct ConstraintViolation : Error {
  explicit ConstraintViolation(const std::string& msg) : Error("constraint violation: " + msg) {}
};

struct UnknownFamily : Error {
  explicit UnknownFamily(const std::string& id) : Error("unknown family: " + id) {}
};

struct CalibrationError : Error {
  explicit CalibrationError(const std::string& msg) : Error("calibration error: " + msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

}  // namespace hh
