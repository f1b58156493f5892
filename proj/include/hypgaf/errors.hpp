#pragma once

#include <stdexcept>
#include <string>

namespace hypgaf {

/// Base class for every error raised by the library. `exit_code()` is the
/// process status the command-line front end reports for it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// A size cap (truncation degree, model length, DP length) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

/// Base for results that cannot be certified numerically.
class ReliabilityError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// |f| on the counting contour is too small relative to the truncation tail.
class UnreliableContour : public ReliabilityError {
 public:
  UnreliableContour(const std::string& what, double min_modulus, double threshold)
      : ReliabilityError(what), min_modulus_(min_modulus), threshold_(threshold) {}
  double min_modulus() const noexcept { return min_modulus_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double min_modulus_;
  double threshold_;
};

class NonConvergent : public ReliabilityError {
 public:
  using ReliabilityError::ReliabilityError;
};

/// A root lies within the ambiguity band around the counting circle.
class BoundaryAmbiguous : public ReliabilityError {
 public:
  BoundaryAmbiguous(const std::string& what, double root_modulus)
      : ReliabilityError(what), root_modulus_(root_modulus) {}
  double root_modulus() const noexcept { return root_modulus_; }

 private:
  double root_modulus_;
};

class DegenerateSpectrum : public ReliabilityError {
 public:
  using ReliabilityError::ReliabilityError;
};

class NumericRangeError : public ReliabilityError {
 public:
  using ReliabilityError::ReliabilityError;
};

class TiltInfeasible : public ReliabilityError {
 public:
  using ReliabilityError::ReliabilityError;
};

/// Raised when an experiment loses too many replicates to unreliable counts.
class ExperimentAborted : public ReliabilityError {
 public:
  using ReliabilityError::ReliabilityError;
};

/// The overcrowding construction did not produce a strictly dominant term.
class CertificateFailed : public ReliabilityError {
 public:
  CertificateFailed(const std::string& what, double margin, double theta)
      : ReliabilityError(what), margin_(margin), theta_(theta) {}
  double margin() const noexcept { return margin_; }
  /// Contour angle where the margin was attained (NaN when not applicable).
  double theta() const noexcept { return theta_; }

 private:
  double margin_;
  double theta_;
};

}  // namespace hypgaf
