#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace symbidisk {

/// Base class of every error raised by the library. `code()` is a stable
/// machine-readable identifier used by the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Inconsistent block or matrix shapes.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension_mismatch", what) {}
};

/// JSON input that does not follow the expected schema.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error("schema_violation", what) {}
};

/// Input that is well-formed but outside an operation's domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::string code = "domain_error")
      : Error(std::move(code), what) {}
};

class NotPsdError : public DomainError {
 public:
  NotPsdError(const std::string& what, double eig_min)
      : DomainError(what, "not_psd"), eig_min_(eig_min) {}
  double eig_min() const noexcept { return eig_min_; }

 private:
  double eig_min_;
};

class NotContractiveError : public DomainError {
 public:
  NotContractiveError(const std::string& what, double norm)
      : DomainError(what, "not_contractive"), norm_(norm) {}
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

/// The resolvent of a transfer-function formula is numerically singular.
class EvaluationSingularity : public DomainError {
 public:
  EvaluationSingularity(const std::string& what, std::complex<double> x, std::complex<double> y)
      : DomainError(what, "evaluation_singularity"), x_(x), y_(y) {}
  std::complex<double> x() const noexcept { return x_; }
  std::complex<double> y() const noexcept { return y_; }

 private:
  std::complex<double> x_, y_;
};

}  // namespace symbidisk
