#pragma once

#include <stdexcept>
#include <string>

namespace confgeo {

// Base of every error raised by the library. The CLI maps the two
// categories below onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: parameters out of range, points off their space form,
// signature mismatches, points outside a chart's domain.
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

// A conformal coordinate map was applied on its excluded hyperplane or a
// composed map hit a vanishing denominator.
class ChartDomainError : public DomainError {
 public:
  ChartDomainError(const std::string& what, std::string excluded)
      : DomainError(what), excluded_(std::move(excluded)) {}
  const std::string& excluded() const { return excluded_; }

 private:
  std::string excluded_;
};

// Numerical failures: degenerate frames, non-regular points, failed
// constructions and internal cross-check mismatches.
class ComputationError : public Error {
 public:
  using Error::Error;
};

class RegularityError : public ComputationError {
 public:
  RegularityError(const std::string& what, double value)
      : ComputationError(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

class ConstructionError : public ComputationError {
 public:
  ConstructionError(const std::string& what, double residual)
      : ComputationError(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InconsistencyError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace confgeo
