#pragma once

#include <stdexcept>
#include <string>

namespace binn {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// A kernel was evaluated at coincident source and field points.
class SingularEvaluationError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SpecificationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value met while evaluating a loss or its gradient.
class LossError : public Error {
 public:
  LossError(const std::string& what, std::size_t point)
      : Error(what + " (collocation point " + std::to_string(point) + ")"), point_(point) {}
  std::size_t point() const noexcept { return point_; }

 private:
  std::size_t point_;
};

/// Direct solve rejected because the system is numerically singular.
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, double rcond) : Error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace binn
