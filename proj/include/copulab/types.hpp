#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace copulab {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside its mathematical domain (theta outside [0,1], point outside the unit square, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotADensity : public Error {
 public:
  using Error::Error;
};

class NotACopula : public Error {
 public:
  using Error::Error;
};

class ResolutionTooLow : public Error {
 public:
  using Error::Error;
};

class NonCommuting : public Error {
 public:
  using Error::Error;
};

class MarginalMismatch : public Error {
 public:
  using Error::Error;
};

class NoDensity : public Error {
 public:
  using Error::Error;
};

class NonPositive : public Error {
 public:
  using Error::Error;
};

/// Malformed textual/JSON specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// A point of the unit square.
struct UnitPoint {
  double u;
  double v;

  UnitPoint(double u_, double v_) : u(u_), v(v_) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
      throw DomainError("UnitPoint outside [0,1]^2: (" + std::to_string(u) + ", " +
                        std::to_string(v) + ")");
    }
  }
};

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace copulab
