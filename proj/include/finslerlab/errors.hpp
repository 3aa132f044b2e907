#pragma once

#include <stdexcept>
#include <string>

namespace finslerlab {

// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A field or derivative evaluated to NaN/Inf; usually a domain violation upstream.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

// An input left the mathematical domain (negative radicand, zero denominator, ...).
class DomainViolation : public Error {
 public:
  using Error::Error;
};

// The fundamental tensor (or a_ij) is singular / not positive definite.
class SingularMetric : public Error {
 public:
  using Error::Error;
};

// A p/q branch formula has a negative inner radicand at the requested point.
class BranchUndefined : public Error {
 public:
  using Error::Error;
};

// The quartic in q has no nonzero real root at this u.
class NoRealRoot : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature could not meet the requested tolerance.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

// Flag plane is (numerically) degenerate: span{y,u} has vanishing Gram determinant.
class DegenerateFlag : public Error {
 public:
  using Error::Error;
};

// Spray coefficients are not collinear with y within tolerance.
class NotProjectivelyFlat : public Error {
 public:
  using Error::Error;
};

// Deformation requested for a signature the library does not cover (kappa < 0).
class UnsupportedSignature : public Error {
 public:
  using Error::Error;
};

// Evaluation too close to the y = +-b singular directions of a pm_b metric.
class SingularDirection : public Error {
 public:
  using Error::Error;
};

}  // namespace finslerlab
