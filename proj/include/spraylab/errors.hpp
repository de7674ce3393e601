// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace spraylab {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A non-finite value appeared in a computed quantity; the message carries the
// index path of the offending slot.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

// A finite-difference stencil or other probe stepped outside the chart box.
class DomainExit : public Error {
 public:
  using Error::Error;
};

// Metric tensor failed its positive-definiteness factorization.
class MetricDegenerate : public Error {
 public:
  using Error::Error;
};

// Fundamental tensor of a Finsler norm is not positive definite at the sample.
class NotStronglyConvex : public Error {
 public:
  using Error::Error;
};

// A field declared positively homogeneous failed the scaling probe.
class HomogeneityViolation : public Error {
 public:
  using Error::Error;
};

// An even/odd split was requested on an untagged term.
class ParityViolation : public Error {
 public:
  using Error::Error;
};

// A conditional verification was invoked with a broken premise.
class PremiseFailed : public Error {
 public:
  using Error::Error;
};

// Config or expression text could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Config parsed but violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace spraylab
