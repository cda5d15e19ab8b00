#pragma once

#include <stdexcept>
#include <string>

namespace swblow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid grid sizes, parameter combinations, malformed run configs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Coefficients that do not describe a real-valued field.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

// Total depth dropped below h_min; the SGN elliptic operator degenerates.
class DegenerateDepth : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// The shrinking analytic strip nu(t) reached its lower limit.
class StripExhausted : public Error {
 public:
  using Error::Error;
};

class HypothesesViolated : public Error {
 public:
  using Error::Error;
};

class ConstructionFailed : public Error {
 public:
  using Error::Error;
};

class DeltaTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace swblow
