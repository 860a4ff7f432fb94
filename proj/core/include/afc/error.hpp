#pragma once

#include <stdexcept>
#include <string>

namespace afc {

// Argument outside the mathematical domain of an operation.
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// An iterative scheme exhausted its budget without meeting its tolerance.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& msg, double achieved)
      : std::runtime_error(msg), achieved_error(achieved) {}
  double achieved_error;
};

// Operation not defined for the requested family (e.g. closed-form moments
// for half-Cauchy, MMEs for gamma).
class unsupported_family_error : public std::invalid_argument {
 public:
  explicit unsupported_family_error(const std::string& msg)
      : std::invalid_argument(msg) {}
};

// A moment-existence or moment-compatibility condition failed, e.g. the
// Lomax requirement S1 > M1^2, or shape conditions like lambda > 2.
class moment_condition_error : public std::runtime_error {
 public:
  explicit moment_condition_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Intermediate value left the representable range.
class overflow_error : public std::runtime_error {
 public:
  explicit overflow_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace afc
