#pragma once

#include <stdexcept>
#include <string>

namespace sld {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sampling requested for a tail law that has no exact sampler.
class UnsupportedSampler : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A search or certification exceeded its configured work budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rate minimization was asked to search a k-range that does not reach
/// the plateau of the variational function.
class InsufficientRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A planted construction failed its own spectral certificate.
class ConstructionInvalid : public std::runtime_error {
 public:
  ConstructionInvalid(const std::string& what, double measured)
      : std::runtime_error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

}  // namespace sld
