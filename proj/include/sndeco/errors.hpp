#pragma once

#include <stdexcept>
#include <string>

namespace sndeco {

/// Invalid input value. `field()` names the offending parameter.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string field, const std::string& what)
      : std::domain_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical procedure (quadrature, root bracketing) did not reach its
/// tolerance. Carries the tolerance that was actually achieved.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Root could not be bracketed inside the scanned interval [lo, hi].
class BracketError : public NumericalError {
 public:
  BracketError(const std::string& what, double lo, double hi)
      : NumericalError(what, 0.0), lo_(lo), hi_(hi) {}
  double scanned_lo() const noexcept { return lo_; }
  double scanned_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Inconsistent configuration, e.g. a grid too small for the packets on it.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sndeco
