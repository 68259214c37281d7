#pragma once

#include <stdexcept>
#include <string>

namespace qsf {

/// Argument outside the mathematical domain of a function (q outside (0,1),
/// constraint on nu violated, negative argument with fractional power, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A vanishing denominator factor was hit.
class PoleError : public std::runtime_error {
 public:
  explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

/// A series, product or lattice sum did not meet the tail criterion within its
/// term budget.
class TailNotConverged : public std::runtime_error {
 public:
  explicit TailNotConverged(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the disc of convergence of a series that is never
/// continued.
class RadiusError : public std::domain_error {
 public:
  explicit RadiusError(const std::string& what) : std::domain_error(what) {}
};

/// The K functions are undefined at integer order (sin(nu pi) = 0).
class IntegerOrderError : public std::domain_error {
 public:
  explicit IntegerOrderError(const std::string& what) : std::domain_error(what) {}
};

/// Short type name for a caught error, used in report notes.
std::string error_kind(const std::exception& e);

}  // namespace qsf
