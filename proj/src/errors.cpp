#include "qsf/errors.hpp"

namespace qsf {

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const PoleError*>(&e)) return "PoleError";
  if (dynamic_cast<const TailNotConverged*>(&e)) return "TailNotConverged";
  if (dynamic_cast<const RadiusError*>(&e)) return "RadiusError";
  if (dynamic_cast<const IntegerOrderError*>(&e)) return "IntegerOrderError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

}  // namespace qsf
