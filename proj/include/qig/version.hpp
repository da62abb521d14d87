#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include "qig/functions.hpp"
#include "qig/rng.hpp"

namespace qig {

inline constexpr const char* kVersion = "1.0.0";

// Hash of the catalog surface (names, parameter docs, flags, a probe value per
// representative) so the version string changes whenever the catalog does.
inline std::uint64_t catalog_hash() {
  std::ostringstream os;
  for (const CatalogEntryDoc& e : catalog_entries()) {
    os << e.name << '|' << e.parameter_doc << '|' << e.representative.selector() << '|'
       << e.representative.operator_monotone << e.representative.operator_convex
       << e.representative.standard << '|';
    os.precision(17);
    os << e.representative.eval(1.5) << ';';
  }
  return fnv1a64(os.str());
}

inline std::string version_string() {
  std::ostringstream os;
  os << kVersion << " (catalog " << std::hex << catalog_hash() << ")";
  return os.str();
}

}  // namespace qig
