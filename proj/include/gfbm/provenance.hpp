#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gfbm/sampled.hpp"

namespace gfbm {

std::string tool_version();

struct Provenance {
  std::string density;  ///< descriptor
  std::uint64_t density_hash = 0;
  Convention convention = Convention::covariance_consistent;
  std::optional<std::uint64_t> seed;
};

/// "# key: value" comment lines heading every CSV the tool writes.
void write_provenance(std::ostream& out, const Provenance& p);

}  // namespace gfbm
