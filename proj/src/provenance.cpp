#include "gfbm/provenance.hpp"

#include <cstdio>
#include <ostream>

namespace gfbm {

std::string tool_version() { return GFBM_VERSION; }

void write_provenance(std::ostream& out, const Provenance& p) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(p.density_hash));
  out << "# tool: gfbm " << tool_version() << '\n'
      << "# density: " << p.density << '\n'
      << "# density_hash: " << hash << '\n'
      << "# convention: " << to_string(p.convention) << '\n'
      << "# seed: " << (p.seed ? std::to_string(*p.seed) : std::string("none")) << '\n';
}

}  // namespace gfbm
