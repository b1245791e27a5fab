#include "pci/version.hpp"

#include <cstdio>

namespace pci {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string provenance_line(std::uint64_t config_hash) {
  std::string line = "# ";
  line += kToolName;
  line += " ";
  line += kToolVersion;
  line += " config=";
  line += hex64(config_hash);
  return line;
}

}  // namespace pci
