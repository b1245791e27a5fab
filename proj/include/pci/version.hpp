#ifndef PCI_VERSION_HPP
#define PCI_VERSION_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace pci {

inline constexpr std::string_view kToolName = "pci-tools";
inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v);

// First line of every output file: tool version plus the hash of the
// result-determining configuration.
std::string provenance_line(std::uint64_t config_hash);

}  // namespace pci

#endif
