#ifndef PCI_RUN_CONFIG_HPP
#define PCI_RUN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pci/types.hpp"

namespace pci {

// Everything a run needs, as it arrives from the config file and flags.
// Values stay in string form until a command validates the ones it uses,
// so an unused bad field never blocks an unrelated command.
struct RunConfig {
  std::string registry;
  std::string level = "county";
  std::vector<std::string> events;
  std::string from;  // YYYY-MM-DD, empty = open
  std::string to;
  std::string whitelist;
  std::string out = ".";
  unsigned threads = 0;  // 0 = all cores
  std::uint64_t spill = 1ull << 25;
  std::string store;
  std::string flows;
  std::string pci_a;
  std::string pci_b;
  std::string covariates;
  std::string assignment;
  std::string values;
  std::string focal;
  std::string region_level = "admin1";
  unsigned k = 0;
  double scale = 1000.0;
  bool include_self = false;
  bool transitions = false;

  PlaceLevel parsed_level() const;
  PlaceLevel parsed_region_level() const;
  // Window endpoints; empty strings mean unbounded. Throws ConfigError
  // on malformed dates or start > end.
  std::optional<Day> parsed_from() const;
  std::optional<Day> parsed_to() const;
  void check_window() const;
  int effective_threads() const;
};

// Merges `key = value` lines from a config file into cfg. Lines starting
// with '#' and blank lines are skipped; keys use the long flag spellings
// (registry, level, events, from, to, whitelist, out, threads, spill,
// store, flows, pci, pci-b, covariates, assignment, values, focal,
// region-level, k, scale, include-self, transitions). `events` holds a
// comma-separated list. Unknown keys and malformed lines raise
// ConfigError.
void apply_config_file(const std::string& path, RunConfig& cfg);

// Hash over the result-determining fields for one command. Threads,
// spill threshold, and output paths are excluded on purpose: they may
// change without changing any output byte.
std::uint64_t semantic_hash(const RunConfig& cfg, std::string_view command);

// The `#`-prefixed first line written to every output of this run.
std::string run_provenance(const RunConfig& cfg, std::string_view command);

}  // namespace pci

#endif
