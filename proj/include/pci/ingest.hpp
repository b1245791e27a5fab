#ifndef PCI_INGEST_HPP
#define PCI_INGEST_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pci/events.hpp"
#include "pci/place_registry.hpp"
#include "pci/types.hpp"

namespace pci {

struct IngestConfig {
  PlaceLevel level = PlaceLevel::county;
  Day from = std::numeric_limits<Day>::min();  // inclusive
  Day to = std::numeric_limits<Day>::max();    // inclusive
  const SourceWhitelist* whitelist = nullptr;  // null disables source filter
  int threads = 1;
  // Tuples buffered in memory before a sorted run spills to disk. Only
  // affects memory use, never results.
  std::size_t spill_threshold = std::size_t(1) << 25;
  std::string tmp_dir = ".";
};

struct IngestReport {
  std::uint64_t read = 0;
  std::uint64_t kept = 0;
  std::uint64_t rejected_parse = 0;
  std::uint64_t rejected_source = 0;
  std::uint64_t rejected_resolution = 0;
  std::uint64_t rejected_window = 0;
  std::uint64_t rejected_unresolved = 0;
  std::uint64_t tuples = 0;  // unique (place, user, date) rows emitted
  std::uint64_t users = 0;   // distinct users among kept events
  std::uint64_t places = 0;  // distinct places among kept events

  std::uint64_t rejected() const {
    return rejected_parse + rejected_source + rejected_resolution +
           rejected_window + rejected_unresolved;
  }
  std::string to_json() const;
};

// Streams NDJSON event files through parse -> source filter ->
// resolution filter -> window filter -> place resolution, deduplicates
// to (place, user, date) and emits tuples sorted by (user, date, place
// code). The sink sees each unique tuple exactly once. Work is sharded
// across cfg.threads; results are identical for any thread count.
IngestReport ingest_files(
    const std::vector<std::string>& paths, const PlaceRegistry& registry,
    const IngestConfig& cfg,
    const std::function<void(std::string_view user, Day day,
                             std::string_view place_code)>& sink);

// Same filters, but keeps every event occurrence with its timestamp for
// within-day ordering. Emits (user, ts, place code) sorted by (user,
// ts, place code); exact duplicate triples are collapsed.
IngestReport ingest_files_with_timestamps(
    const std::vector<std::string>& paths, const PlaceRegistry& registry,
    const IngestConfig& cfg,
    const std::function<void(std::string_view user, std::int64_t ts_sec,
                             std::string_view place_code)>& sink);

}  // namespace pci

#endif
