#ifndef PCI_EVENTS_HPP
#define PCI_EVENTS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>

#include "pci/types.hpp"

namespace pci {

// One geotagged post. Carries coordinates, a place code, or both; res says
// how precise the geotag is and gates which aggregation levels may use it.
struct GeoEvent {
  std::string user;
  std::int64_t ts_sec = 0;  // UTC epoch seconds
  Day day = 0;              // UTC calendar day of ts_sec
  bool has_coord = false;
  double lat = 0.0;
  double lon = 0.0;
  SpatialResolution res = SpatialResolution::coord;
  std::string place_code;  // empty when absent
  std::string source;
};

enum class EventParse : std::uint8_t {
  ok,
  bad_json,
  missing_field,
  bad_timestamp,
  bad_resolution,
  bad_location,  // no usable location, or coordinates out of range
};

std::string_view to_string(EventParse e);

// Parses one NDJSON line into out. Validation covers required fields
// (user, ts, res, source), timestamp shape, resolution token, the
// location rules (coord resolution needs lat/lon; lat and lon travel
// together; some location must be present) and coordinate ranges.
EventParse parse_event(std::string_view line, GeoEvent& out);

// Exact-match, case-sensitive source filter.
class SourceWhitelist {
 public:
  // One source per line, '#' comments and blank lines skipped, line
  // content taken verbatim apart from a trailing \r.
  static SourceWhitelist load(const std::string& path);

  void insert(std::string source) { set_.insert(std::move(source)); }
  bool contains(std::string_view source) const {
    return set_.find(source) != set_.end();
  }
  bool empty() const { return set_.empty(); }
  std::size_t size() const { return set_.size(); }

 private:
  // Transparent hashing so lookups take string_view without allocating.
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view sv) const {
      return std::hash<std::string_view>{}(sv);
    }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> set_;
};

}  // namespace pci

#endif
