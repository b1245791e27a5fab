#ifndef PCI_TYPES_HPP
#define PCI_TYPES_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pci {

// Geographic levels, ordered coarse to fine. County and metro are
// alternative partitions of the same rank and never mix in one matrix.
enum class PlaceLevel : std::uint8_t { country, admin1, county, metro, tract };

// Geotag granularity of an event, ordered fine to coarse.
enum class SpatialResolution : std::uint8_t {
  coord,
  neighborhood_poi,
  city,
  admin1,
  country
};

// Rank in the coarse->fine order; county and metro share a rank.
inline int level_rank(PlaceLevel l) {
  switch (l) {
    case PlaceLevel::country: return 0;
    case PlaceLevel::admin1: return 1;
    case PlaceLevel::county: return 2;
    case PlaceLevel::metro: return 2;
    case PlaceLevel::tract: return 3;
  }
  return -1;
}

std::string_view to_string(PlaceLevel l);
std::string_view to_string(SpatialResolution r);
std::optional<PlaceLevel> parse_level(std::string_view token);
std::optional<SpatialResolution> parse_resolution(std::string_view token);

// Calendar date as days since 1970-01-01 UTC.
using Day = std::int32_t;

Day make_day(int year, unsigned month, unsigned day_of_month);
std::optional<Day> parse_date(std::string_view iso);  // YYYY-MM-DD
std::string day_to_string(Day d);

// Full ISO-8601 timestamp with an explicit zone offset, normalized to
// UTC epoch seconds. Rejects zone-less timestamps.
std::optional<std::int64_t> parse_timestamp_utc(std::string_view iso);

// The UTC calendar day an epoch-second instant falls on.
Day day_of_epoch_sec(std::int64_t epoch_sec);

// Convenience wrapper: timestamp straight to its UTC calendar day.
std::optional<Day> parse_timestamp_utc_day(std::string_view iso);

// Invalid configuration or flags; CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or inconsistent input data; CLI exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pci

#endif
