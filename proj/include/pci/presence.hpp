#ifndef PCI_PRESENCE_HPP
#define PCI_PRESENCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pci/types.hpp"

namespace pci {

// One deduplicated observation: this user was seen in this place on this
// date. The triple is the unit everything downstream counts.
struct PresenceTuple {
  std::string place;
  std::string user;
  Day day = 0;

  friend bool operator==(const PresenceTuple& a, const PresenceTuple& b) {
    return a.day == b.day && a.place == b.place && a.user == b.user;
  }
  friend bool operator<(const PresenceTuple& a, const PresenceTuple& b) {
    if (a.place != b.place) return a.place < b.place;
    if (a.user != b.user) return a.user < b.user;
    return a.day < b.day;
  }
};

struct PresenceDays {
  std::string place;
  std::string user;
  std::uint64_t days = 0;
};

// Sᵢ: distinct users observed in a place.
struct PlaceUserCount {
  std::string place;
  std::uint64_t users = 0;
};

// Sᵢⱼ: users observed in both places, canonical place_i < place_j.
struct SharedUserCount {
  std::string place_i;
  std::string place_j;
  std::uint64_t shared = 0;
};

// In-memory aggregations. Inputs are treated as sets (duplicates
// collapse); outputs come back sorted by their natural keys. These are
// the reference forms; the streaming path below handles large stores.
std::vector<PresenceDays> presence_to_days(std::vector<PresenceTuple> tuples);
std::vector<PlaceUserCount> unique_users(std::vector<PresenceTuple> tuples);
std::vector<SharedUserCount> shared_users(std::vector<PresenceTuple> tuples);

// Streams a presence store CSV (header user,date,place; rows sorted by
// user, date, place). Throws DataError on malformed rows or ordering
// violations. fn is called once per row.
void read_presence_store(
    const std::string& path,
    const std::function<void(std::string_view user, Day day,
                             std::string_view place)>& fn);

struct StoreAggregates {
  std::vector<std::string> codes;          // sorted distinct place codes
  std::vector<std::uint64_t> place_users;  // Sᵢ, indexed like codes
  std::uint64_t distinct_users = 0;
  std::uint64_t tuples = 0;
};

// Two passes over the store: one to build the place dictionary, one to
// count. agg is fully populated before the first sink call, so sinks
// may index into agg.codes / agg.place_users. pair_sink receives
// (i, j, shared) with i < j in ascending order; days_sink, when given,
// receives (place, user, days) sorted by (place, user). Pair
// accumulation spills to disk past spill_threshold entries, which
// changes memory use but never results.
void aggregate_presence_store(
    const std::string& path, std::size_t spill_threshold,
    const std::string& tmp_dir, StoreAggregates& agg,
    const std::function<void(std::uint32_t i, std::uint32_t j,
                             std::uint64_t shared)>& pair_sink,
    const std::function<void(std::string_view place, std::string_view user,
                             std::uint64_t days)>* days_sink = nullptr);

}  // namespace pci

#endif
