#ifndef PCI_MOVEMENT_HPP
#define PCI_MOVEMENT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pci/place_registry.hpp"
#include "pci/presence.hpp"
#include "pci/types.hpp"

namespace pci {

// Symmetric person-day movement count for one place pair. Canonical
// order: place_i < place_j.
struct OdMovement {
  std::string place_i;
  std::string place_j;
  std::uint64_t person_days = 0;
};

// One row of a third-party directed flow file.
struct DirectedFlow {
  std::string origin;
  std::string destination;
  std::uint64_t count = 0;
  Day date = 0;
};

// Every unordered pair of distinct places a user visits on one day
// counts as one person-day movement; days and users sum. Input order
// does not matter. Output sorted by (place_i, place_j).
std::vector<OdMovement> person_day_movements(std::vector<PresenceTuple> tuples);

// Streaming variant over a presence store on disk (rows sorted by
// user,date,place, as written by ingest). Pair counts spill to disk
// beyond spill_threshold distinct pairs. sink sees pairs in ascending
// (place_i, place_j) order.
void movements_from_store(
    const std::string& store_path, std::size_t spill_threshold,
    const std::string& tmp_dir,
    const std::function<void(const std::string& place_i,
                             const std::string& place_j,
                             std::uint64_t person_days)>& sink);

// Alternative within-day rule: each consecutive pair of distinct places
// in a user's timestamp-ordered day trace counts once. Feed events
// sorted by (user, timestamp, place); equal timestamps break ties by
// place code so the trace is unambiguous. Counts are reported on
// canonical unordered pairs.
class TransitionCounter {
 public:
  void observe(std::string_view user, std::int64_t ts_sec,
               std::string_view place);
  // Sorted by (place_i, place_j).
  std::vector<OdMovement> finish();

 private:
  struct Key {
    std::string a;
    std::string b;
    bool operator<(const Key& o) const {
      if (a != o.a) return a < o.a;
      return b < o.b;
    }
    bool operator==(const Key& o) const { return a == o.a && b == o.b; }
  };
  std::string cur_user_;
  Day cur_day_ = 0;
  std::string prev_place_;
  bool have_prev_ = false;
  std::vector<Key> hits_;
};

// Reads `origin,destination,count,date` rows. Dates are YYYY-MM-DD.
// Malformed rows raise DataError with the line number.
void read_flows_csv(const std::string& path,
                    const std::function<void(const DirectedFlow&)>& fn);

// Aggregates directed flows to `level` through the registry's parent
// chains, sums over all dates inside [from, to], then folds the two
// directions together (A->B total m plus B->A total n gives the pair
// m + n). Self-pairs after rollup are dropped. A code that cannot be
// resolved at the target level raises DataError.
std::vector<OdMovement> symmetrize_flows(const std::vector<DirectedFlow>& flows,
                                         const PlaceRegistry& registry,
                                         PlaceLevel level,
                                         Day from = INT32_MIN,
                                         Day to = INT32_MAX);

inline const char* kMovementHeader = "place_i,place_j,person_days";

}  // namespace pci

#endif
