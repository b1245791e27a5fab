#ifndef PCI_PLACE_REGISTRY_HPP
#define PCI_PLACE_REGISTRY_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pci/geometry.hpp"
#include "pci/types.hpp"

namespace pci {

struct Place {
  std::string code;
  PlaceLevel level = PlaceLevel::county;
  std::string name;
  std::string parent_code;  // empty when the place has no parent
  LatLon centroid;
  bool has_geometry = false;
  // Rings of a Polygon or flattened MultiPolygon, evaluated even-odd.
  Polygon geometry;
  // Source geometry, verbatim, so exports round-trip the original shape.
  std::string geometry_json;
};

// Does an event at this geotag resolution carry enough precision to be
// aggregated at the given level? Country accepts everything; each finer
// level drops the coarsest remaining resolution, down to tract which only
// accepts coordinate and neighborhood/POI tags.
bool resolution_admits(SpatialResolution res, PlaceLevel level);

// Haversine miles between stored centroids.
double centroid_distance(const Place& a, const Place& b);

// Immutable multi-level place hierarchy with per-level spatial indexes.
// Lookups are safe from any number of threads once loaded.
class PlaceRegistry {
 public:
  // Reads a GeoJSON FeatureCollection. Every feature needs properties
  // code, level, name, centroid_lat, centroid_lon (parent_code optional)
  // and may carry a Polygon/MultiPolygon geometry. Throws DataError on
  // duplicate codes within a level, malformed features, parents at a
  // rank that is not coarser, centroids outside their own geometry, or
  // overlapping geometries within one level.
  static PlaceRegistry load(const std::string& path);

  // geo_places_ holds pointers into by_level_; vector moves keep element
  // addresses stable, copies would not.
  PlaceRegistry() = default;
  PlaceRegistry(const PlaceRegistry&) = delete;
  PlaceRegistry& operator=(const PlaceRegistry&) = delete;
  PlaceRegistry(PlaceRegistry&&) = default;
  PlaceRegistry& operator=(PlaceRegistry&&) = default;

  std::size_t size(PlaceLevel level) const {
    return by_level_[int(level)].size();
  }
  std::size_t total_size() const;

  // Places of one level, sorted by code.
  const std::vector<Place>& places(PlaceLevel level) const {
    return by_level_[int(level)];
  }

  const Place* find(PlaceLevel level, std::string_view code) const;

  // Point-in-polygon lookup against the level's geometries. A point on a
  // shared boundary resolves to the lexicographically smallest code.
  // Returns nullptr for a miss; throws DataError on out-of-range input.
  const Place* assign_point(const LatLon& p, PlaceLevel level) const;

  // Walks the parent chain from p toward coarser levels until the target
  // level is reached. Returns p itself when already there, nullptr when
  // the chain is broken or overshoots.
  const Place* ancestor_at(const Place& p, PlaceLevel target) const;

  // Resolves a bare code against the target level: exact level match
  // first, then the code is searched at finer levels and rolled up
  // through parent links. Returns nullptr when nothing matches.
  const Place* resolve_code(std::string_view code, PlaceLevel target) const;

 private:
  // Finds the place named by a parent_code whose rank is coarser than
  // child_rank, preferring the nearest (finest) such level.
  const Place* parent_of(std::string_view parent_code, int child_rank) const;

  void build_indexes();
  void validate();

  std::vector<Place> by_level_[5];
  GridIndex grid_[5];
  // grid_[] candidate indices point into geo_places_[] (places of that
  // level that carry geometry, in code order).
  std::vector<const Place*> geo_places_[5];
};

}  // namespace pci

#endif
