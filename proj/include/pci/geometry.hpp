#ifndef PCI_GEOMETRY_HPP
#define PCI_GEOMETRY_HPP

#include <cstdint>
#include <vector>

namespace pci {

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

// Great-circle distance in miles (spherical Earth, R = 3958.8 mi).
double haversine_miles(const LatLon& a, const LatLon& b);

// One ring of a polygon boundary. Vertices are stored without the closing
// duplicate; the edge from back() to front() is implied.
struct Ring {
  std::vector<LatLon> pts;
};

// Polygon as a set of rings evaluated with even-odd parity, so holes need no
// special casing. Containment treats the boundary as inside.
struct Polygon {
  std::vector<Ring> rings;
  double min_lat = 0.0, max_lat = 0.0, min_lon = 0.0, max_lon = 0.0;

  // Computes the bounding box; call once after rings are filled.
  void finalize();

  bool bbox_contains(const LatLon& p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon &&
           p.lon <= max_lon;
  }

  bool contains(const LatLon& p) const;
  bool on_boundary(const LatLon& p) const;
  bool strictly_inside(const LatLon& p) const {
    return contains(p) && !on_boundary(p);
  }

  // A point in the interior, used by the overlap validator. Tries the vertex
  // average of the first ring, then centroids of the fan triangles.
  LatLon representative_point() const;
};

// True when the open segments ab and cd cross at a single interior point.
// Touching at an endpoint or running collinear does not count, so polygons
// that share a border survive validation.
bool segments_properly_cross(const LatLon& a, const LatLon& b, const LatLon& c,
                             const LatLon& d);

// Interior overlap test: any proper edge crossing, or one polygon's
// representative point strictly inside the other.
bool polygons_overlap(const Polygon& a, const Polygon& b);

// Uniform grid over the union bounding box of a polygon set. Cells hold the
// indices of every polygon whose bbox touches them, kept in ascending order
// so callers probing candidates see a stable ordering.
class GridIndex {
 public:
  void build(const std::vector<const Polygon*>& polys);
  // Indices of polygons whose bbox could contain p, ascending.
  const std::vector<std::uint32_t>& candidates(const LatLon& p) const;

 private:
  int cell_of(double v, double lo, double inv_step, int n) const;

  double min_lat_ = 0.0, min_lon_ = 0.0;
  double max_lat_ = 0.0, max_lon_ = 0.0;
  double inv_lat_step_ = 0.0, inv_lon_step_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<std::uint32_t>> cells_;
  std::vector<std::uint32_t> empty_;
};

}  // namespace pci

#endif
