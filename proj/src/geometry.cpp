#include "pci/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pci {

namespace {

constexpr double kEarthRadiusMiles = 3958.8;
constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryEps = 1e-9;

double deg2rad(double d) { return d * (kPi / 180.0); }

// Signed area of triangle (a, b, p) in lon/lat coordinates, times two.
double cross(const LatLon& a, const LatLon& b, const LatLon& p) {
  return (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
}

bool on_segment(const LatLon& p, const LatLon& a, const LatLon& b) {
  if (std::fabs(cross(a, b, p)) > kBoundaryEps) return false;
  return p.lon >= std::min(a.lon, b.lon) - kBoundaryEps &&
         p.lon <= std::max(a.lon, b.lon) + kBoundaryEps &&
         p.lat >= std::min(a.lat, b.lat) - kBoundaryEps &&
         p.lat <= std::max(a.lat, b.lat) + kBoundaryEps;
}

}  // namespace

double haversine_miles(const LatLon& a, const LatLon& b) {
  const double lat1 = deg2rad(a.lat), lat2 = deg2rad(b.lat);
  const double dlat = lat2 - lat1;
  const double dlon = deg2rad(b.lon - a.lon);
  const double s1 = std::sin(dlat / 2.0), s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

void Polygon::finalize() {
  bool first = true;
  for (const Ring& r : rings) {
    for (const LatLon& p : r.pts) {
      if (first) {
        min_lat = max_lat = p.lat;
        min_lon = max_lon = p.lon;
        first = false;
      } else {
        min_lat = std::min(min_lat, p.lat);
        max_lat = std::max(max_lat, p.lat);
        min_lon = std::min(min_lon, p.lon);
        max_lon = std::max(max_lon, p.lon);
      }
    }
  }
}

bool Polygon::on_boundary(const LatLon& p) const {
  for (const Ring& r : rings) {
    const std::size_t n = r.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (on_segment(p, r.pts[i], r.pts[(i + 1) % n])) return true;
    }
  }
  return false;
}

bool Polygon::contains(const LatLon& p) const {
  if (!bbox_contains(p)) return false;
  // Boundary counts as inside regardless of ray parity.
  if (on_boundary(p)) return true;
  bool inside = false;
  for (const Ring& r : rings) {
    const std::size_t n = r.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const LatLon& a = r.pts[i];
      const LatLon& b = r.pts[(i + 1) % n];
      if ((a.lat > p.lat) != (b.lat > p.lat)) {
        const double x_hit =
            a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
        if (x_hit > p.lon) inside = !inside;
      }
    }
  }
  return inside;
}

LatLon Polygon::representative_point() const {
  if (rings.empty() || rings[0].pts.empty()) return {};
  const auto& pts = rings[0].pts;
  LatLon avg{};
  for (const LatLon& p : pts) {
    avg.lat += p.lat;
    avg.lon += p.lon;
  }
  avg.lat /= double(pts.size());
  avg.lon /= double(pts.size());
  if (strictly_inside(avg)) return avg;
  // Concave shapes or holes can push the average outside; fall back to
  // centroids of the fan triangles around the first vertex.
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    LatLon c{(pts[0].lat + pts[i].lat + pts[i + 1].lat) / 3.0,
             (pts[0].lon + pts[i].lon + pts[i + 1].lon) / 3.0};
    if (strictly_inside(c)) return c;
  }
  return avg;
}

bool segments_properly_cross(const LatLon& a, const LatLon& b, const LatLon& c,
                             const LatLon& d) {
  const double d1 = cross(a, b, c);
  const double d2 = cross(a, b, d);
  const double d3 = cross(c, d, a);
  const double d4 = cross(c, d, b);
  return ((d1 > kBoundaryEps && d2 < -kBoundaryEps) ||
          (d1 < -kBoundaryEps && d2 > kBoundaryEps)) &&
         ((d3 > kBoundaryEps && d4 < -kBoundaryEps) ||
          (d3 < -kBoundaryEps && d4 > kBoundaryEps));
}

bool polygons_overlap(const Polygon& a, const Polygon& b) {
  if (a.max_lat < b.min_lat || b.max_lat < a.min_lat ||
      a.max_lon < b.min_lon || b.max_lon < a.min_lon)
    return false;
  for (const Ring& ra : a.rings) {
    const std::size_t na = ra.pts.size();
    for (std::size_t i = 0; i < na; ++i) {
      const LatLon& p1 = ra.pts[i];
      const LatLon& p2 = ra.pts[(i + 1) % na];
      for (const Ring& rb : b.rings) {
        const std::size_t nb = rb.pts.size();
        for (std::size_t j = 0; j < nb; ++j) {
          if (segments_properly_cross(p1, p2, rb.pts[j], rb.pts[(j + 1) % nb]))
            return true;
        }
      }
    }
  }
  return b.strictly_inside(a.representative_point()) ||
         a.strictly_inside(b.representative_point());
}

void GridIndex::build(const std::vector<const Polygon*>& polys) {
  cells_.clear();
  if (polys.empty()) {
    nx_ = ny_ = 0;
    return;
  }
  double min_lat = polys[0]->min_lat, max_lat = polys[0]->max_lat;
  double min_lon = polys[0]->min_lon, max_lon = polys[0]->max_lon;
  for (const Polygon* p : polys) {
    min_lat = std::min(min_lat, p->min_lat);
    max_lat = std::max(max_lat, p->max_lat);
    min_lon = std::min(min_lon, p->min_lon);
    max_lon = std::max(max_lon, p->max_lon);
  }
  // Roughly one polygon per cell, capped so tiny inputs stay tiny.
  const int side = std::clamp<int>(
      int(std::ceil(std::sqrt(double(polys.size())))) * 2, 1, 256);
  nx_ = ny_ = side;
  min_lat_ = min_lat;
  min_lon_ = min_lon;
  max_lat_ = max_lat;
  max_lon_ = max_lon;
  const double lat_span = std::max(max_lat - min_lat, 1e-12);
  const double lon_span = std::max(max_lon - min_lon, 1e-12);
  inv_lat_step_ = double(ny_) / lat_span;
  inv_lon_step_ = double(nx_) / lon_span;
  cells_.assign(std::size_t(nx_) * std::size_t(ny_), {});
  for (std::uint32_t idx = 0; idx < polys.size(); ++idx) {
    const Polygon& p = *polys[idx];
    const int x0 = cell_of(p.min_lon, min_lon_, inv_lon_step_, nx_);
    const int x1 = cell_of(p.max_lon, min_lon_, inv_lon_step_, nx_);
    const int y0 = cell_of(p.min_lat, min_lat_, inv_lat_step_, ny_);
    const int y1 = cell_of(p.max_lat, min_lat_, inv_lat_step_, ny_);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        cells_[std::size_t(y) * nx_ + x].push_back(idx);
  }
}

int GridIndex::cell_of(double v, double lo, double inv_step, int n) const {
  return std::clamp(int((v - lo) * inv_step), 0, n - 1);
}

const std::vector<std::uint32_t>& GridIndex::candidates(
    const LatLon& p) const {
  if (cells_.empty()) return empty_;
  // Points outside the union bbox cannot fall in any polygon bbox, and
  // clamping them into an edge cell would hand back false candidates.
  if (p.lat < min_lat_ || p.lat > max_lat_ || p.lon < min_lon_ ||
      p.lon > max_lon_)
    return empty_;
  const int x = cell_of(p.lon, min_lon_, inv_lon_step_, nx_);
  const int y = cell_of(p.lat, min_lat_, inv_lat_step_, ny_);
  return cells_[std::size_t(y) * nx_ + x];
}

}  // namespace pci
