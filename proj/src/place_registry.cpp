#include "pci/place_registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace pci {

using json = nlohmann::json;

bool resolution_admits(SpatialResolution res, PlaceLevel level) {
  // Resolutions are ordered fine to coarse; each level admits a prefix.
  const int r = int(res);
  switch (level) {
    case PlaceLevel::country: return true;
    case PlaceLevel::admin1: return r <= int(SpatialResolution::admin1);
    case PlaceLevel::county:
    case PlaceLevel::metro: return r <= int(SpatialResolution::city);
    case PlaceLevel::tract:
      return r <= int(SpatialResolution::neighborhood_poi);
  }
  return false;
}

double centroid_distance(const Place& a, const Place& b) {
  return haversine_miles(a.centroid, b.centroid);
}

namespace {

void parse_ring(const json& coords, Polygon& poly, const std::string& code) {
  if (!coords.is_array() || coords.size() < 4)
    throw DataError("place " + code + ": ring needs at least 4 positions");
  Ring ring;
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
        !pos[1].is_number())
      throw DataError("place " + code + ": malformed ring position");
    ring.pts.push_back({pos[1].get<double>(), pos[0].get<double>()});
  }
  // GeoJSON closes rings explicitly; we store the open form.
  const LatLon& f = ring.pts.front();
  const LatLon& l = ring.pts.back();
  if (f.lat == l.lat && f.lon == l.lon) ring.pts.pop_back();
  if (ring.pts.size() < 3)
    throw DataError("place " + code + ": degenerate ring");
  poly.rings.push_back(std::move(ring));
}

void parse_geometry(const json& geom, Place& place) {
  const std::string type = geom.value("type", "");
  const auto it = geom.find("coordinates");
  if (it == geom.end() || !it->is_array())
    throw DataError("place " + place.code + ": geometry has no coordinates");
  if (type == "Polygon") {
    for (const auto& ring : *it) parse_ring(ring, place.geometry, place.code);
  } else if (type == "MultiPolygon") {
    for (const auto& part : *it) {
      if (!part.is_array())
        throw DataError("place " + place.code + ": malformed MultiPolygon");
      for (const auto& ring : part)
        parse_ring(ring, place.geometry, place.code);
    }
  } else {
    throw DataError("place " + place.code + ": unsupported geometry type '" +
                    type + "'");
  }
  place.geometry.finalize();
  place.has_geometry = true;
}

double require_number(const json& props, const char* key,
                      const std::string& where) {
  const auto it = props.find(key);
  if (it == props.end() || !it->is_number())
    throw DataError(where + ": missing numeric property '" + key + "'");
  return it->get<double>();
}

std::string require_string(const json& props, const char* key,
                           const std::string& where) {
  const auto it = props.find(key);
  if (it == props.end() || !it->is_string())
    throw DataError(where + ": missing string property '" + key + "'");
  return it->get<std::string>();
}

}  // namespace

PlaceRegistry PlaceRegistry::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open registry file: " + path);
  json doc;
  try {
    // The loader tolerates a leading '#' provenance line on files this
    // tool wrote itself.
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    std::size_t start = 0;
    while (start < text.size() && text[start] == '#') {
      const std::size_t nl = text.find('\n', start);
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
    doc = json::parse(text.begin() + std::ptrdiff_t(start), text.end());
  } catch (const json::parse_error& e) {
    throw DataError("registry " + path + ": " + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array())
    throw DataError("registry " + path + ": not a FeatureCollection");

  PlaceRegistry reg;
  std::size_t index = 0;
  for (const auto& feature : doc["features"]) {
    const std::string where = path + " feature " + std::to_string(index++);
    if (!feature.is_object() || !feature.contains("properties") ||
        !feature["properties"].is_object())
      throw DataError(where + ": missing properties");
    const json& props = feature["properties"];
    Place place;
    place.code = require_string(props, "code", where);
    if (place.code.empty()) throw DataError(where + ": empty code");
    const std::string level_tok = require_string(props, "level", where);
    const auto level = parse_level(level_tok);
    if (!level) throw DataError(where + ": unknown level '" + level_tok + "'");
    place.level = *level;
    place.name = require_string(props, "name", where);
    place.centroid.lat = require_number(props, "centroid_lat", where);
    place.centroid.lon = require_number(props, "centroid_lon", where);
    if (std::fabs(place.centroid.lat) > 90.0 ||
        std::fabs(place.centroid.lon) > 180.0)
      throw DataError(where + ": centroid out of range");
    if (const auto it = props.find("parent_code");
        it != props.end() && it->is_string())
      place.parent_code = it->get<std::string>();
    if (const auto it = feature.find("geometry");
        it != feature.end() && it->is_object() && !it->is_null()) {
      parse_geometry(*it, place);
      place.geometry_json = it->dump();
    }
    reg.by_level_[int(place.level)].push_back(std::move(place));
  }
  reg.build_indexes();
  reg.validate();
  return reg;
}

std::size_t PlaceRegistry::total_size() const {
  std::size_t n = 0;
  for (const auto& v : by_level_) n += v.size();
  return n;
}

void PlaceRegistry::build_indexes() {
  for (int l = 0; l < 5; ++l) {
    auto& places = by_level_[l];
    std::sort(places.begin(), places.end(),
              [](const Place& a, const Place& b) { return a.code < b.code; });
    for (std::size_t i = 1; i < places.size(); ++i) {
      if (places[i].code == places[i - 1].code)
        throw DataError("duplicate code '" + places[i].code + "' at level " +
                        std::string(to_string(PlaceLevel(l))));
    }
    geo_places_[l].clear();
    for (const Place& p : places)
      if (p.has_geometry) geo_places_[l].push_back(&p);
    std::vector<const Polygon*> polys;
    polys.reserve(geo_places_[l].size());
    for (const Place* p : geo_places_[l]) polys.push_back(&p->geometry);
    grid_[l].build(polys);
  }
}

void PlaceRegistry::validate() {
  for (int l = 0; l < 5; ++l) {
    for (const Place& p : by_level_[l]) {
      if (!p.parent_code.empty()) {
        // A parent named but absent is allowed (partial registries); a
        // parent that exists only at a non-coarser rank is not.
        bool exists = false;
        for (int pl = 0; pl < 5 && !exists; ++pl)
          exists = find(PlaceLevel(pl), p.parent_code) != nullptr;
        if (exists && !parent_of(p.parent_code, level_rank(p.level)))
          throw DataError("place " + p.code + ": parent '" + p.parent_code +
                          "' is not at a coarser level");
      }
      if (p.has_geometry && !p.geometry.contains(p.centroid))
        throw DataError("place " + p.code + ": centroid outside geometry");
    }
    // Same-level geometries must partition space: shared borders are fine,
    // interior overlap is not.
    const auto& geo = geo_places_[l];
    for (std::size_t i = 0; i < geo.size(); ++i) {
      for (std::size_t j = i + 1; j < geo.size(); ++j) {
        if (polygons_overlap(geo[i]->geometry, geo[j]->geometry))
          throw DataError("overlapping geometries at level " +
                          std::string(to_string(PlaceLevel(l))) + ": '" +
                          geo[i]->code + "' and '" + geo[j]->code + "'");
      }
    }
  }
}

const Place* PlaceRegistry::find(PlaceLevel level,
                                 std::string_view code) const {
  const auto& places = by_level_[int(level)];
  const auto it = std::lower_bound(
      places.begin(), places.end(), code,
      [](const Place& p, std::string_view c) { return p.code < c; });
  if (it == places.end() || it->code != code) return nullptr;
  return &*it;
}

const Place* PlaceRegistry::assign_point(const LatLon& p,
                                         PlaceLevel level) const {
  if (std::fabs(p.lat) > 90.0 || std::fabs(p.lon) > 180.0)
    throw DataError("assign_point: coordinates out of range");
  // Candidates arrive in ascending geo_places_ order, which is code order,
  // so the first hit is already the boundary tie-break winner.
  for (const std::uint32_t idx : grid_[int(level)].candidates(p)) {
    const Place* place = geo_places_[int(level)][idx];
    if (place->geometry.contains(p)) return place;
  }
  return nullptr;
}

const Place* PlaceRegistry::parent_of(std::string_view parent_code,
                                      int child_rank) const {
  // Prefer the finest level that is still coarser than the child, so a
  // chain walk climbs one rank at a time.
  const Place* best = nullptr;
  for (int l = 0; l < 5; ++l) {
    if (level_rank(PlaceLevel(l)) >= child_rank) continue;
    const Place* f = find(PlaceLevel(l), parent_code);
    if (f && (!best || level_rank(f->level) > level_rank(best->level)))
      best = f;
  }
  return best;
}

const Place* PlaceRegistry::ancestor_at(const Place& p,
                                        PlaceLevel target) const {
  const int target_rank = level_rank(target);
  const Place* cur = &p;
  while (true) {
    if (cur->level == target) return cur;
    if (level_rank(cur->level) <= target_rank) return nullptr;
    if (cur->parent_code.empty()) return nullptr;
    cur = parent_of(cur->parent_code, level_rank(cur->level));
    if (!cur) return nullptr;
  }
}

const Place* PlaceRegistry::resolve_code(std::string_view code,
                                         PlaceLevel target) const {
  if (const Place* direct = find(target, code)) return direct;
  // Search finer levels coarse-to-fine so the shortest roll-up wins.
  struct Cand {
    PlaceLevel level;
    int rank;
  };
  Cand order[5];
  int n = 0;
  for (int l = 0; l < 5; ++l) {
    if (level_rank(PlaceLevel(l)) > level_rank(target))
      order[n++] = {PlaceLevel(l), level_rank(PlaceLevel(l))};
  }
  std::sort(order, order + n,
            [](const Cand& a, const Cand& b) { return a.rank < b.rank; });
  for (int i = 0; i < n; ++i) {
    if (const Place* fine = find(order[i].level, code)) {
      if (const Place* up = ancestor_at(*fine, target)) return up;
    }
  }
  return nullptr;
}

}  // namespace pci
