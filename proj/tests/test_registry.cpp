#include "pci/place_registry.hpp"

#include <fstream>
#include <string>

#include "doctest.h"
#include "support/subprocess.hpp"
#include "support/synth.hpp"

using namespace pci;

namespace {

// Writes content to a fresh temp file and returns its path.
std::string stage(const std::string& dir, const std::string& name,
                  const std::string& content) {
  const std::string path = dir + "/" + name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

// A feature line for hand-rolled error fixtures.
std::string feature(const std::string& code, const std::string& level,
                    const std::string& parent, double lat, double lon,
                    const std::string& geometry) {
  std::string s = "{\"type\":\"Feature\",\"properties\":{\"code\":\"" + code +
                  "\",\"level\":\"" + level + "\",\"name\":\"" + code + "\"";
  if (!parent.empty()) s += ",\"parent_code\":\"" + parent + "\"";
  s += ",\"centroid_lat\":" + std::to_string(lat) +
       ",\"centroid_lon\":" + std::to_string(lon) + "}";
  s += ",\"geometry\":" + (geometry.empty() ? "null" : geometry) + "}";
  return s;
}

std::string square_geom(double lon, double lat, double side) {
  auto p = [](double x, double y) {
    return "[" + std::to_string(x) + "," + std::to_string(y) + "]";
  };
  return "{\"type\":\"Polygon\",\"coordinates\":[[" + p(lon, lat) + "," +
         p(lon + side, lat) + "," + p(lon + side, lat + side) + "," +
         p(lon, lat + side) + "," + p(lon, lat) + "]]}";
}

std::string collection(const std::vector<std::string>& features) {
  std::string s = "{\"type\":\"FeatureCollection\",\"features\":[";
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i) s += ",";
    s += features[i];
  }
  return s + "]}";
}

}  // namespace

TEST_SUITE("registry") {

TEST_CASE("grid fixture loads with expected shape") {
  const auto dir = testutil::make_temp_dir("reg");
  synth::GridSpec g;
  const auto path = stage(dir, "registry.geojson", synth::grid_registry_json(g));
  const auto reg = PlaceRegistry::load(path);

  CHECK(reg.size(PlaceLevel::country) == 1);
  CHECK(reg.size(PlaceLevel::admin1) == 4);
  CHECK(reg.size(PlaceLevel::county) == 16);
  CHECK(reg.total_size() == 21);

  // places() comes back sorted by code.
  const auto& counties = reg.places(PlaceLevel::county);
  for (std::size_t i = 1; i < counties.size(); ++i)
    CHECK(counties[i - 1].code < counties[i].code);

  const Place* c = reg.find(PlaceLevel::county, "S1C2");
  REQUIRE(c != nullptr);
  CHECK(c->parent_code == "S1");
  CHECK(c->has_geometry);
  CHECK(reg.find(PlaceLevel::county, "nope") == nullptr);
  CHECK(reg.find(PlaceLevel::tract, "S1C2") == nullptr);
}

TEST_CASE("assign_point resolves interior, boundary, and sea") {
  const auto dir = testutil::make_temp_dir("reg");
  synth::GridSpec g;
  const auto reg = PlaceRegistry::load(
      stage(dir, "registry.geojson", synth::grid_registry_json(g)));

  // Dead center of cell (2,1): lon0 + 2.5 cells, lat0 + 1.5 cells.
  const Place* hit =
      reg.assign_point({g.lat0 + 1.5 * g.cell_deg, g.lon0 + 2.5 * g.cell_deg},
                       PlaceLevel::county);
  REQUIRE(hit != nullptr);
  CHECK(hit->code == "S2C1");

  // Same point resolves to its column at admin1 and the country above.
  CHECK(reg.assign_point({g.lat0 + 1.5 * g.cell_deg, g.lon0 + 2.5 * g.cell_deg},
                         PlaceLevel::admin1)
            ->code == "S2");
  CHECK(reg.assign_point({g.lat0 + 1.5 * g.cell_deg, g.lon0 + 2.5 * g.cell_deg},
                         PlaceLevel::country)
            ->code == "XX");

  // A point on the border of S0C0 and S1C0 belongs to the smaller code.
  const Place* tie = reg.assign_point(
      {g.lat0 + 0.5 * g.cell_deg, g.lon0 + 1.0 * g.cell_deg},
      PlaceLevel::county);
  REQUIRE(tie != nullptr);
  CHECK(tie->code == "S0C0");

  CHECK(reg.assign_point({g.lat0 - 1.0, g.lon0}, PlaceLevel::county) ==
        nullptr);
  CHECK(reg.assign_point({g.lat0 + 20.0, g.lon0}, PlaceLevel::county) ==
        nullptr);
  CHECK_THROWS_AS(reg.assign_point({91.0, 0.0}, PlaceLevel::county),
                  DataError);
  CHECK_THROWS_AS(reg.assign_point({0.0, 181.0}, PlaceLevel::county),
                  DataError);
}

TEST_CASE("ancestor walk and code resolution") {
  const auto dir = testutil::make_temp_dir("reg");
  const auto reg = PlaceRegistry::load(
      stage(dir, "registry.geojson", synth::grid_registry_json({})));

  const Place* county = reg.find(PlaceLevel::county, "S3C3");
  REQUIRE(county != nullptr);
  CHECK(reg.ancestor_at(*county, PlaceLevel::county) == county);
  CHECK(reg.ancestor_at(*county, PlaceLevel::admin1)->code == "S3");
  CHECK(reg.ancestor_at(*county, PlaceLevel::country)->code == "XX");
  CHECK(reg.ancestor_at(*county, PlaceLevel::tract) == nullptr);

  // resolve_code: exact level first, then roll up from finer levels.
  CHECK(reg.resolve_code("S2", PlaceLevel::admin1)->code == "S2");
  CHECK(reg.resolve_code("S2C0", PlaceLevel::admin1)->code == "S2");
  CHECK(reg.resolve_code("S2C0", PlaceLevel::country)->code == "XX");
  CHECK(reg.resolve_code("S2C0", PlaceLevel::county)->code == "S2C0");
  CHECK(reg.resolve_code("S2", PlaceLevel::county) == nullptr);
  CHECK(reg.resolve_code("??", PlaceLevel::county) == nullptr);
}

TEST_CASE("leading comment lines are tolerated") {
  const auto dir = testutil::make_temp_dir("reg");
  const auto reg = PlaceRegistry::load(stage(
      dir, "registry.geojson",
      "# pci-tools 0.1.0 config=0000000000000000\n" +
          synth::grid_registry_json({})));
  CHECK(reg.size(PlaceLevel::county) == 16);
}

TEST_CASE("load rejects structural problems") {
  const auto dir = testutil::make_temp_dir("reg");

  SUBCASE("not json") {
    CHECK_THROWS_AS(PlaceRegistry::load(stage(dir, "a", "not json")),
                    DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(PlaceRegistry::load(dir + "/absent.geojson"), DataError);
  }
  SUBCASE("not a feature collection") {
    CHECK_THROWS_AS(
        PlaceRegistry::load(stage(dir, "b", "{\"type\":\"Feature\"}")),
        DataError);
  }
  SUBCASE("duplicate code within a level") {
    const auto path = stage(
        dir, "dup",
        collection({feature("A", "county", "", 0.5, 0.5, square_geom(0, 0, 1)),
                    feature("A", "county", "", 5.5, 5.5,
                            square_geom(5, 5, 1))}));
    CHECK_THROWS_WITH_AS(PlaceRegistry::load(path),
                         doctest::Contains("duplicate code"), DataError);
  }
  SUBCASE("same code at different levels is fine") {
    const auto path = stage(
        dir, "two_levels",
        collection({feature("A", "county", "", 0.5, 0.5, square_geom(0, 0, 1)),
                    feature("A", "metro", "", 0.5, 0.5,
                            square_geom(0, 0, 1))}));
    CHECK(PlaceRegistry::load(path).total_size() == 2);
  }
  SUBCASE("overlapping geometries within a level") {
    const auto path = stage(
        dir, "overlap",
        collection({feature("A", "county", "", 0.5, 0.5, square_geom(0, 0, 2)),
                    feature("B", "county", "", 1.5, 1.5,
                            square_geom(1, 1, 2))}));
    CHECK_THROWS_WITH_AS(PlaceRegistry::load(path),
                         doctest::Contains("overlapping"), DataError);
  }
  SUBCASE("centroid outside own geometry") {
    const auto path = stage(
        dir, "stray",
        collection({feature("A", "county", "", 9.0, 9.0,
                            square_geom(0, 0, 1))}));
    CHECK_THROWS_WITH_AS(PlaceRegistry::load(path),
                         doctest::Contains("centroid"), DataError);
  }
  SUBCASE("parent at a rank that is not coarser") {
    const auto path = stage(
        dir, "flatparent",
        collection({feature("A", "county", "B", 0.5, 0.5, square_geom(0, 0, 1)),
                    feature("B", "county", "", 5.5, 5.5,
                            square_geom(5, 5, 1))}));
    CHECK_THROWS_WITH_AS(PlaceRegistry::load(path),
                         doctest::Contains("coarser"), DataError);
  }
  SUBCASE("absent parent code is tolerated") {
    const auto path = stage(
        dir, "orphan",
        collection({feature("A", "county", "GHOST", 0.5, 0.5,
                            square_geom(0, 0, 1))}));
    CHECK(PlaceRegistry::load(path).size(PlaceLevel::county) == 1);
  }
  SUBCASE("missing centroid property") {
    const auto path = stage(
        dir, "nocentroid",
        collection({"{\"type\":\"Feature\",\"properties\":{\"code\":\"A\","
                    "\"level\":\"county\",\"name\":\"A\"},\"geometry\":null}"}));
    CHECK_THROWS_WITH_AS(PlaceRegistry::load(path),
                         doctest::Contains("centroid_lat"), DataError);
  }
  SUBCASE("degenerate ring") {
    const auto path = stage(
        dir, "ring",
        collection({feature("A", "county", "", 0.5, 0.5,
                            "{\"type\":\"Polygon\",\"coordinates\":[[[0,0],"
                            "[1,0],[0,0]]]}")}));
    CHECK_THROWS_AS(PlaceRegistry::load(path), DataError);
  }
}

TEST_CASE("resolution admission per level") {
  using R = SpatialResolution;
  // Country takes everything; each finer level sheds the coarsest tag.
  CHECK(resolution_admits(R::country, PlaceLevel::country));
  CHECK_FALSE(resolution_admits(R::country, PlaceLevel::admin1));
  CHECK(resolution_admits(R::admin1, PlaceLevel::admin1));
  CHECK_FALSE(resolution_admits(R::admin1, PlaceLevel::county));
  CHECK(resolution_admits(R::city, PlaceLevel::county));
  CHECK(resolution_admits(R::city, PlaceLevel::metro));
  CHECK_FALSE(resolution_admits(R::city, PlaceLevel::tract));
  CHECK(resolution_admits(R::neighborhood_poi, PlaceLevel::tract));
  CHECK(resolution_admits(R::coord, PlaceLevel::tract));
}

TEST_CASE("centroid distance uses stored centroids") {
  const auto dir = testutil::make_temp_dir("reg");
  synth::GridSpec g;
  const auto reg = PlaceRegistry::load(
      stage(dir, "registry.geojson", synth::grid_registry_json(g)));
  const Place* a = reg.find(PlaceLevel::county, "S0C0");
  const Place* b = reg.find(PlaceLevel::county, "S0C1");
  REQUIRE(a);
  REQUIRE(b);
  // One cell apart along a meridian: 1 degree of latitude.
  CHECK(centroid_distance(*a, *b) ==
        doctest::Approx(haversine_miles({0, 0}, {1, 0})).epsilon(1e-9));
}

}  // TEST_SUITE
