#include "pci/movement.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/subprocess.hpp"
#include "support/synth.hpp"

using namespace pci;

namespace {

std::string write_store(const std::string& dir,
                        std::vector<PresenceTuple> tuples) {
  std::sort(tuples.begin(), tuples.end(),
            [](const PresenceTuple& a, const PresenceTuple& b) {
              return std::tie(a.user, a.day, a.place) <
                     std::tie(b.user, b.day, b.place);
            });
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  const std::string path = dir + "/presence.csv";
  std::ofstream os(path, std::ios::binary);
  os << "user,date,place\n";
  for (const auto& t : tuples)
    os << t.user << "," << day_to_string(t.day) << "," << t.place << "\n";
  return path;
}

}  // namespace

TEST_SUITE("movement") {

TEST_CASE("person-day pairs match the oracle") {
  synth::Rng rng(47);
  for (int world = 0; world < 5; ++world) {
    const auto tuples = synth::random_tuples(rng, 8, 50, 15, 350);
    const auto got = person_day_movements(tuples);
    const auto want = oracle::person_day_movements(tuples);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      const auto& m = got[i];
      CHECK(m.place_i < m.place_j);
      if (i > 0)
        CHECK(std::make_pair(got[i - 1].place_i, got[i - 1].place_j) <
              std::make_pair(m.place_i, m.place_j));
      CHECK(want.at({m.place_i, m.place_j}) == m.person_days);
    }
  }
}

TEST_CASE("three places on one day contribute three pairs") {
  const Day d = *parse_date("2019-05-01");
  const std::vector<PresenceTuple> tuples = {
      {"A", "u", d}, {"B", "u", d}, {"C", "u", d}, {"A", "u", d + 1}};
  const auto got = person_day_movements(tuples);
  REQUIRE(got.size() == 3);
  for (const auto& m : got) CHECK(m.person_days == 1);
}

TEST_CASE("streaming store movement equals the in-memory rule") {
  synth::Rng rng(53);
  const auto dir = testutil::make_temp_dir("mv");
  const auto tuples = synth::random_tuples(rng, 12, 70, 20, 600);
  const auto store = write_store(dir, tuples);
  const auto want = person_day_movements(tuples);

  for (const std::size_t spill : {std::size_t(1) << 20, std::size_t(5)}) {
    std::vector<OdMovement> got;
    movements_from_store(store, spill, dir,
                         [&](const std::string& a, const std::string& b,
                             std::uint64_t n) { got.push_back({a, b, n}); });
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].place_i == want[i].place_i);
      CHECK(got[i].place_j == want[i].place_j);
      CHECK(got[i].person_days == want[i].person_days);
    }
  }
}

TEST_CASE("transition counting walks each day trace in time order") {
  TransitionCounter tc;
  const auto ts = [](const char* s) { return *parse_timestamp_utc(s); };

  // u1 day one: A -> B -> B -> A gives A|B twice.
  tc.observe("u1", ts("2019-01-01T09:00:00Z"), "A");
  tc.observe("u1", ts("2019-01-01T12:00:00Z"), "B");
  tc.observe("u1", ts("2019-01-01T13:00:00Z"), "B");
  tc.observe("u1", ts("2019-01-01T17:00:00Z"), "A");
  // Late night into the next morning: days do not chain.
  tc.observe("u1", ts("2019-01-02T23:30:00Z"), "C");
  tc.observe("u1", ts("2019-01-03T00:30:00Z"), "D");
  // Second user, one lonely place: nothing.
  tc.observe("u2", ts("2019-01-01T10:00:00Z"), "E");

  const auto got = tc.finish();
  REQUIRE(got.size() == 1);
  CHECK(got[0].place_i == "A");
  CHECK(got[0].place_j == "B");
  CHECK(got[0].person_days == 2);
}

TEST_CASE("transitions at the same instant use code order") {
  TransitionCounter tc;
  const std::int64_t t0 = *parse_timestamp_utc("2019-01-01T10:00:00Z");
  // Feed pre-sorted (user, ts, place) as the contract requires.
  tc.observe("u", t0, "A");
  tc.observe("u", t0, "B");
  tc.observe("u", t0 + 60, "A");
  const auto got = tc.finish();
  REQUIRE(got.size() == 1);
  CHECK(got[0].place_i == "A");
  CHECK(got[0].place_j == "B");
  CHECK(got[0].person_days == 2);  // A->B, then B->A
}

TEST_CASE("flows csv parses strict rows") {
  const auto dir = testutil::make_temp_dir("fl");
  SUBCASE("good file") {
    std::ofstream(dir + "/f.csv")
        << "# provenance\norigin,destination,count,date\n"
           "S0C0,S1C0,5,2019-01-02\nS1C0,S0C0,3,2019-01-02\n";
    std::vector<DirectedFlow> flows;
    read_flows_csv(dir + "/f.csv",
                   [&](const DirectedFlow& f) { flows.push_back(f); });
    REQUIRE(flows.size() == 2);
    CHECK(flows[0].origin == "S0C0");
    CHECK(flows[0].destination == "S1C0");
    CHECK(flows[0].count == 5);
    CHECK(flows[0].date == *parse_date("2019-01-02"));
  }
  SUBCASE("wrong header") {
    std::ofstream(dir + "/h.csv") << "from,to,n,when\n";
    CHECK_THROWS_AS(read_flows_csv(dir + "/h.csv", [](const DirectedFlow&) {}),
                    DataError);
  }
  SUBCASE("negative count") {
    std::ofstream(dir + "/n.csv")
        << "origin,destination,count,date\nA,B,-3,2019-01-01\n";
    CHECK_THROWS_AS(read_flows_csv(dir + "/n.csv", [](const DirectedFlow&) {}),
                    DataError);
  }
  SUBCASE("fractional count") {
    std::ofstream(dir + "/q.csv")
        << "origin,destination,count,date\nA,B,3.5,2019-01-01\n";
    CHECK_THROWS_AS(read_flows_csv(dir + "/q.csv", [](const DirectedFlow&) {}),
                    DataError);
  }
  SUBCASE("bad date") {
    std::ofstream(dir + "/d.csv")
        << "origin,destination,count,date\nA,B,3,01/02/2019\n";
    CHECK_THROWS_AS(read_flows_csv(dir + "/d.csv", [](const DirectedFlow&) {}),
                    DataError);
  }
}

TEST_CASE("directed flows roll up, sum, and fold symmetric") {
  const auto dir = testutil::make_temp_dir("fl");
  synth::write_file(dir + "/registry.geojson", synth::grid_registry_json({}));
  const auto reg = PlaceRegistry::load(dir + "/registry.geojson");
  const Day d1 = *parse_date("2019-01-01");
  const Day d2 = *parse_date("2019-02-01");

  const std::vector<DirectedFlow> flows = {
      {"S0C0", "S1C0", 5, d1},  // S0 -> S1
      {"S0C1", "S1C3", 2, d1},  // S0 -> S1, other counties, same rollup
      {"S1C2", "S0C0", 7, d2},  // S1 -> S0
      {"S0C0", "S0C1", 9, d1},  // self after rollup, dropped
      {"S2C0", "S3C0", 0, d1},  // zero total, dropped
      {"S3", "S2", 4, d2},      // already at admin1
  };

  SUBCASE("full window") {
    const auto got = symmetrize_flows(flows, reg, PlaceLevel::admin1);
    REQUIRE(got.size() == 2);
    CHECK(got[0].place_i == "S0");
    CHECK(got[0].place_j == "S1");
    CHECK(got[0].person_days == 14);  // (5 + 2) + 7
    CHECK(got[1].place_i == "S2");
    CHECK(got[1].place_j == "S3");
    CHECK(got[1].person_days == 4);
  }
  SUBCASE("window keeps only January") {
    const auto got = symmetrize_flows(flows, reg, PlaceLevel::admin1, d1,
                                      *parse_date("2019-01-31"));
    REQUIRE(got.size() == 1);
    CHECK(got[0].person_days == 7);  // the two d1 cross-region rows
  }
  SUBCASE("a coarse code cannot resolve at a finer level") {
    CHECK_THROWS_AS(symmetrize_flows(flows, reg, PlaceLevel::county),
                    DataError);
  }
  SUBCASE("county level passes codes straight through") {
    const std::vector<DirectedFlow> fine(flows.begin(), flows.end() - 1);
    const auto got = symmetrize_flows(fine, reg, PlaceLevel::county);
    REQUIRE(got.size() == 4);  // zero row dropped, no self-pairs here
    CHECK(got[0].place_i == "S0C0");
    CHECK(got[0].place_j == "S0C1");
    CHECK(got[0].person_days == 9);
    CHECK(got[1].place_i == "S0C0");
    CHECK(got[1].place_j == "S1C0");
    CHECK(got[1].person_days == 5);
  }
}

TEST_CASE("unresolvable flow code is a data error") {
  const auto dir = testutil::make_temp_dir("fl");
  synth::write_file(dir + "/registry.geojson", synth::grid_registry_json({}));
  const auto reg = PlaceRegistry::load(dir + "/registry.geojson");
  const std::vector<DirectedFlow> flows = {
      {"NOWHERE", "S1C0", 5, *parse_date("2019-01-01")}};
  CHECK_THROWS_WITH_AS(symmetrize_flows(flows, reg, PlaceLevel::county),
                       doctest::Contains("resolve"), DataError);
}

}  // TEST_SUITE
