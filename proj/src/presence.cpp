#include "pci/presence.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_map>
#include <unordered_set>

#include "pci/csv.hpp"
#include "pci/external_sort.hpp"

namespace pci {

namespace {

// Days-per-(place,user) spill record for the streaming aggregation.
struct DaysRec {
  std::uint32_t place;
  std::uint32_t uid;
  std::uint32_t days;
  friend bool operator<(const DaysRec& a, const DaysRec& b) {
    if (a.place != b.place) return a.place < b.place;
    return a.uid < b.uid;
  }
};

}  // namespace

std::vector<PresenceDays> presence_to_days(std::vector<PresenceTuple> tuples) {
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  std::vector<PresenceDays> out;
  for (std::size_t i = 0; i < tuples.size();) {
    std::size_t j = i;
    while (j < tuples.size() && tuples[j].place == tuples[i].place &&
           tuples[j].user == tuples[i].user)
      ++j;
    out.push_back({tuples[i].place, tuples[i].user, j - i});
    i = j;
  }
  return out;
}

std::vector<PlaceUserCount> unique_users(std::vector<PresenceTuple> tuples) {
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  std::vector<PlaceUserCount> out;
  for (std::size_t i = 0; i < tuples.size();) {
    std::size_t j = i;
    std::uint64_t users = 0;
    while (j < tuples.size() && tuples[j].place == tuples[i].place) {
      const std::size_t u = j;
      while (j < tuples.size() && tuples[j].place == tuples[i].place &&
             tuples[j].user == tuples[u].user)
        ++j;
      ++users;
    }
    out.push_back({tuples[i].place, users});
    i = j;
  }
  return out;
}

std::vector<SharedUserCount> shared_users(std::vector<PresenceTuple> tuples) {
  // Work user-major: each user's distinct place list contributes one
  // increment per unordered pair.
  std::vector<std::string> codes;
  codes.reserve(tuples.size());
  for (const auto& t : tuples) codes.push_back(t.place);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  const auto code_idx = [&](const std::string& c) {
    return std::uint64_t(
        std::lower_bound(codes.begin(), codes.end(), c) - codes.begin());
  };

  std::unordered_map<std::string, std::vector<std::uint32_t>> user_places;
  for (const auto& t : tuples)
    user_places[t.user].push_back(std::uint32_t(code_idx(t.place)));

  const std::uint64_t P = codes.size();
  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
  for (auto& [user, places] : user_places) {
    std::sort(places.begin(), places.end());
    places.erase(std::unique(places.begin(), places.end()), places.end());
    for (std::size_t a = 0; a < places.size(); ++a)
      for (std::size_t b = a + 1; b < places.size(); ++b)
        ++pair_counts[std::uint64_t(places[a]) * P + places[b]];
  }

  std::vector<SharedUserCount> out;
  out.reserve(pair_counts.size());
  for (const auto& [key, count] : pair_counts)
    out.push_back({codes[key / P], codes[key % P], count});
  std::sort(out.begin(), out.end(),
            [](const SharedUserCount& a, const SharedUserCount& b) {
              if (a.place_i != b.place_i) return a.place_i < b.place_i;
              return a.place_j < b.place_j;
            });
  return out;
}

void read_presence_store(
    const std::string& path,
    const std::function<void(std::string_view, Day, std::string_view)>& fn) {
  std::string prev_user, prev_place;
  Day prev_day = 0;
  bool have_prev = false;
  csv::for_each_row(
      path,
      [&](const std::vector<std::string>& header) {
        if (header.size() != 3 || header[0] != "user" || header[1] != "date" ||
            header[2] != "place")
          throw DataError(path + ": expected header user,date,place");
      },
      [&](const std::vector<std::string>& row, std::size_t line) {
        if (row.size() != 3)
          throw DataError(path + " line " + std::to_string(line) +
                          ": expected 3 fields");
        const auto day = parse_date(row[1]);
        if (!day)
          throw DataError(path + " line " + std::to_string(line) +
                          ": bad date '" + row[1] + "'");
        if (have_prev) {
          const bool ordered =
              prev_user < row[0] ||
              (prev_user == row[0] &&
               (prev_day < *day || (prev_day == *day && prev_place < row[2])));
          if (!ordered)
            throw DataError(path + " line " + std::to_string(line) +
                            ": store rows must be unique and sorted by "
                            "user,date,place");
        }
        fn(row[0], *day, row[2]);
        prev_user = row[0];
        prev_day = *day;
        prev_place = row[2];
        have_prev = true;
      });
}

void aggregate_presence_store(
    const std::string& path, std::size_t spill_threshold,
    const std::string& tmp_dir, StoreAggregates& agg,
    const std::function<void(std::uint32_t, std::uint32_t, std::uint64_t)>&
        pair_sink,
    const std::function<void(std::string_view, std::string_view,
                             std::uint64_t)>* days_sink) {
  agg = StoreAggregates{};

  // Transparent hashing so row lookups take string_view keys directly.
  struct SvHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view sv) const {
      return std::hash<std::string_view>{}(sv);
    }
  };

  // Pass 1: place dictionary plus row count.
  std::unordered_set<std::string, SvHash, std::equal_to<>> code_set;
  read_presence_store(path, [&](std::string_view, Day, std::string_view place) {
    ++agg.tuples;
    if (code_set.find(place) == code_set.end()) code_set.emplace(place);
  });
  agg.codes.assign(code_set.begin(), code_set.end());
  std::sort(agg.codes.begin(), agg.codes.end());
  const std::uint64_t P = agg.codes.size();
  agg.place_users.assign(P, 0);
  std::unordered_map<std::string, std::uint32_t, SvHash, std::equal_to<>>
      code_idx;
  code_idx.reserve(P);
  for (std::uint32_t i = 0; i < P; ++i) code_idx.emplace(agg.codes[i], i);

  static std::atomic<int> seq_counter{0};
  const std::string seq = std::to_string(seq_counter.fetch_add(1));
  SpillingCounter pairs(spill_threshold, tmp_dir + "/presence_pairs_" + seq);
  ExternalSorter<DaysRec> days_rows(spill_threshold,
                                    tmp_dir + "/presence_days_" + seq);
  std::vector<std::string> user_names;  // only kept for the days export

  // Pass 2: walk user blocks.
  std::string cur_user;
  bool in_block = false;
  std::vector<std::uint32_t> block_places;  // one entry per row, with repeats

  const auto flush_block = [&] {
    if (!in_block) return;
    const std::uint32_t uid = std::uint32_t(agg.distinct_users);
    ++agg.distinct_users;
    if (days_sink) user_names.push_back(cur_user);
    std::sort(block_places.begin(), block_places.end());
    std::size_t i = 0;
    std::vector<std::uint32_t> distinct;
    while (i < block_places.size()) {
      std::size_t j = i;
      while (j < block_places.size() && block_places[j] == block_places[i])
        ++j;
      // Rows are unique per (user, date, place), so multiplicity within
      // the block is exactly the distinct-day count.
      if (days_sink)
        days_rows.add({block_places[i], uid, std::uint32_t(j - i)});
      ++agg.place_users[block_places[i]];
      distinct.push_back(block_places[i]);
      i = j;
    }
    for (std::size_t a = 0; a < distinct.size(); ++a)
      for (std::size_t b = a + 1; b < distinct.size(); ++b)
        pairs.add(std::uint64_t(distinct[a]) * P + distinct[b], 1);
    block_places.clear();
  };

  read_presence_store(
      path, [&](std::string_view user, Day, std::string_view place) {
        if (!in_block || user != cur_user) {
          flush_block();
          cur_user.assign(user);
          in_block = true;
        }
        block_places.push_back(code_idx.find(place)->second);
      });
  flush_block();

  // agg is complete from here on; sinks are allowed to read it.
  pairs.finish([&](std::uint64_t key, std::uint64_t count) {
    pair_sink(std::uint32_t(key / P), std::uint32_t(key % P), count);
  });
  if (days_sink) {
    days_rows.finish(false, [&](const DaysRec& r) {
      (*days_sink)(agg.codes[r.place], user_names[r.uid], r.days);
    });
  }
}

}  // namespace pci
