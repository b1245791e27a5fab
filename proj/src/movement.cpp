#include "pci/movement.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <unordered_set>

#include "pci/csv.hpp"
#include "pci/external_sort.hpp"

namespace pci {

namespace {

std::vector<OdMovement> sorted_movements(
    std::map<std::pair<std::string, std::string>, std::uint64_t>& counts) {
  std::vector<OdMovement> out;
  out.reserve(counts.size());
  for (auto& [key, n] : counts) {
    if (n == 0) continue;
    out.push_back({key.first, key.second, n});
  }
  return out;  // std::map iterates in key order, already sorted
}

}  // namespace

std::vector<OdMovement> person_day_movements(
    std::vector<PresenceTuple> tuples) {
  // Group by user-day; within a group the distinct places form the
  // visited set V and every 2-subset of V counts once.
  std::sort(tuples.begin(), tuples.end(),
            [](const PresenceTuple& a, const PresenceTuple& b) {
              if (a.user != b.user) return a.user < b.user;
              if (a.day != b.day) return a.day < b.day;
              return a.place < b.place;
            });
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  std::size_t i = 0;
  while (i < tuples.size()) {
    std::size_t j = i;
    while (j < tuples.size() && tuples[j].user == tuples[i].user &&
           tuples[j].day == tuples[i].day) {
      ++j;
    }
    // Places within the block are sorted; skip duplicates to treat the
    // input as a set.
    std::vector<const std::string*> v;
    for (std::size_t k = i; k < j; ++k) {
      if (v.empty() || *v.back() != tuples[k].place)
        v.push_back(&tuples[k].place);
    }
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b)
        ++counts[{*v[a], *v[b]}];
    i = j;
  }
  return sorted_movements(counts);
}

void movements_from_store(
    const std::string& store_path, std::size_t spill_threshold,
    const std::string& tmp_dir,
    const std::function<void(const std::string&, const std::string&,
                             std::uint64_t)>& sink) {
  // Pass 1: place dictionary, so pairs can be counted as integer keys.
  std::unordered_set<std::string> code_set;
  read_presence_store(store_path,
                      [&](std::string_view, Day, std::string_view place) {
                        code_set.emplace(place);
                      });
  std::vector<std::string> codes(code_set.begin(), code_set.end());
  std::sort(codes.begin(), codes.end());
  const std::uint64_t P = codes.size();

  static std::atomic<std::uint64_t> seq{0};
  const auto spill_dir = std::filesystem::path(tmp_dir) /
                         ("movement_pairs_" + std::to_string(seq++));
  SpillingCounter pairs(spill_threshold, spill_dir);

  // Pass 2: rows arrive sorted by (user, date, place), so each user-day
  // block is contiguous and its places arrive sorted and distinct.
  std::string cur_user;
  Day cur_day = 0;
  bool in_block = false;
  std::vector<std::uint32_t> block;

  auto flush = [&]() {
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b)
        pairs.add(std::uint64_t(block[a]) * P + block[b], 1);
    block.clear();
  };

  read_presence_store(
      store_path, [&](std::string_view user, Day day, std::string_view place) {
        if (!in_block || user != cur_user || day != cur_day) {
          flush();
          cur_user.assign(user);
          cur_day = day;
          in_block = true;
        }
        const auto it =
            std::lower_bound(codes.begin(), codes.end(), place);
        block.push_back(std::uint32_t(it - codes.begin()));
      });
  flush();

  pairs.finish([&](std::uint64_t key, std::uint64_t count) {
    sink(codes[key / P], codes[key % P], count);
  });
  std::error_code ec;
  std::filesystem::remove_all(spill_dir, ec);
}

void TransitionCounter::observe(std::string_view user, std::int64_t ts_sec,
                                std::string_view place) {
  const Day day = day_of_epoch_sec(ts_sec);
  if (!have_prev_ || user != cur_user_ || day != cur_day_) {
    cur_user_.assign(user);
    cur_day_ = day;
    prev_place_.assign(place);
    have_prev_ = true;
    return;
  }
  if (place == prev_place_) return;
  Key k;
  if (place < prev_place_) {
    k.a.assign(place);
    k.b = prev_place_;
  } else {
    k.a = prev_place_;
    k.b.assign(place);
  }
  hits_.push_back(std::move(k));
  prev_place_.assign(place);
}

std::vector<OdMovement> TransitionCounter::finish() {
  std::sort(hits_.begin(), hits_.end());
  std::vector<OdMovement> out;
  for (std::size_t i = 0; i < hits_.size();) {
    std::size_t j = i;
    while (j < hits_.size() && hits_[j] == hits_[i]) ++j;
    out.push_back({hits_[i].a, hits_[i].b, j - i});
    i = j;
  }
  hits_.clear();
  have_prev_ = false;
  cur_user_.clear();
  return out;
}

void read_flows_csv(const std::string& path,
                    const std::function<void(const DirectedFlow&)>& fn) {
  csv::for_each_row(
      path,
      [&](const std::vector<std::string>& header) {
        static const std::vector<std::string> want = {"origin", "destination",
                                                      "count", "date"};
        if (header != want) {
          throw DataError(path +
                          ": expected header origin,destination,count,date");
        }
      },
      [&](const std::vector<std::string>& row, std::size_t line) {
        if (row.size() != 4) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": expected 4 fields");
        }
        DirectedFlow f;
        f.origin = row[0];
        f.destination = row[1];
        if (row[2].empty() ||
            row[2].find_first_not_of("0123456789") != std::string::npos) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": count must be a non-negative integer");
        }
        f.count = std::stoull(row[2]);
        const auto d = parse_date(row[3]);
        if (!d) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": bad date (want YYYY-MM-DD)");
        }
        f.date = *d;
        fn(f);
      });
}

std::vector<OdMovement> symmetrize_flows(const std::vector<DirectedFlow>& flows,
                                         const PlaceRegistry& registry,
                                         PlaceLevel level, Day from, Day to) {
  // Sum each directed pair at the rolled-up level first; the symmetric
  // count is then the fold of the two directions.
  std::map<std::pair<std::string, std::string>, std::uint64_t> directed;
  for (const auto& f : flows) {
    if (f.date < from || f.date > to) continue;
    const Place* o = registry.resolve_code(f.origin, level);
    if (!o) {
      throw DataError("flow code does not resolve at target level: " +
                      f.origin);
    }
    const Place* d = registry.resolve_code(f.destination, level);
    if (!d) {
      throw DataError("flow code does not resolve at target level: " +
                      f.destination);
    }
    if (o->code == d->code) continue;  // self-pair after rollup
    directed[{o->code, d->code}] += f.count;
  }
  std::map<std::pair<std::string, std::string>, std::uint64_t> sym;
  for (const auto& [key, n] : directed) {
    auto canonical = key.first < key.second
                         ? key
                         : std::make_pair(key.second, key.first);
    sym[canonical] += n;
  }
  return sorted_movements(sym);
}

}  // namespace pci
