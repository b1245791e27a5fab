#include "pci/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "pci/external_sort.hpp"

namespace pci {

std::string IngestReport::to_json() const {
  char buf[640];
  std::snprintf(
      buf, sizeof(buf),
      "{\"read\":%llu,\"kept\":%llu,\"rejected\":{\"parse\":%llu,"
      "\"source\":%llu,\"resolution\":%llu,\"window\":%llu,"
      "\"unresolved\":%llu},\"tuples\":%llu,\"users\":%llu,\"places\":%llu}",
      (unsigned long long)read, (unsigned long long)kept,
      (unsigned long long)rejected_parse, (unsigned long long)rejected_source,
      (unsigned long long)rejected_resolution,
      (unsigned long long)rejected_window,
      (unsigned long long)rejected_unresolved, (unsigned long long)tuples,
      (unsigned long long)users, (unsigned long long)places);
  return buf;
}

namespace {

struct PresenceRec {
  std::uint32_t uid;
  Day day;
  std::uint32_t place;
  friend bool operator<(const PresenceRec& a, const PresenceRec& b) {
    if (a.uid != b.uid) return a.uid < b.uid;
    if (a.day != b.day) return a.day < b.day;
    return a.place < b.place;
  }
};

struct TimedRec {
  std::int64_t ts;
  std::uint32_t uid;
  std::uint32_t place;
  friend bool operator<(const TimedRec& a, const TimedRec& b) {
    if (a.uid != b.uid) return a.uid < b.uid;
    if (a.ts != b.ts) return a.ts < b.ts;
    return a.place < b.place;
  }
};

// Bounded queue handing line-aligned file blocks to workers. Block
// boundaries depend only on file bytes; and since downstream dedup and
// sorting are content-based, even scheduling cannot leak into results.
class BlockQueue {
 public:
  explicit BlockQueue(std::size_t cap) : cap_(cap) {}

  void push(std::string&& block) {
    std::unique_lock lk(m_);
    cv_room_.wait(lk, [&] { return q_.size() < cap_; });
    q_.push_back(std::move(block));
    cv_data_.notify_one();
  }

  bool pop(std::string& out) {
    std::unique_lock lk(m_);
    cv_data_.wait(lk, [&] { return !q_.empty() || closed_; });
    if (q_.empty()) return false;
    out = std::move(q_.front());
    q_.pop_front();
    cv_room_.notify_one();
    return true;
  }

  void close() {
    std::lock_guard lk(m_);
    closed_ = true;
    cv_data_.notify_all();
  }

 private:
  std::mutex m_;
  std::condition_variable cv_data_, cv_room_;
  std::deque<std::string> q_;
  std::size_t cap_;
  bool closed_ = false;
};

constexpr std::size_t kBlockBytes = std::size_t(4) << 20;

// Shared pipeline for both ingest modes. Mode::presence packs (user,
// day, place) and dedups; Mode::timed keeps per-event timestamps.
template <typename Rec, bool kTimed>
class IngestEngine {
 public:
  IngestEngine(const PlaceRegistry& registry, const IngestConfig& cfg)
      : registry_(registry),
        cfg_(cfg),
        seq_(next_seq()),
        sorter_(cfg.spill_threshold, spill_dir("a")),
        resorter_(cfg.spill_threshold, spill_dir("b")) {}

  // Spill directories are engine-unique so two ingests sharing a tmp dir
  // cannot clobber each other's runs.
  static int next_seq() {
    static std::atomic<int> counter{0};
    return counter.fetch_add(1);
  }

  std::filesystem::path spill_dir(const char* tag) const {
    return std::filesystem::path(cfg_.tmp_dir) /
           ("ingest_spill_" + std::to_string(seq_) + "_" + tag);
  }

  void run_files(const std::vector<std::string>& paths) {
    if (paths.empty()) throw ConfigError("no event files given");
    const int threads = std::max(1, cfg_.threads);
    if (threads == 1) {
      for (const auto& p : paths)
        read_blocks(p, [&](std::string&& b) { process_block(b); });
      return;
    }
    BlockQueue queue(std::size_t(threads) * 2);
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_m;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        std::string block;
        while (queue.pop(block)) {
          try {
            process_block(block);
          } catch (...) {
            std::lock_guard lk(err_m);
            if (!err) err = std::current_exception();
          }
        }
      });
    }
    try {
      for (const auto& p : paths)
        read_blocks(p, [&](std::string&& b) { queue.push(std::move(b)); });
    } catch (...) {
      queue.close();
      for (auto& th : pool) th.join();
      throw;
    }
    queue.close();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  // Sorted, deduplicated emission. fn(user, day_or_ts, place_code).
  template <typename Fn>
  void finish(Fn&& fn) {
    // Rank users by their string so the final order is input-order
    // independent.
    std::vector<std::uint32_t> by_rank(names_.size());
    for (std::uint32_t i = 0; i < names_.size(); ++i) by_rank[i] = i;
    std::sort(by_rank.begin(), by_rank.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                return names_[a] < names_[b];
              });
    std::vector<std::uint32_t> rank_of(names_.size());
    for (std::uint32_t r = 0; r < by_rank.size(); ++r) rank_of[by_rank[r]] = r;

    sorter_.finish(true, [&](const Rec& rec) {
      Rec out = rec;
      out.uid = rank_of[rec.uid];
      resorter_.add(out);
    });
    std::vector<bool> place_seen(registry_.places(cfg_.level).size(), false);
    const auto& places = registry_.places(cfg_.level);
    resorter_.finish(false, [&](const Rec& rec) {
      ++report_.tuples;
      place_seen[rec.place] = true;
      if constexpr (kTimed) {
        fn(std::string_view(names_[by_rank[rec.uid]]), rec.ts,
           std::string_view(places[rec.place].code));
      } else {
        fn(std::string_view(names_[by_rank[rec.uid]]), rec.day,
           std::string_view(places[rec.place].code));
      }
    });
    report_.users = names_.size();
    report_.places = std::uint64_t(
        std::count(place_seen.begin(), place_seen.end(), true));
  }

  IngestReport& report() { return report_; }

 private:
  template <typename Fn>
  void read_blocks(const std::string& path, Fn&& emit) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw DataError("cannot open event file: " + path);
    std::string carry;
    std::string buf;
    bool eof = false;
    while (!eof) {
      buf.resize(carry.size() + kBlockBytes);
      std::memcpy(buf.data(), carry.data(), carry.size());
      const std::size_t n =
          std::fread(buf.data() + carry.size(), 1, kBlockBytes, f);
      eof = n < kBlockBytes;
      buf.resize(carry.size() + n);
      if (std::ferror(f)) {
        std::fclose(f);
        throw DataError("read error on event file: " + path);
      }
      // Hand off whole lines; the tail goes back into carry.
      const std::size_t cut = buf.find_last_of('\n');
      if (cut == std::string::npos) {
        carry = std::move(buf);
        continue;
      }
      carry.assign(buf, cut + 1, buf.size() - cut - 1);
      buf.resize(cut + 1);
      emit(std::move(buf));
      buf.clear();
    }
    std::fclose(f);
    if (!carry.empty()) emit(std::move(carry));
  }

  void process_block(std::string_view block) {
    IngestReport local;
    std::unordered_map<std::string, std::uint32_t> local_uid;
    std::vector<std::string> local_names;
    std::vector<Rec> local_recs;
    GeoEvent ev;
    std::size_t pos = 0;
    while (pos < block.size()) {
      std::size_t nl = block.find('\n', pos);
      if (nl == std::string_view::npos) nl = block.size();
      std::string_view line = block.substr(pos, nl - pos);
      pos = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      ++local.read;
      const EventParse rc = parse_event(line, ev);
      if (rc != EventParse::ok) {
        ++local.rejected_parse;
        continue;
      }
      if (cfg_.whitelist && !cfg_.whitelist->contains(ev.source)) {
        ++local.rejected_source;
        continue;
      }
      if (!resolution_admits(ev.res, cfg_.level)) {
        ++local.rejected_resolution;
        continue;
      }
      if (ev.day < cfg_.from || ev.day > cfg_.to) {
        ++local.rejected_window;
        continue;
      }
      const Place* place = nullptr;
      if (!ev.place_code.empty())
        place = registry_.resolve_code(ev.place_code, cfg_.level);
      if (!place && ev.has_coord)
        place = registry_.assign_point({ev.lat, ev.lon}, cfg_.level);
      if (!place) {
        ++local.rejected_unresolved;
        continue;
      }
      ++local.kept;
      const auto [it, inserted] =
          local_uid.try_emplace(ev.user, std::uint32_t(local_names.size()));
      if (inserted) local_names.push_back(ev.user);
      Rec rec;
      rec.uid = it->second;
      rec.place = std::uint32_t(place - registry_.places(cfg_.level).data());
      if constexpr (kTimed) {
        rec.ts = ev.ts_sec;
      } else {
        rec.day = ev.day;
      }
      local_recs.push_back(rec);
    }
    // One global rendezvous per block: translate local user ids and
    // append to the shared sorter.
    std::lock_guard lk(merge_m_);
    std::vector<std::uint32_t> remap(local_names.size());
    for (std::uint32_t i = 0; i < local_names.size(); ++i) {
      const auto [it, inserted] =
          uid_map_.try_emplace(local_names[i], std::uint32_t(names_.size()));
      if (inserted) names_.push_back(std::move(local_names[i]));
      remap[i] = it->second;
    }
    for (Rec rec : local_recs) {
      rec.uid = remap[rec.uid];
      sorter_.add(rec);
    }
    report_.read += local.read;
    report_.kept += local.kept;
    report_.rejected_parse += local.rejected_parse;
    report_.rejected_source += local.rejected_source;
    report_.rejected_resolution += local.rejected_resolution;
    report_.rejected_window += local.rejected_window;
    report_.rejected_unresolved += local.rejected_unresolved;
  }

  const PlaceRegistry& registry_;
  const IngestConfig& cfg_;
  int seq_;
  std::mutex merge_m_;
  std::unordered_map<std::string, std::uint32_t> uid_map_;
  std::vector<std::string> names_;
  ExternalSorter<Rec> sorter_;
  ExternalSorter<Rec> resorter_;
  IngestReport report_;
};

}  // namespace

IngestReport ingest_files(
    const std::vector<std::string>& paths, const PlaceRegistry& registry,
    const IngestConfig& cfg,
    const std::function<void(std::string_view, Day, std::string_view)>& sink) {
  IngestEngine<PresenceRec, false> engine(registry, cfg);
  engine.run_files(paths);
  engine.finish([&](std::string_view user, Day day, std::string_view code) {
    sink(user, day, code);
  });
  return engine.report();
}

IngestReport ingest_files_with_timestamps(
    const std::vector<std::string>& paths, const PlaceRegistry& registry,
    const IngestConfig& cfg,
    const std::function<void(std::string_view, std::int64_t, std::string_view)>&
        sink) {
  IngestEngine<TimedRec, true> engine(registry, cfg);
  engine.run_files(paths);
  engine.finish(
      [&](std::string_view user, std::int64_t ts, std::string_view code) {
        sink(user, ts, code);
      });
  return engine.report();
}

}  // namespace pci
