#ifndef PCI_EXTERNAL_SORT_HPP
#define PCI_EXTERNAL_SORT_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "pci/types.hpp"

namespace pci {

// Sorted-run spiller for fixed-size records. Records accumulate in memory;
// above `max_in_memory` they are sorted and written to a temporary run file.
// finish() merges all runs plus the in-memory tail into one sorted stream,
// optionally dropping duplicates. Exactness does not depend on the threshold.
template <typename Rec, typename Less = std::less<Rec>>
class ExternalSorter {
 public:
  ExternalSorter(std::size_t max_in_memory, std::filesystem::path tmp_dir,
                 Less less = Less{})
      : max_in_memory_(std::max<std::size_t>(max_in_memory, 1)),
        tmp_dir_(std::move(tmp_dir)),
        less_(less) {}

  ~ExternalSorter() {
    for (const auto& p : runs_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  }

  void add(const Rec& r) {
    buf_.push_back(r);
    if (buf_.size() >= max_in_memory_) spill();
  }

  std::size_t size_in_memory() const { return buf_.size(); }
  std::size_t run_count() const { return runs_.size(); }

  // Emits records in sorted order. With dedup, records comparing equal
  // (neither less) collapse to one.
  template <typename Emit>
  void finish(bool dedup, Emit&& emit) {
    std::sort(buf_.begin(), buf_.end(), less_);
    if (runs_.empty()) {
      const Rec* prev = nullptr;
      for (const Rec& r : buf_) {
        if (dedup && prev && !less_(*prev, r) && !less_(r, *prev)) continue;
        emit(r);
        prev = &r;
      }
      buf_.clear();
      return;
    }
    if (!buf_.empty()) spill();
    merge_runs(dedup, emit);
  }

 private:
  struct RunReader {
    std::FILE* f = nullptr;
    std::vector<Rec> block;
    std::size_t pos = 0;
    bool fill() {
      block.resize(4096);
      const std::size_t n = std::fread(block.data(), sizeof(Rec), 4096, f);
      block.resize(n);
      pos = 0;
      return n > 0;
    }
    bool next(Rec& out) {
      if (pos >= block.size() && !fill()) return false;
      out = block[pos++];
      return true;
    }
  };

  void spill() {
    std::sort(buf_.begin(), buf_.end(), less_);
    std::filesystem::create_directories(tmp_dir_);
    const auto path =
        tmp_dir_ / ("run" + std::to_string(runs_.size()) + ".bin");
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataError("cannot open spill file: " + path.string());
    if (!buf_.empty() &&
        std::fwrite(buf_.data(), sizeof(Rec), buf_.size(), f) != buf_.size()) {
      std::fclose(f);
      throw DataError("spill write failed: " + path.string());
    }
    std::fclose(f);
    runs_.push_back(path);
    buf_.clear();
  }

  template <typename Emit>
  void merge_runs(bool dedup, Emit&& emit) {
    std::vector<RunReader> readers(runs_.size());
    for (std::size_t i = 0; i < runs_.size(); ++i) {
      readers[i].f = std::fopen(runs_[i].c_str(), "rb");
      if (!readers[i].f)
        throw DataError("cannot reopen spill file: " + runs_[i].string());
    }
    struct HeapItem {
      Rec rec;
      std::size_t src;
    };
    auto heap_greater = [this](const HeapItem& a, const HeapItem& b) {
      if (less_(a.rec, b.rec)) return false;
      if (less_(b.rec, a.rec)) return true;
      return a.src > b.src;
    };
    std::priority_queue<HeapItem, std::vector<HeapItem>,
                        decltype(heap_greater)>
        heap(heap_greater);
    Rec r;
    for (std::size_t i = 0; i < readers.size(); ++i)
      if (readers[i].next(r)) heap.push({r, i});
    bool have_prev = false;
    Rec prev{};
    while (!heap.empty()) {
      HeapItem top = heap.top();
      heap.pop();
      if (!dedup || !have_prev || less_(prev, top.rec) ||
          less_(top.rec, prev)) {
        emit(top.rec);
        prev = top.rec;
        have_prev = true;
      }
      if (readers[top.src].next(r)) heap.push({r, top.src});
    }
    for (auto& rd : readers) std::fclose(rd.f);
    for (const auto& p : runs_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
    runs_.clear();
  }

  std::size_t max_in_memory_;
  std::filesystem::path tmp_dir_;
  Less less_;
  std::vector<Rec> buf_;
  std::vector<std::filesystem::path> runs_;
};

// Counting map from 64-bit keys to 64-bit tallies with the same spill
// contract: above the threshold the map is flushed to a sorted run and
// finish() merges runs by summing per-key counts.
class SpillingCounter {
 public:
  SpillingCounter(std::size_t max_entries, std::filesystem::path tmp_dir)
      : max_entries_(std::max<std::size_t>(max_entries, 1)),
        sorter_(max_entries_, std::move(tmp_dir), LessKey{}) {}

  void add(std::uint64_t key, std::uint64_t count) {
    auto [it, inserted] = map_.try_emplace(key, 0);
    it->second += count;
    if (map_.size() >= max_entries_) flush_to_run();
  }

  void merge(const SpillingCounter& other) {
    for (const auto& [k, v] : other.map_) add(k, v);
  }

  // Emits (key, total) pairs in ascending key order.
  template <typename Emit>
  void finish(Emit&& emit) {
    flush_to_run();
    std::uint64_t cur_key = 0, cur_count = 0;
    bool have = false;
    sorter_.finish(false, [&](const Entry& e) {
      if (have && e.key == cur_key) {
        cur_count += e.count;
        return;
      }
      if (have) emit(cur_key, cur_count);
      cur_key = e.key;
      cur_count = e.count;
      have = true;
    });
    if (have) emit(cur_key, cur_count);
  }

 private:
  struct Entry {
    std::uint64_t key;
    std::uint64_t count;
  };
  struct LessKey {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.key < b.key;
    }
  };

  void flush_to_run() {
    if (map_.empty()) return;
    for (const auto& [k, v] : map_) sorter_.add({k, v});
    map_.clear();
  }

  std::size_t max_entries_;
  std::unordered_map<std::uint64_t, std::uint64_t> map_;
  ExternalSorter<Entry, LessKey> sorter_;
};

}  // namespace pci

#endif
