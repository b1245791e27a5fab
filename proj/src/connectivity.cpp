#include "pci/connectivity.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "pci/csv.hpp"
#include "pci/types.hpp"

namespace pci {

namespace {

void check_pair(std::uint64_t shared, std::uint64_t users_i,
                std::uint64_t users_j) {
  if (users_i == 0 || users_j == 0) {
    throw DataError("pci undefined for a place with zero users");
  }
  if (shared > std::min(users_i, users_j)) {
    throw DataError("shared user count exceeds a place's user count");
  }
}

}  // namespace

double pci_value(std::uint64_t shared, std::uint64_t users_i,
                 std::uint64_t users_j) {
  check_pair(shared, users_i, users_j);
  return static_cast<double>(shared) /
         std::sqrt(static_cast<double>(users_i) *
                   static_cast<double>(users_j));
}

std::pair<double, double> directional_pci(std::uint64_t shared,
                                          std::uint64_t users_i,
                                          std::uint64_t users_j) {
  check_pair(shared, users_i, users_j);
  return {static_cast<double>(shared) / static_cast<double>(users_i),
          static_cast<double>(shared) / static_cast<double>(users_j)};
}

double round3_even(double v) {
  // nearbyint honours the current rounding mode; the default mode is
  // round-to-nearest-even, which is what published tables use for .5
  // cases.
  std::fesetround(FE_TONEAREST);
  return std::nearbyint(v * 1000.0) / 1000.0;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<PciRecord> build_matrix(const std::vector<SharedUserCount>& shared,
                                    const std::vector<PlaceUserCount>& counts,
                                    bool include_self) {
  std::unordered_map<std::string, std::uint64_t> users;
  users.reserve(counts.size());
  for (const auto& c : counts) users[c.place] = c.users;

  auto users_of = [&](const std::string& code) {
    auto it = users.find(code);
    if (it == users.end()) {
      throw DataError("pair references place with no user count: " + code);
    }
    return it->second;
  };

  std::vector<PciRecord> out;
  out.reserve(shared.size() + (include_self ? counts.size() : 0));
  for (const auto& s : shared) {
    PciRecord r;
    r.place_i = s.place_i;
    r.place_j = s.place_j;
    r.users_i = users_of(s.place_i);
    r.users_j = users_of(s.place_j);
    r.shared = s.shared;
    r.pci = pci_value(s.shared, r.users_i, r.users_j);
    std::tie(r.pci_i_to_j, r.pci_j_to_i) =
        directional_pci(s.shared, r.users_i, r.users_j);
    out.push_back(std::move(r));
  }
  if (include_self) {
    for (const auto& c : counts) {
      if (c.users == 0) {
        throw DataError("pci undefined for a place with zero users");
      }
      PciRecord r;
      r.place_i = c.place;
      r.place_j = c.place;
      r.users_i = r.users_j = r.shared = c.users;
      r.pci = r.pci_i_to_j = r.pci_j_to_i = 1.0;
      out.push_back(std::move(r));
    }
  }
  std::sort(out.begin(), out.end(), [](const PciRecord& a, const PciRecord& b) {
    if (a.place_i != b.place_i) return a.place_i < b.place_i;
    return a.place_j < b.place_j;
  });
  return out;
}

std::string format_pci_row(const PciRecord& r) {
  std::string row = csv::escape(r.place_i);
  row += ',';
  row += csv::escape(r.place_j);
  char nums[160];
  std::snprintf(nums, sizeof(nums), ",%llu,%llu,%llu",
                static_cast<unsigned long long>(r.users_i),
                static_cast<unsigned long long>(r.users_j),
                static_cast<unsigned long long>(r.shared));
  row += nums;
  for (double v : {r.pci, r.pci_i_to_j, r.pci_j_to_i}) {
    row += ',';
    row += format_value(v);
  }
  return row;
}

void read_pci_matrix(const std::string& path,
                     const std::function<void(const PciRecord&)>& fn) {
  bool header_ok = false;
  csv::for_each_row(
      path,
      [&](const std::vector<std::string>& header) {
        static const std::vector<std::string> want = {
            "place_i", "place_j",      "users_i", "users_j",
            "shared_users", "pci", "pci_i_to_j", "pci_j_to_i"};
        if (header != want) {
          throw DataError(path + ": unexpected matrix header");
        }
        header_ok = true;
      },
      [&](const std::vector<std::string>& row, std::size_t line) {
        if (row.size() != 8) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": expected 8 fields");
        }
        PciRecord r;
        r.place_i = row[0];
        r.place_j = row[1];
        try {
          r.users_i = std::stoull(row[2]);
          r.users_j = std::stoull(row[3]);
          r.shared = std::stoull(row[4]);
          r.pci = std::stod(row[5]);
          r.pci_i_to_j = std::stod(row[6]);
          r.pci_j_to_i = std::stod(row[7]);
        } catch (const std::exception&) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": malformed numeric field");
        }
        fn(r);
      });
  if (!header_ok) {
    throw DataError(path + ": empty matrix file");
  }
}

}  // namespace pci
