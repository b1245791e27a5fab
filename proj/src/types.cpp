#include "pci/types.hpp"

#include <array>
#include <cstdio>

namespace pci {

std::string_view to_string(PlaceLevel l) {
  switch (l) {
    case PlaceLevel::country: return "country";
    case PlaceLevel::admin1: return "admin1";
    case PlaceLevel::county: return "county";
    case PlaceLevel::metro: return "metro";
    case PlaceLevel::tract: return "tract";
  }
  return "?";
}

std::string_view to_string(SpatialResolution r) {
  switch (r) {
    case SpatialResolution::coord: return "coord";
    case SpatialResolution::neighborhood_poi: return "neighborhood_poi";
    case SpatialResolution::city: return "city";
    case SpatialResolution::admin1: return "admin1";
    case SpatialResolution::country: return "country";
  }
  return "?";
}

std::optional<PlaceLevel> parse_level(std::string_view token) {
  if (token == "country") return PlaceLevel::country;
  if (token == "admin1") return PlaceLevel::admin1;
  if (token == "county") return PlaceLevel::county;
  if (token == "metro") return PlaceLevel::metro;
  if (token == "tract") return PlaceLevel::tract;
  return std::nullopt;
}

std::optional<SpatialResolution> parse_resolution(std::string_view token) {
  if (token == "coord") return SpatialResolution::coord;
  if (token == "neighborhood_poi") return SpatialResolution::neighborhood_poi;
  if (token == "city") return SpatialResolution::city;
  if (token == "admin1") return SpatialResolution::admin1;
  if (token == "country") return SpatialResolution::country;
  return std::nullopt;
}

Day make_day(int year, unsigned month, unsigned day_of_month) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day_of_month}};
  return static_cast<Day>(sys_days{ymd}.time_since_epoch().count());
}

namespace {

bool read_uint(std::string_view s, std::size_t pos, std::size_t len,
               unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  out = v;
  return true;
}

bool valid_ymd(unsigned y, unsigned m, unsigned d) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{static_cast<int>(y)},
                           std::chrono::month{m}, std::chrono::day{d}};
  return ymd.ok();
}

}  // namespace

std::optional<Day> parse_date(std::string_view iso) {
  unsigned y, m, d;
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  if (!read_uint(iso, 0, 4, y) || !read_uint(iso, 5, 2, m) ||
      !read_uint(iso, 8, 2, d))
    return std::nullopt;
  if (!valid_ymd(y, m, d)) return std::nullopt;
  return make_day(static_cast<int>(y), m, d);
}

std::string day_to_string(Day d) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{d}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<std::int64_t> parse_timestamp_utc(std::string_view iso) {
  // YYYY-MM-DDThh:mm:ss[.frac](Z|±hh:mm|±hhmm)
  unsigned y, mo, d, h, mi, s;
  if (iso.size() < 20 || iso[4] != '-' || iso[7] != '-' || iso[10] != 'T' ||
      iso[13] != ':' || iso[16] != ':')
    return std::nullopt;
  if (!read_uint(iso, 0, 4, y) || !read_uint(iso, 5, 2, mo) ||
      !read_uint(iso, 8, 2, d) || !read_uint(iso, 11, 2, h) ||
      !read_uint(iso, 14, 2, mi) || !read_uint(iso, 17, 2, s))
    return std::nullopt;
  if (!valid_ymd(y, mo, d) || h > 23 || mi > 59 || s > 59) return std::nullopt;

  std::size_t pos = 19;
  if (pos < iso.size() && iso[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < iso.size() && iso[pos] >= '0' && iso[pos] <= '9') {
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }
  if (pos >= iso.size()) return std::nullopt;  // zone offset is required

  std::int64_t offset_sec = 0;
  if (iso[pos] == 'Z') {
    if (pos + 1 != iso.size()) return std::nullopt;
  } else if (iso[pos] == '+' || iso[pos] == '-') {
    const int sign = iso[pos] == '+' ? 1 : -1;
    ++pos;
    unsigned oh = 0, om = 0;
    if (iso.size() - pos == 5 && iso[pos + 2] == ':') {
      if (!read_uint(iso, pos, 2, oh) || !read_uint(iso, pos + 3, 2, om))
        return std::nullopt;
    } else if (iso.size() - pos == 4) {
      if (!read_uint(iso, pos, 2, oh) || !read_uint(iso, pos + 2, 2, om))
        return std::nullopt;
    } else {
      return std::nullopt;
    }
    if (oh > 14 || om > 59) return std::nullopt;
    offset_sec = sign * (static_cast<std::int64_t>(oh) * 3600 + om * 60);
  } else {
    return std::nullopt;
  }

  const std::int64_t day0 = make_day(static_cast<int>(y), mo, d);
  return day0 * 86400 + h * 3600 + mi * 60 + s - offset_sec;
}

Day day_of_epoch_sec(std::int64_t epoch_sec) {
  // Floor division keeps pre-1970 instants on the right calendar day.
  std::int64_t day = epoch_sec / 86400;
  if (epoch_sec % 86400 < 0) --day;
  return static_cast<Day>(day);
}

std::optional<Day> parse_timestamp_utc_day(std::string_view iso) {
  const auto sec = parse_timestamp_utc(iso);
  if (!sec) return std::nullopt;
  return day_of_epoch_sec(*sec);
}

}  // namespace pci
