#include "pci/events.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace pci {

std::string_view to_string(EventParse e) {
  switch (e) {
    case EventParse::ok: return "ok";
    case EventParse::bad_json: return "bad_json";
    case EventParse::missing_field: return "missing_field";
    case EventParse::bad_timestamp: return "bad_timestamp";
    case EventParse::bad_resolution: return "bad_resolution";
    case EventParse::bad_location: return "bad_location";
  }
  return "?";
}

namespace {

// Hand-rolled scanner for the common case: one flat object, no escape
// sequences, no nested values. Anything it cannot prove it understands
// makes it bail out so the caller can rerun the line through the full
// JSON parser. Keeping the fast path conservative means the two paths
// cannot disagree, only differ in speed.
struct FlatScanner {
  const char* p;
  const char* end;

  explicit FlatScanner(std::string_view s) : p(s.data()), end(s.data() + s.size()) {}

  void ws() {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n'))
      ++p;
  }

  bool lit(char c) {
    ws();
    if (p < end && *p == c) {
      ++p;
      return true;
    }
    return false;
  }

  // Returns the raw bytes between quotes; bails on any backslash.
  bool string_token(std::string_view& out) {
    ws();
    if (p >= end || *p != '"') return false;
    const char* start = ++p;
    while (p < end) {
      if (*p == '\\') return false;
      if (*p == '"') {
        out = std::string_view(start, std::size_t(p - start));
        ++p;
        return true;
      }
      ++p;
    }
    return false;
  }

  bool number_token(double& out) {
    ws();
    const char* start = p;
    if (p < end && (*p == '-' || *p == '+')) ++p;
    while (p < end && ((*p >= '0' && *p <= '9') || *p == '.' || *p == 'e' ||
                       *p == 'E' || *p == '-' || *p == '+'))
      ++p;
    const auto [next, ec] = std::from_chars(start, p, out);
    return ec == std::errc{} && next == p;
  }

  bool keyword(std::string_view kw) {
    if (std::size_t(end - p) < kw.size()) return false;
    if (std::string_view(p, kw.size()) != kw) return false;
    p += kw.size();
    return true;
  }

  bool at_end() {
    ws();
    return p == end;
  }
};

struct RawEvent {
  std::string_view user, ts, res, place_code, source;
  bool has_user = false, has_ts = false, has_res = false, has_source = false,
       has_place = false, has_lat = false, has_lon = false;
  double lat = 0.0, lon = 0.0;
};

// Returns false when the line needs the full parser.
bool scan_flat(std::string_view line, RawEvent& raw) {
  FlatScanner s(line);
  if (!s.lit('{')) return false;
  if (s.lit('}')) return s.at_end();
  while (true) {
    std::string_view key;
    if (!s.string_token(key)) return false;
    if (!s.lit(':')) return false;
    s.ws();
    if (s.p >= s.end) return false;
    const char c = *s.p;
    if (c == '"') {
      std::string_view val;
      if (!s.string_token(val)) return false;
      if (key == "user") {
        raw.user = val;
        raw.has_user = true;
      } else if (key == "ts") {
        raw.ts = val;
        raw.has_ts = true;
      } else if (key == "res") {
        raw.res = val;
        raw.has_res = true;
      } else if (key == "place_code") {
        raw.place_code = val;
        raw.has_place = true;
      } else if (key == "source") {
        raw.source = val;
        raw.has_source = true;
      }
    } else if (c == 'n') {
      if (!s.keyword("null")) return false;
    } else if (c == 't') {
      if (!s.keyword("true")) return false;
    } else if (c == 'f') {
      if (!s.keyword("false")) return false;
    } else if (c == '{' || c == '[') {
      return false;  // nested value, let the full parser judge it
    } else {
      double v;
      if (!s.number_token(v)) return false;
      if (key == "lat") {
        raw.lat = v;
        raw.has_lat = true;
      } else if (key == "lon") {
        raw.lon = v;
        raw.has_lon = true;
      }
    }
    if (s.lit(',')) continue;
    if (s.lit('}')) return s.at_end();
    return false;
  }
}

// Full-parser path for lines the scanner refused.
EventParse parse_with_json(std::string_view line, RawEvent& raw,
                           std::string& storage) {
  const auto doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return EventParse::bad_json;
  // Decoded strings need owned storage; pack them into one buffer and
  // fix up the views afterwards so reallocation cannot dangle them.
  std::size_t total = 0;
  for (const char* key : {"user", "ts", "res", "place_code", "source"}) {
    const auto it = doc.find(key);
    if (it != doc.end() && it->is_string())
      total += it->get_ref<const std::string&>().size();
  }
  storage.reserve(total);
  const auto own = [&storage](const std::string& s) {
    const std::size_t off = storage.size();
    storage.append(s);
    return std::pair<std::size_t, std::size_t>(off, s.size());
  };
  std::pair<std::size_t, std::size_t> spans[5];
  bool has[5] = {false, false, false, false, false};
  const char* keys[5] = {"user", "ts", "res", "place_code", "source"};
  for (int i = 0; i < 5; ++i) {
    const auto it = doc.find(keys[i]);
    if (it == doc.end() || it->is_null()) continue;
    if (!it->is_string()) return EventParse::bad_json;
    spans[i] = own(it->get_ref<const std::string&>());
    has[i] = true;
  }
  const auto view = [&storage](std::pair<std::size_t, std::size_t> sp) {
    return std::string_view(storage.data() + sp.first, sp.second);
  };
  if (has[0]) raw.user = view(spans[0]), raw.has_user = true;
  if (has[1]) raw.ts = view(spans[1]), raw.has_ts = true;
  if (has[2]) raw.res = view(spans[2]), raw.has_res = true;
  if (has[3]) raw.place_code = view(spans[3]), raw.has_place = true;
  if (has[4]) raw.source = view(spans[4]), raw.has_source = true;
  for (const char* key : {"lat", "lon"}) {
    const auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) continue;
    if (!it->is_number()) return EventParse::bad_json;
    if (key[1] == 'a') {
      raw.lat = it->get<double>();
      raw.has_lat = true;
    } else {
      raw.lon = it->get<double>();
      raw.has_lon = true;
    }
  }
  return EventParse::ok;
}

}  // namespace

EventParse parse_event(std::string_view line, GeoEvent& out) {
  RawEvent raw;
  std::string storage;
  if (!scan_flat(line, raw)) {
    raw = RawEvent{};
    const EventParse rc = parse_with_json(line, raw, storage);
    if (rc != EventParse::ok) return rc;
  }
  if (!raw.has_user || raw.user.empty() || !raw.has_ts || !raw.has_res ||
      !raw.has_source)
    return EventParse::missing_field;
  const auto res = parse_resolution(raw.res);
  if (!res) return EventParse::bad_resolution;
  const auto ts = parse_timestamp_utc(raw.ts);
  if (!ts) return EventParse::bad_timestamp;
  // lat and lon travel together; events need coordinates or a code, and
  // coordinate-resolution events need actual coordinates.
  if (raw.has_lat != raw.has_lon) return EventParse::bad_location;
  const bool has_place = raw.has_place && !raw.place_code.empty();
  if (!raw.has_lat && !has_place) return EventParse::bad_location;
  if (*res == SpatialResolution::coord && !raw.has_lat)
    return EventParse::bad_location;
  if (raw.has_lat && (std::fabs(raw.lat) > 90.0 || std::fabs(raw.lon) > 180.0))
    return EventParse::bad_location;

  out.user.assign(raw.user);
  out.ts_sec = *ts;
  out.day = day_of_epoch_sec(*ts);
  out.has_coord = raw.has_lat;
  out.lat = raw.lat;
  out.lon = raw.lon;
  out.res = *res;
  out.place_code.assign(has_place ? raw.place_code : std::string_view{});
  out.source.assign(raw.source);
  return EventParse::ok;
}

SourceWhitelist SourceWhitelist::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open whitelist file: " + path);
  SourceWhitelist wl;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    wl.insert(line);
  }
  return wl;
}

}  // namespace pci
