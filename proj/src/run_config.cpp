#include "pci/run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "pci/parallel.hpp"
#include "pci/version.hpp"

namespace pci {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "' wants true or false, got '" +
                    v + "'");
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("config key '" + key +
                      "' wants a non-negative integer, got '" + v + "'");
  }
  return std::stoull(v);
}

}  // namespace

PlaceLevel RunConfig::parsed_level() const {
  const auto l = parse_level(level);
  if (!l) throw ConfigError("unknown level: " + level);
  return *l;
}

PlaceLevel RunConfig::parsed_region_level() const {
  const auto l = parse_level(region_level);
  if (!l) throw ConfigError("unknown region level: " + region_level);
  return *l;
}

std::optional<Day> RunConfig::parsed_from() const {
  if (from.empty()) return std::nullopt;
  const auto d = parse_date(from);
  if (!d) throw ConfigError("bad --from date (want YYYY-MM-DD): " + from);
  return d;
}

std::optional<Day> RunConfig::parsed_to() const {
  if (to.empty()) return std::nullopt;
  const auto d = parse_date(to);
  if (!d) throw ConfigError("bad --to date (want YYYY-MM-DD): " + to);
  return d;
}

void RunConfig::check_window() const {
  const auto f = parsed_from();
  const auto t = parsed_to();
  if (f && t && *f > *t) {
    throw ConfigError("window start " + from + " is after end " + to);
  }
}

int RunConfig::effective_threads() const {
  return threads == 0 ? default_threads() : int(threads);
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = unquote(trim(t.substr(eq + 1)));

    if (key == "registry") cfg.registry = val;
    else if (key == "level") cfg.level = val;
    else if (key == "events") {
      cfg.events.clear();
      std::size_t start = 0;
      while (start <= val.size()) {
        const auto comma = val.find(',', start);
        const auto end = comma == std::string::npos ? val.size() : comma;
        const std::string item = trim(val.substr(start, end - start));
        if (!item.empty()) cfg.events.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else if (key == "from") cfg.from = val;
    else if (key == "to") cfg.to = val;
    else if (key == "whitelist") cfg.whitelist = val;
    else if (key == "out") cfg.out = val;
    else if (key == "threads") cfg.threads = unsigned(parse_u64(val, key));
    else if (key == "spill") cfg.spill = parse_u64(val, key);
    else if (key == "store") cfg.store = val;
    else if (key == "flows") cfg.flows = val;
    else if (key == "pci") cfg.pci_a = val;
    else if (key == "pci-b") cfg.pci_b = val;
    else if (key == "covariates") cfg.covariates = val;
    else if (key == "assignment") cfg.assignment = val;
    else if (key == "values") cfg.values = val;
    else if (key == "focal") cfg.focal = val;
    else if (key == "region-level") cfg.region_level = val;
    else if (key == "k") cfg.k = unsigned(parse_u64(val, key));
    else if (key == "scale") {
      try {
        std::size_t used = 0;
        cfg.scale = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
      } catch (const std::exception&) {
        throw ConfigError("config key 'scale' wants a number, got '" + val +
                          "'");
      }
    } else if (key == "include-self") cfg.include_self = parse_bool(val, key);
    else if (key == "transitions") cfg.transitions = parse_bool(val, key);
    else {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": unknown config key '" + key + "'");
    }
  }
}

std::uint64_t semantic_hash(const RunConfig& cfg, std::string_view command) {
  std::string canon;
  canon.reserve(256);
  const auto add = [&](std::string_view key, std::string_view val) {
    canon += key;
    canon += '=';
    canon += val;
    canon += '\n';
  };
  add("command", command);
  add("registry", cfg.registry);
  add("level", cfg.level);
  for (const auto& e : cfg.events) add("events", e);
  add("from", cfg.from);
  add("to", cfg.to);
  add("whitelist", cfg.whitelist);
  add("store", cfg.store);
  add("flows", cfg.flows);
  add("pci", cfg.pci_a);
  add("pci-b", cfg.pci_b);
  add("covariates", cfg.covariates);
  add("assignment", cfg.assignment);
  add("values", cfg.values);
  add("focal", cfg.focal);
  add("region-level", cfg.region_level);
  add("k", std::to_string(cfg.k));
  char scale_buf[40];
  std::snprintf(scale_buf, sizeof(scale_buf), "%.17g", cfg.scale);
  add("scale", scale_buf);
  add("include-self", cfg.include_self ? "1" : "0");
  add("transitions", cfg.transitions ? "1" : "0");
  return fnv1a64(canon);
}

std::string run_provenance(const RunConfig& cfg, std::string_view command) {
  return provenance_line(semantic_hash(cfg, command));
}

}  // namespace pci
