// Command-line front end: wires the config file and flags into the
// pipeline stages and owns all file naming conventions.

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pci/analytics.hpp"
#include "pci/clustering.hpp"
#include "pci/connectivity.hpp"
#include "pci/csv.hpp"
#include "pci/exporters.hpp"
#include "pci/ingest.hpp"
#include "pci/movement.hpp"
#include "pci/place_registry.hpp"
#include "pci/presence.hpp"
#include "pci/run_config.hpp"
#include "pci/types.hpp"

namespace {

using namespace pci;
namespace fs = std::filesystem;

fs::path ensure_out_dir(const RunConfig& cfg) {
  fs::path out(cfg.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw ConfigError("cannot create output directory: " + cfg.out);
  }
  return out;
}

// Scratch space for spill runs, removed when the command finishes.
struct TmpDir {
  fs::path path;
  explicit TmpDir(const fs::path& out)
      : path(out / (".tmp-" + std::to_string(getpid()))) {
    fs::create_directories(path);
  }
  ~TmpDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void warn_rejections(const IngestReport& rep) {
  if (rep.rejected() == 0) return;
  std::fprintf(stderr,
               "warning: rejected %llu of %llu events "
               "(parse=%llu source=%llu resolution=%llu window=%llu "
               "unresolved=%llu)\n",
               (unsigned long long)rep.rejected(),
               (unsigned long long)rep.read,
               (unsigned long long)rep.rejected_parse,
               (unsigned long long)rep.rejected_source,
               (unsigned long long)rep.rejected_resolution,
               (unsigned long long)rep.rejected_window,
               (unsigned long long)rep.rejected_unresolved);
}

IngestConfig to_ingest_config(const RunConfig& cfg, const fs::path& tmp,
                              const SourceWhitelist* wl) {
  cfg.check_window();
  IngestConfig ic;
  ic.level = cfg.parsed_level();
  if (const auto f = cfg.parsed_from()) ic.from = *f;
  if (const auto t = cfg.parsed_to()) ic.to = *t;
  ic.whitelist = wl;
  ic.threads = cfg.effective_threads();
  ic.spill_threshold = std::size_t(cfg.spill);
  ic.tmp_dir = tmp.string();
  return ic;
}

int run_ingest(const RunConfig& cfg) {
  if (cfg.registry.empty()) {
    throw ConfigError("ingest needs --registry");
  }
  if (cfg.events.empty()) {
    throw ConfigError("ingest needs at least one event file");
  }
  const fs::path out = ensure_out_dir(cfg);
  const TmpDir tmp(out);
  const PlaceRegistry registry = PlaceRegistry::load(cfg.registry);
  SourceWhitelist wl;
  if (!cfg.whitelist.empty()) wl = SourceWhitelist::load(cfg.whitelist);
  const IngestConfig ic =
      to_ingest_config(cfg, tmp.path, cfg.whitelist.empty() ? nullptr : &wl);

  const std::string prov = run_provenance(cfg, "ingest");
  csv::Writer store((out / "presence.csv").string(), prov, "user,date,place");
  const IngestReport rep = ingest_files(
      cfg.events, registry, ic,
      [&](std::string_view user, Day day, std::string_view place) {
        std::string row = csv::escape(user);
        row += ',';
        row += day_to_string(day);
        row += ',';
        row += csv::escape(place);
        store.write_line(row);
      });
  store.close();
  write_text_file((out / "ingest_report.json").string(), prov, rep.to_json());
  warn_rejections(rep);
  return 0;
}

int run_pci(const RunConfig& cfg) {
  if (cfg.store.empty()) {
    throw ConfigError("pci needs --store (a presence store from ingest)");
  }
  const fs::path out = ensure_out_dir(cfg);
  const TmpDir tmp(out);
  const std::string prov = run_provenance(cfg, "pci");
  const std::string level_token(to_string(cfg.parsed_level()));
  csv::Writer w((out / ("pci_" + level_token + ".csv")).string(), prov,
                kPciMatrixHeader);

  // Pairs arrive in ascending (place_i, place_j) order; self rows slot
  // in front of each place's block, which keeps the file globally
  // sorted without buffering it.
  StoreAggregates agg;
  std::size_t next_self = 0;
  const auto write_record = [&](std::size_t i, std::size_t j,
                                std::uint64_t shared) {
    PciRecord r;
    r.place_i = agg.codes[i];
    r.place_j = agg.codes[j];
    r.users_i = agg.place_users[i];
    r.users_j = agg.place_users[j];
    r.shared = shared;
    r.pci = pci_value(shared, r.users_i, r.users_j);
    std::tie(r.pci_i_to_j, r.pci_j_to_i) =
        directional_pci(shared, r.users_i, r.users_j);
    w.write_line(format_pci_row(r));
  };
  const auto flush_self_through = [&](std::size_t i) {
    if (!cfg.include_self) return;
    for (; next_self <= i && next_self < agg.codes.size(); ++next_self) {
      write_record(next_self, next_self, agg.place_users[next_self]);
    }
  };

  aggregate_presence_store(
      cfg.store, std::size_t(cfg.spill), tmp.path.string(), agg,
      [&](std::uint32_t i, std::uint32_t j, std::uint64_t shared) {
        flush_self_through(i);
        write_record(i, j, shared);
      });
  flush_self_through(agg.codes.empty() ? 0 : agg.codes.size() - 1);
  w.close();
  return 0;
}

int run_movement(const RunConfig& cfg) {
  const fs::path out = ensure_out_dir(cfg);
  const TmpDir tmp(out);
  const std::string prov = run_provenance(cfg, "movement");
  const std::string level_token(to_string(cfg.parsed_level()));
  const std::string out_file =
      (out / ("movement_" + level_token + ".csv")).string();

  if (!cfg.flows.empty()) {
    if (cfg.transitions || !cfg.store.empty()) {
      throw ConfigError("--flows cannot combine with --store/--transitions");
    }
    if (cfg.registry.empty()) {
      throw ConfigError("flow aggregation needs --registry for rollup");
    }
    cfg.check_window();
    const PlaceRegistry registry = PlaceRegistry::load(cfg.registry);
    std::vector<DirectedFlow> flows;
    read_flows_csv(cfg.flows, [&](const DirectedFlow& f) {
      flows.push_back(f);
    });
    Day from = std::numeric_limits<Day>::min();
    Day to = std::numeric_limits<Day>::max();
    if (const auto f = cfg.parsed_from()) from = *f;
    if (const auto t = cfg.parsed_to()) to = *t;
    const auto movements =
        symmetrize_flows(flows, registry, cfg.parsed_level(), from, to);
    write_movement_csv(out_file, prov, movements);
    return 0;
  }

  if (cfg.transitions) {
    // The within-day order lives only in the raw events, so this mode
    // re-reads them instead of the store.
    if (cfg.registry.empty() || cfg.events.empty()) {
      throw ConfigError(
          "--transitions needs --registry and event files (timestamps are "
          "not kept in the presence store)");
    }
    const PlaceRegistry registry = PlaceRegistry::load(cfg.registry);
    SourceWhitelist wl;
    if (!cfg.whitelist.empty()) wl = SourceWhitelist::load(cfg.whitelist);
    const IngestConfig ic = to_ingest_config(
        cfg, tmp.path, cfg.whitelist.empty() ? nullptr : &wl);
    TransitionCounter counter;
    const IngestReport rep = ingest_files_with_timestamps(
        cfg.events, registry, ic,
        [&](std::string_view user, std::int64_t ts, std::string_view place) {
          counter.observe(user, ts, place);
        });
    write_movement_csv(out_file, prov, counter.finish());
    warn_rejections(rep);
    return 0;
  }

  if (cfg.store.empty()) {
    throw ConfigError("movement needs --store, --flows, or --transitions "
                      "with event files");
  }
  std::vector<OdMovement> movements;
  movements_from_store(cfg.store, std::size_t(cfg.spill), tmp.path.string(),
                       [&](const std::string& a, const std::string& b,
                           std::uint64_t n) {
                         movements.push_back({a, b, n});
                       });
  write_movement_csv(out_file, prov, movements);
  return 0;
}

int run_cluster(const RunConfig& cfg) {
  if (cfg.pci_a.empty()) {
    throw ConfigError("cluster needs --pci (a matrix file)");
  }
  if (cfg.k == 0) {
    throw ConfigError("cluster needs --k >= 1");
  }
  const fs::path out = ensure_out_dir(cfg);
  const std::string prov = run_provenance(cfg, "cluster");

  std::vector<PciRecord> records;
  std::vector<std::string> codes;
  read_pci_matrix(cfg.pci_a, [&](const PciRecord& r) {
    records.push_back(r);
    codes.push_back(r.place_i);
    codes.push_back(r.place_j);
  });
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());

  const DistanceMatrix dist = pci_to_distance(records, std::move(codes));
  const Dendrogram dendro = agglomerate(dist);
  const CommunityAssignment assignment = cut(dendro, cfg.k);
  write_dendrogram_csv((out / "dendrogram.csv").string(), prov, dendro);
  write_assignment_csv((out / "assignment.csv").string(), prov, assignment);
  return 0;
}

// Pair-keyed values from any of the three known file shapes.
std::vector<PairValue> read_pair_values(const std::string& path) {
  std::vector<PairValue> out;
  int value_col = -1;
  std::size_t want_cols = 0;
  csv::for_each_row(
      path,
      [&](const std::vector<std::string>& header) {
        static const std::vector<std::string> pci_hdr = {
            "place_i", "place_j",      "users_i", "users_j",
            "shared_users", "pci", "pci_i_to_j", "pci_j_to_i"};
        static const std::vector<std::string> od_hdr = {"place_i", "place_j",
                                                        "person_days"};
        static const std::vector<std::string> generic_hdr = {
            "place_i", "place_j", "value"};
        if (header == pci_hdr) {
          value_col = 5;
          want_cols = 8;
        } else if (header == od_hdr || header == generic_hdr) {
          value_col = 2;
          want_cols = 3;
        } else {
          throw DataError(path + ": unrecognized pair file header");
        }
      },
      [&](const std::vector<std::string>& row, std::size_t line) {
        if (row.size() != want_cols) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": wrong field count");
        }
        try {
          out.push_back(
              {row[0], row[1], std::stod(row[std::size_t(value_col)])});
        } catch (const std::exception&) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": malformed value");
        }
      });
  if (value_col < 0) throw DataError(path + ": empty pair file");
  return out;
}

int run_correlate(const RunConfig& cfg) {
  if (cfg.pci_a.empty() || cfg.pci_b.empty()) {
    throw ConfigError("correlate needs --a and --b pair files");
  }
  const fs::path out = ensure_out_dir(cfg);
  const std::string prov = run_provenance(cfg, "correlate");
  const auto a = read_pair_values(cfg.pci_a);
  const auto b = read_pair_values(cfg.pci_b);
  const CorrelationReport rep = correlate_pairs(a, b, cfg.scale, cfg.scale);
  write_correlation_json((out / "correlation.json").string(), prov, rep);
  if (!rep.omitted.empty()) {
    std::fprintf(stderr, "warning: %zu places omitted from per-place r\n",
                 rep.omitted.size());
  }
  return 0;
}

// The matrix rows a regression consumes: canonical pair, pci value.
struct RegressRow {
  std::string place_i;
  std::string place_j;
  double pci;
};

std::vector<RegressRow> load_regress_rows(const std::string& path) {
  std::vector<RegressRow> rows;
  read_pci_matrix(path, [&](const PciRecord& r) {
    if (r.place_i == r.place_j) return;  // self rows carry no signal
    rows.push_back({r.place_i, r.place_j, r.pci});
  });
  return rows;
}

int run_regress(const RunConfig& cfg) {
  if (cfg.pci_a.empty()) throw ConfigError("regress needs --pci");
  if (cfg.registry.empty()) throw ConfigError("regress needs --registry");
  if (!cfg.covariates.empty() && cfg.focal.empty()) {
    throw ConfigError("--covariates needs --focal to pick the join column");
  }
  const fs::path out = ensure_out_dir(cfg);
  const std::string prov = run_provenance(cfg, "regress");
  const PlaceRegistry registry = PlaceRegistry::load(cfg.registry);
  const PlaceLevel level = cfg.parsed_level();
  std::vector<RegressRow> rows = load_regress_rows(cfg.pci_a);
  if (!cfg.focal.empty()) {
    std::erase_if(rows, [&](const RegressRow& r) {
      return r.place_i != cfg.focal && r.place_j != cfg.focal;
    });
  }

  std::vector<std::string> names;
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::size_t dropped = 0;

  if (cfg.covariates.empty()) {
    // Connectivity explained by the same-region dummy and centroid
    // distance, over place pairs.
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(rows.size());
    for (const auto& r : rows) pairs.emplace_back(r.place_i, r.place_j);
    const std::vector<int> same =
        same_region_dummy(pairs, registry, cfg.parsed_region_level());
    const auto n = Eigen::Index(rows.size());
    y.resize(n);
    X.resize(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& r = rows[std::size_t(i)];
      const Place* pi = registry.find(level, r.place_i);
      const Place* pj = registry.find(level, r.place_j);
      if (!pi || !pj) {
        throw DataError("matrix place missing from registry: " +
                        (pi ? r.place_j : r.place_i));
      }
      y[i] = r.pci * cfg.scale;
      X(i, 0) = 1.0;
      X(i, 1) = double(same[std::size_t(i)]);
      X(i, 2) = centroid_distance(*pi, *pj);
    }
    names = {"intercept", "same_" + cfg.region_level, "distance_miles"};
  } else {
    // Outcome rows joined to the focal place's connectivity column,
    // mirroring the applied studies' layout.
    std::map<std::string, double> pci_of;
    for (const auto& r : rows) {
      if (r.place_i == cfg.focal) pci_of[r.place_j] = r.pci;
      else if (r.place_j == cfg.focal) pci_of[r.place_i] = r.pci;
    }
    std::vector<std::string> cov_names;
    std::vector<double> ys;
    std::vector<std::vector<double>> covs;
    csv::for_each_row(
        cfg.covariates,
        [&](const std::vector<std::string>& header) {
          if (header.size() < 2 || header[0] != "place" ||
              header[1] != "outcome") {
            throw DataError(cfg.covariates +
                            ": expected header place,outcome[,...]");
          }
          cov_names.assign(header.begin() + 2, header.end());
        },
        [&](const std::vector<std::string>& row, std::size_t line) {
          if (row.size() != cov_names.size() + 2) {
            throw DataError(cfg.covariates + ":" + std::to_string(line) +
                            ": wrong field count");
          }
          const auto it = pci_of.find(row[0]);
          if (it == pci_of.end()) {
            ++dropped;  // no connectivity with the focal place
            return;
          }
          try {
            ys.push_back(std::stod(row[1]));
            std::vector<double> c;
            c.push_back(it->second * cfg.scale);
            for (std::size_t k = 2; k < row.size(); ++k)
              c.push_back(std::stod(row[k]));
            covs.push_back(std::move(c));
          } catch (const std::exception&) {
            throw DataError(cfg.covariates + ":" + std::to_string(line) +
                            ": malformed number");
          }
        });
    const auto n = Eigen::Index(ys.size());
    y.resize(n);
    X.resize(n, Eigen::Index(2 + cov_names.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = ys[std::size_t(i)];
      X(i, 0) = 1.0;
      for (std::size_t k = 0; k < covs[std::size_t(i)].size(); ++k)
        X(i, Eigen::Index(k + 1)) = covs[std::size_t(i)][k];
    }
    names = {"intercept", "pci_scaled"};
    names.insert(names.end(), cov_names.begin(), cov_names.end());
  }

  const OlsResult fit = ols(y, X);
  write_regression_json((out / "regression.json").string(), prov, names, fit,
                        dropped);
  write_text_file((out / "regression.txt").string(), prov,
                  regression_text_table(names, fit));
  return 0;
}

int run_decay(const RunConfig& cfg) {
  if (cfg.pci_a.empty()) throw ConfigError("decay needs --pci");
  if (cfg.registry.empty()) throw ConfigError("decay needs --registry");
  const fs::path out = ensure_out_dir(cfg);
  const std::string prov = run_provenance(cfg, "decay");
  const PlaceRegistry registry = PlaceRegistry::load(cfg.registry);
  const PlaceLevel level = cfg.parsed_level();

  std::vector<double> values, dists;
  std::size_t excluded = 0;
  read_pci_matrix(cfg.pci_a, [&](const PciRecord& r) {
    if (r.place_i == r.place_j) {
      ++excluded;
      return;
    }
    const Place* pi = registry.find(level, r.place_i);
    const Place* pj = registry.find(level, r.place_j);
    if (!pi || !pj) {
      throw DataError("matrix place missing from registry: " +
                      (pi ? r.place_j : r.place_i));
    }
    const double d = centroid_distance(*pi, *pj);
    if (!(r.pci > 0.0) || !(d > 0.0)) {
      ++excluded;  // zero distance or connectivity has no log
      return;
    }
    values.push_back(r.pci);
    dists.push_back(d);
  });
  const DecayFit fit = decay_fit(values, dists);
  write_decay_json((out / "decay.json").string(), prov, fit, values.size(),
                   excluded);
  return 0;
}

int run_export_geojson(const RunConfig& cfg) {
  if (cfg.registry.empty()) throw ConfigError("export-geojson needs --registry");
  if (cfg.assignment.empty() == cfg.values.empty()) {
    throw ConfigError("export-geojson needs exactly one of --assignment "
                      "or --values");
  }
  const fs::path out = ensure_out_dir(cfg);
  const std::string prov = run_provenance(cfg, "export-geojson");
  const PlaceRegistry registry = PlaceRegistry::load(cfg.registry);
  const PlaceLevel level = cfg.parsed_level();

  std::vector<GeoJsonEntry> entries;
  std::string property;
  std::string out_name;
  if (!cfg.assignment.empty()) {
    const CommunityAssignment a = read_assignment_csv(cfg.assignment);
    entries.reserve(a.places.size());
    for (std::size_t i = 0; i < a.places.size(); ++i) {
      entries.push_back({a.places[i], double(a.community[i]), true});
    }
    property = "community";
    out_name = "communities.geojson";
  } else {
    for (const auto& [place, v] : read_place_values_csv(cfg.values)) {
      entries.push_back({place, v, false});
    }
    property = "value";
    out_name = "values.geojson";
  }
  export_geojson((out / out_name).string(), prov, registry, level, entries,
                 property);
  return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path,
                  "Config file with key = value lines (flags win)");
  cmd->add_option("--level", cfg.level,
                  "Geographic level: country, admin1, county, metro, tract");
  cmd->add_option("--from", cfg.from, "Window start, YYYY-MM-DD inclusive");
  cmd->add_option("--to", cfg.to, "Window end, YYYY-MM-DD inclusive");
  cmd->add_option("--out", cfg.out, "Output directory");
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--spill", cfg.spill,
                  "In-memory records before spilling to disk");
  cmd->add_option("--scale", cfg.scale,
                  "Value scaling for logs and regressions");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;

  // The config file is applied before CLI11 assigns flag values, so any
  // flag the user passes overrides the file.
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config_path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      config_path = std::string(arg.substr(9));
    }
  }
  try {
    if (!config_path.empty()) apply_config_file(config_path, cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  CLI::App app{"place connectivity pipeline"};
  app.require_subcommand(1);

  auto* c_ingest = app.add_subcommand(
      "ingest", "Filter events into a deduplicated presence store");
  add_common_options(c_ingest, cfg, config_path);
  c_ingest->add_option("--registry", cfg.registry, "Place registry GeoJSON");
  c_ingest->add_option("--whitelist", cfg.whitelist, "Source whitelist file");
  c_ingest->add_option("events", cfg.events, "NDJSON event files");

  auto* c_pci = app.add_subcommand(
      "pci", "Compute the connectivity matrix from a presence store");
  add_common_options(c_pci, cfg, config_path);
  c_pci->add_option("--store", cfg.store, "Presence store CSV");
  c_pci->add_flag("--include-self", cfg.include_self,
                  "Emit (i,i) rows with pci 1");

  auto* c_movement = app.add_subcommand(
      "movement", "Person-day movement pairs, or third-party flow rollup");
  add_common_options(c_movement, cfg, config_path);
  c_movement->add_option("--store", cfg.store, "Presence store CSV");
  c_movement->add_option("--flows", cfg.flows,
                         "Directed flow CSV origin,destination,count,date");
  c_movement->add_option("--registry", cfg.registry, "Place registry GeoJSON");
  c_movement->add_option("--whitelist", cfg.whitelist,
                         "Source whitelist file");
  c_movement->add_flag("--transitions", cfg.transitions,
                       "Count consecutive within-day transitions instead of "
                       "all pairs");
  c_movement->add_option("events", cfg.events,
                         "NDJSON event files (for --transitions)");

  auto* c_cluster = app.add_subcommand(
      "cluster", "Average-linkage communities from a connectivity matrix");
  add_common_options(c_cluster, cfg, config_path);
  c_cluster->add_option("--pci", cfg.pci_a, "Connectivity matrix CSV");
  c_cluster->add_option("--k", cfg.k, "Number of communities");

  auto* c_correlate = app.add_subcommand(
      "correlate", "Log-log correlation between two pair-keyed datasets");
  add_common_options(c_correlate, cfg, config_path);
  c_correlate->add_option("--a,--pci", cfg.pci_a, "First pair file");
  c_correlate->add_option("--b,--pci-b", cfg.pci_b, "Second pair file");

  auto* c_regress = app.add_subcommand(
      "regress", "Linear model of connectivity or of a joined outcome");
  add_common_options(c_regress, cfg, config_path);
  c_regress->add_option("--pci", cfg.pci_a, "Connectivity matrix CSV");
  c_regress->add_option("--registry", cfg.registry, "Place registry GeoJSON");
  c_regress->add_option("--region-level", cfg.region_level,
                        "Level for the same-region dummy");
  c_regress->add_option("--focal", cfg.focal,
                        "Restrict to pairs containing this place");
  c_regress->add_option("--covariates", cfg.covariates,
                        "place,outcome[,covariate...] join file");

  auto* c_decay = app.add_subcommand(
      "decay", "Power-law distance decay fit over a connectivity matrix");
  add_common_options(c_decay, cfg, config_path);
  c_decay->add_option("--pci", cfg.pci_a, "Connectivity matrix CSV");
  c_decay->add_option("--registry", cfg.registry, "Place registry GeoJSON");

  auto* c_export = app.add_subcommand(
      "export-geojson", "Join communities or values onto place geometries");
  add_common_options(c_export, cfg, config_path);
  c_export->add_option("--registry", cfg.registry, "Place registry GeoJSON");
  c_export->add_option("--assignment", cfg.assignment,
                       "place,community CSV from cluster");
  c_export->add_option("--values", cfg.values, "place,value CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_ingest->parsed()) return run_ingest(cfg);
    if (c_pci->parsed()) return run_pci(cfg);
    if (c_movement->parsed()) return run_movement(cfg);
    if (c_cluster->parsed()) return run_cluster(cfg);
    if (c_correlate->parsed()) return run_correlate(cfg);
    if (c_regress->parsed()) return run_regress(cfg);
    if (c_decay->parsed()) return run_decay(cfg);
    if (c_export->parsed()) return run_export_geojson(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
