#include "pci/exporters.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "pci/csv.hpp"
#include "pci/version.hpp"

namespace pci {

using ordered_json = nlohmann::ordered_json;

namespace {

void write_json_file(const std::string& path, std::string_view provenance,
                     const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << provenance << '\n' << doc.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace

void write_pci_matrix(const std::string& path, std::string_view provenance,
                      const std::vector<PciRecord>& records) {
  csv::Writer w(path, provenance, kPciMatrixHeader);
  for (const auto& r : records) w.write_line(format_pci_row(r));
  w.close();
}

void write_movement_csv(const std::string& path, std::string_view provenance,
                        const std::vector<OdMovement>& movements) {
  csv::Writer w(path, provenance, kMovementHeader);
  for (const auto& m : movements) {
    std::string row = csv::escape(m.place_i);
    row += ',';
    row += csv::escape(m.place_j);
    row += ',';
    row += std::to_string(m.person_days);
    w.write_line(row);
  }
  w.close();
}

void write_dendrogram_csv(const std::string& path,
                          std::string_view provenance,
                          const Dendrogram& dendro) {
  csv::Writer w(path, provenance,
                "merge_index,cluster_a,cluster_b,height,size");
  for (std::size_t i = 0; i < dendro.merges.size(); ++i) {
    const Merge& m = dendro.merges[i];
    std::string row = std::to_string(i);
    row += ',';
    row += std::to_string(m.cluster_a);
    row += ',';
    row += std::to_string(m.cluster_b);
    row += ',';
    row += format_value(m.height);
    row += ',';
    row += std::to_string(m.size);
    w.write_line(row);
  }
  w.close();
}

void write_assignment_csv(const std::string& path,
                          std::string_view provenance,
                          const CommunityAssignment& assignment) {
  csv::Writer w(path, provenance, "place,community");
  for (std::size_t i = 0; i < assignment.places.size(); ++i) {
    std::string row = csv::escape(assignment.places[i]);
    row += ',';
    row += std::to_string(assignment.community[i]);
    w.write_line(row);
  }
  w.close();
}

CommunityAssignment read_assignment_csv(const std::string& path) {
  CommunityAssignment out;
  csv::for_each_row(
      path,
      [&](const std::vector<std::string>& header) {
        if (header != std::vector<std::string>{"place", "community"}) {
          throw DataError(path + ": expected header place,community");
        }
      },
      [&](const std::vector<std::string>& row, std::size_t line) {
        if (row.size() != 2 || row[1].empty() ||
            row[1].find_first_not_of("0123456789") != std::string::npos) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": expected place,community-id");
        }
        out.places.push_back(row[0]);
        out.community.push_back(std::uint32_t(std::stoul(row[1])));
      });
  std::uint32_t max_id = 0;
  for (const auto c : out.community) max_id = std::max(max_id, c);
  out.k = out.community.empty() ? 0 : max_id + 1;
  return out;
}

void write_place_values_csv(
    const std::string& path, std::string_view provenance,
    const std::vector<std::pair<std::string, double>>& values) {
  csv::Writer w(path, provenance, "place,value");
  for (const auto& [place, v] : values) {
    std::string row = csv::escape(place);
    row += ',';
    row += format_value(v);
    w.write_line(row);
  }
  w.close();
}

std::vector<std::pair<std::string, double>> read_place_values_csv(
    const std::string& path) {
  std::vector<std::pair<std::string, double>> out;
  csv::for_each_row(
      path,
      [&](const std::vector<std::string>& header) {
        if (header != std::vector<std::string>{"place", "value"}) {
          throw DataError(path + ": expected header place,value");
        }
      },
      [&](const std::vector<std::string>& row, std::size_t line) {
        if (row.size() != 2) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": expected place,value");
        }
        try {
          out.emplace_back(row[0], std::stod(row[1]));
        } catch (const std::exception&) {
          throw DataError(path + ":" + std::to_string(line) +
                          ": malformed value");
        }
      });
  return out;
}

void export_geojson(const std::string& path, std::string_view provenance,
                    const PlaceRegistry& registry, PlaceLevel level,
                    const std::vector<GeoJsonEntry>& entries,
                    const std::string& property) {
  std::vector<GeoJsonEntry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const GeoJsonEntry& a, const GeoJsonEntry& b) {
              return a.code < b.code;
            });
  ordered_json features = ordered_json::array();
  for (const auto& e : sorted) {
    const Place* p = registry.find(level, e.code);
    if (!p) {
      throw DataError("place not in registry at the chosen level: " + e.code);
    }
    if (!p->has_geometry) {
      throw DataError("place has no geometry to export: " + e.code);
    }
    ordered_json f;
    f["type"] = "Feature";
    f["properties"]["code"] = p->code;
    f["properties"]["name"] = p->name;
    if (e.integral) {
      f["properties"][property] = std::int64_t(e.value);
    } else {
      f["properties"][property] = e.value;
    }
    f["geometry"] = ordered_json::parse(p->geometry_json);
    features.push_back(std::move(f));
  }
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  write_json_file(path, provenance, doc);
}

void write_correlation_json(const std::string& path,
                            std::string_view provenance,
                            const CorrelationReport& report) {
  ordered_json doc;
  doc["global"]["r"] = report.global_r;
  doc["global"]["n"] = report.global_n;
  doc["joined_pairs"] = report.joined_pairs;
  doc["excluded_nonpositive"] = report.excluded_nonpositive;
  doc["per_place"] = ordered_json::array();
  for (const auto& pc : report.per_place) {
    ordered_json j;
    j["place"] = pc.place;
    j["r"] = pc.r;
    j["n"] = pc.n;
    doc["per_place"].push_back(std::move(j));
  }
  doc["omitted"] = ordered_json::array();
  for (const auto& om : report.omitted) {
    ordered_json j;
    j["place"] = om.place;
    j["reason"] = om.reason;
    doc["omitted"].push_back(std::move(j));
  }
  write_json_file(path, provenance, doc);
}

void write_regression_json(const std::string& path,
                           std::string_view provenance,
                           const std::vector<std::string>& names,
                           const OlsResult& fit, std::size_t dropped_rows) {
  ordered_json doc;
  doc["coefficients"] = ordered_json::array();
  for (std::size_t j = 0; j < names.size(); ++j) {
    ordered_json c;
    c["name"] = names[j];
    c["beta"] = fit.beta[Eigen::Index(j)];
    c["se"] = fit.se[Eigen::Index(j)];
    c["t"] = fit.t[Eigen::Index(j)];
    c["p"] = fit.p[Eigen::Index(j)];
    c["stars"] = significance_stars(fit.p[Eigen::Index(j)]);
    doc["coefficients"].push_back(std::move(c));
  }
  doc["r2"] = fit.r2;
  doc["adjusted_r2"] = fit.adj_r2;
  doc["observations"] = fit.n;
  doc["dropped_rows"] = dropped_rows;
  write_json_file(path, provenance, doc);
}

void write_decay_json(const std::string& path, std::string_view provenance,
                      const DecayFit& fit, std::size_t n,
                      std::size_t excluded) {
  ordered_json doc;
  doc["a"] = fit.a;
  doc["b"] = fit.b;
  doc["r2"] = fit.r2;
  doc["n"] = n;
  doc["excluded_pairs"] = excluded;
  write_json_file(path, provenance, doc);
}

void write_text_file(const std::string& path, std::string_view provenance,
                     std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << provenance << '\n' << body;
  if (!body.empty() && body.back() != '\n') out << '\n';
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace pci
