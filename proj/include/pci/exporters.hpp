#ifndef PCI_EXPORTERS_HPP
#define PCI_EXPORTERS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "pci/analytics.hpp"
#include "pci/clustering.hpp"
#include "pci/connectivity.hpp"
#include "pci/movement.hpp"

namespace pci {

// Every writer puts the provenance line first, then a header, then rows.

void write_pci_matrix(const std::string& path, std::string_view provenance,
                      const std::vector<PciRecord>& records);

void write_movement_csv(const std::string& path, std::string_view provenance,
                        const std::vector<OdMovement>& movements);

// merge_index,cluster_a,cluster_b,height,size with 0-based merge ids.
void write_dendrogram_csv(const std::string& path,
                          std::string_view provenance,
                          const Dendrogram& dendro);

// place,community rows sorted by place.
void write_assignment_csv(const std::string& path,
                          std::string_view provenance,
                          const CommunityAssignment& assignment);

// Reads a place,community file back (for export-geojson).
CommunityAssignment read_assignment_csv(const std::string& path);

// Generic place,value file, one row per place, sorted.
void write_place_values_csv(
    const std::string& path, std::string_view provenance,
    const std::vector<std::pair<std::string, double>>& values);

std::vector<std::pair<std::string, double>> read_place_values_csv(
    const std::string& path);

// FeatureCollection with one feature per entry, sorted by code, each
// carrying the entry's payload under `property` plus code and name.
// Geometry is the registry's original shape. Throws DataError when a
// keyed place is missing from the level or has no geometry.
struct GeoJsonEntry {
  std::string code;
  double value = 0.0;
  bool integral = false;  // write as integer (community ids)
};

void export_geojson(const std::string& path, std::string_view provenance,
                    const PlaceRegistry& registry, PlaceLevel level,
                    const std::vector<GeoJsonEntry>& entries,
                    const std::string& property);

// correlation/regression/decay reports as pretty-printed JSON behind the
// provenance line.
void write_correlation_json(const std::string& path,
                            std::string_view provenance,
                            const CorrelationReport& report);

void write_regression_json(const std::string& path,
                           std::string_view provenance,
                           const std::vector<std::string>& names,
                           const OlsResult& fit,
                           std::size_t dropped_rows);

void write_decay_json(const std::string& path, std::string_view provenance,
                      const DecayFit& fit, std::size_t n,
                      std::size_t excluded);

void write_text_file(const std::string& path, std::string_view provenance,
                     std::string_view body);

}  // namespace pci

#endif
