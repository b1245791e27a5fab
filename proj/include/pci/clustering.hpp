#ifndef PCI_CLUSTERING_HPP
#define PCI_CLUSTERING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "pci/connectivity.hpp"

namespace pci {

// Dense pairwise distances over a fixed place list. Pairs absent from
// the sparse input sit at the sentinel dmax so they merge last.
struct DistanceMatrix {
  std::vector<std::string> places;  // sorted by code
  Eigen::MatrixXd d;                // symmetric, diagonal unused
  double dmax = 0.0;
};

// Inverts pci into distance (1/pci). Pairs not present in `matrix` get
// dmax = 10 x the largest finite distance (1.0 when there is none).
// Self rows are ignored. Throws DataError on a record naming a place
// outside `places` or carrying a non-positive pci.
DistanceMatrix pci_to_distance(const std::vector<PciRecord>& matrix,
                               std::vector<std::string> places);

// One agglomeration step. Leaves are clusters 0..n-1; the i-th merge
// creates cluster n+i from a < b at the given height (average-linkage
// distance) with `size` member leaves.
struct Merge {
  std::uint32_t cluster_a = 0;
  std::uint32_t cluster_b = 0;
  double height = 0.0;
  std::uint32_t new_cluster_id = 0;
  std::uint32_t size = 0;
};

struct Dendrogram {
  std::vector<std::string> places;  // leaf i corresponds to places[i]
  std::vector<Merge> merges;        // exactly places.size() - 1 entries
};

// Unweighted average linkage: the distance between merged clusters is
// the plain mean over all cross leaf pairs. The pair with the smallest
// (distance, id_a, id_b) merges first, so the sequence is total and
// reproducible. Throws DataError for fewer than two places.
Dendrogram agglomerate(const DistanceMatrix& dist);

struct CommunityAssignment {
  std::vector<std::string> places;       // sorted by code
  std::vector<std::uint32_t> community;  // aligned with places
  std::uint32_t k = 0;
};

// Stops the merge sequence at k clusters (drops the last k-1 merges).
// Community ids run 0..k-1 in order of each community's smallest member
// code. Throws ConfigError when k is outside [1, leaf count].
CommunityAssignment cut(const Dendrogram& dendro, std::uint32_t k);

}  // namespace pci

#endif
