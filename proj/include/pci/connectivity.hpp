#ifndef PCI_CONNECTIVITY_HPP
#define PCI_CONNECTIVITY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pci/presence.hpp"

namespace pci {

// Symmetric index: shared / sqrt(users_i * users_j). 0 when no user is
// shared, 1 at full overlap of equal populations. Throws DataError when
// a population is zero or shared exceeds one.
double pci_value(std::uint64_t shared, std::uint64_t users_i,
                 std::uint64_t users_j);

// Asymmetric pair: (impact of i on j, impact of j on i), i.e.
// (shared/users_i, shared/users_j). The smaller place exerts the larger
// per-capita impact. Same preconditions as pci_value.
std::pair<double, double> directional_pci(std::uint64_t shared,
                                          std::uint64_t users_i,
                                          std::uint64_t users_j);

// Banker's rounding to 3 decimals, for comparisons against published
// tables.
double round3_even(double v);

// Serialization used in matrix CSVs: 6 significant digits.
std::string format_value(double v);

struct PciRecord {
  std::string place_i;
  std::string place_j;
  std::uint64_t users_i = 0;
  std::uint64_t users_j = 0;
  std::uint64_t shared = 0;
  double pci = 0.0;
  double pci_i_to_j = 0.0;
  double pci_j_to_i = 0.0;
};

// Joins shared counts with per-place user counts into full records,
// sorted by (place_i, place_j). include_self adds the trivial (i,i)
// rows for every counted place. Throws DataError when a pair references
// a place with no count record.
std::vector<PciRecord> build_matrix(const std::vector<SharedUserCount>& shared,
                                    const std::vector<PlaceUserCount>& counts,
                                    bool include_self = false);

inline const char* kPciMatrixHeader =
    "place_i,place_j,users_i,users_j,shared_users,pci,pci_i_to_j,pci_j_to_i";

// One matrix CSV row in the canonical field order.
std::string format_pci_row(const PciRecord& r);

// Reads a matrix CSV produced by this tool (or anything with the same
// header). fn sees each record in file order.
void read_pci_matrix(const std::string& path,
                     const std::function<void(const PciRecord&)>& fn);

}  // namespace pci

#endif
