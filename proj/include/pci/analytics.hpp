#ifndef PCI_ANALYTICS_HPP
#define PCI_ANALYTICS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pci/place_registry.hpp"

namespace pci {

// Elementwise log10(scale * v). The scale keeps sub-unity indexes
// positive after the transform (1000 in the source analyses). Throws
// ConfigError for scale <= 0, DataError when any scaled value is not
// strictly positive.
std::vector<double> log10_scaled(const std::vector<double>& values,
                                 double scale);

// Product-moment correlation. Needs n >= 3 and nonzero variance on both
// sides (DataError otherwise).
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

struct OlsResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  Eigen::VectorXd t;
  Eigen::VectorXd p;  // two-sided, t-distribution with n - cols df
  double r2 = 0.0;
  double adj_r2 = 0.0;
  std::size_t n = 0;
  double rss = 0.0;
};

// Least squares of y on X (X carries its own intercept column when one
// is wanted). Solved by column-pivoted QR; classical standard errors.
// Throws DataError when X is rank deficient or n <= cols.
OlsResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X);

// 1 when both codes resolve to the same ancestor at region_level.
// Throws DataError when either code has no ancestor there.
std::vector<int> same_region_dummy(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const PlaceRegistry& registry, PlaceLevel region_level);

// Power-law fit value = a * dist^b via least squares on the log-log
// pair, with the R-squared of that linear fit. Constant values are
// reported as b = 0, R2 = 0, a = 10^mean(log10 value). Throws DataError
// on non-positive inputs or n < 3.
struct DecayFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
};

DecayFit decay_fit(const std::vector<double>& values,
                   const std::vector<double>& dist_miles);

// Conventional significance marks: *** under 0.01, ** under 0.05,
// * under 0.1.
std::string significance_stars(double p);

// One symmetric pair observation; place_i < place_j canonical.
struct PairValue {
  std::string place_i;
  std::string place_j;
  double value = 0.0;
};

struct PlaceCorrelation {
  std::string place;
  double r = 0.0;
  std::size_t n = 0;
};

struct OmittedPlace {
  std::string place;
  std::string reason;
};

struct CorrelationReport {
  double global_r = 0.0;
  std::size_t global_n = 0;
  std::size_t joined_pairs = 0;           // keys present in both inputs
  std::size_t excluded_nonpositive = 0;   // joined but dropped pre-log
  std::vector<PlaceCorrelation> per_place;  // sorted by place code
  std::vector<OmittedPlace> omitted;        // sorted by place code
};

// Joins two pair-keyed datasets on canonical keys, drops pairs where
// either value is non-positive, log-transforms both sides, and reports
// the overall correlation plus one correlation per focal place over its
// partners. Focal places with fewer than 3 usable partners, or with a
// degenerate series, are omitted with a reason instead of failing.
// Throws DataError when the global series itself is unusable.
CorrelationReport correlate_pairs(const std::vector<PairValue>& a,
                                  const std::vector<PairValue>& b,
                                  double scale_a, double scale_b);

// Aligned-text rendering of a fitted model in the conventional
// coefficient/SE/stars layout, plus adjusted R-squared and n.
std::string regression_text_table(const std::vector<std::string>& names,
                                  const OlsResult& fit);

}  // namespace pci

#endif
