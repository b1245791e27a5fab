#include "pci/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <unordered_map>

#include "pci/types.hpp"

namespace pci {

namespace {

// Regularized incomplete beta I_x(a, b) by the modified Lentz continued
// fraction, with the usual symmetry switch for convergence. Plenty for
// p-values; agrees with reference tables to ~1e-12.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// Two-sided p for a t statistic with df degrees of freedom:
// P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t));
}

}  // namespace

std::vector<double> log10_scaled(const std::vector<double>& values,
                                 double scale) {
  if (!(scale > 0.0)) {
    throw ConfigError("log scale must be positive");
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    const double s = v * scale;
    if (!(s > 0.0)) {
      throw DataError("log transform needs strictly positive values");
    }
    out.push_back(std::log10(s));
  }
  return out;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw DataError("correlation series lengths differ");
  }
  if (x.size() < 3) {
    throw DataError("correlation needs at least 3 observations");
  }
  const Eigen::Map<const Eigen::VectorXd> vx(x.data(), x.size());
  const Eigen::Map<const Eigen::VectorXd> vy(y.data(), y.size());
  const Eigen::VectorXd cx = vx.array() - vx.mean();
  const Eigen::VectorXd cy = vy.array() - vy.mean();
  const double sx = cx.squaredNorm();
  const double sy = cy.squaredNorm();
  if (sx == 0.0 || sy == 0.0) {
    throw DataError("correlation undefined for a zero-variance series");
  }
  return cx.dot(cy) / std::sqrt(sx * sy);
}

OlsResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  const std::size_t n = std::size_t(X.rows());
  const std::size_t cols = std::size_t(X.cols());
  if (std::size_t(y.size()) != n) {
    throw DataError("response and design row counts differ");
  }
  if (n <= cols) {
    throw DataError("regression needs more observations than coefficients");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (std::size_t(qr.rank()) < cols) {
    throw DataError("design matrix is rank deficient");
  }

  OlsResult out;
  out.n = n;
  out.beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * out.beta;
  out.rss = resid.squaredNorm();
  const double tss = (y.array() - y.mean()).matrix().squaredNorm();
  // Degenerate response: no variance to explain.
  out.r2 = tss > 0.0 ? 1.0 - out.rss / tss : 0.0;
  const double df = double(n - cols);
  // With an intercept column, cols - 1 substantive predictors.
  out.adj_r2 = 1.0 - (1.0 - out.r2) * double(n - 1) / df;

  // (X'X)^-1 from the pivoted factorization: X P = Q R, so
  // (X'X)^-1 = P R^-1 R^-T P'.
  const Eigen::MatrixXd r_upper =
      qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r_upper.triangularView<Eigen::Upper>().solve(
          Eigen::MatrixXd::Identity(cols, cols));
  const Eigen::MatrixXd xtx_inv_perm = rinv * rinv.transpose();
  const Eigen::MatrixXd perm = qr.colsPermutation();
  const Eigen::MatrixXd xtx_inv = perm * xtx_inv_perm * perm.transpose();

  const double sigma2 = out.rss / df;
  out.se.resize(cols);
  out.t.resize(cols);
  out.p.resize(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    out.se[j] = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
    if (out.se[j] == 0.0) {
      // Exact fit: a nonzero coefficient is infinitely many of its zero
      // standard errors away from zero.
      out.t[j] = out.beta[j] == 0.0
                     ? 0.0
                     : std::copysign(
                           std::numeric_limits<double>::infinity(),
                           out.beta[j]);
      out.p[j] = out.beta[j] == 0.0 ? 1.0 : 0.0;
    } else {
      out.t[j] = out.beta[j] / out.se[j];
      out.p[j] = t_two_sided_p(out.t[j], df);
    }
  }
  return out;
}

std::vector<int> same_region_dummy(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const PlaceRegistry& registry, PlaceLevel region_level) {
  std::vector<int> out;
  out.reserve(pairs.size());
  // Memoize code -> region; pair lists repeat codes heavily.
  std::unordered_map<std::string, const Place*> region;
  const auto lookup = [&](const std::string& code) {
    const auto it = region.find(code);
    if (it != region.end()) return it->second;
    const Place* p = registry.resolve_code(code, region_level);
    if (!p) {
      throw DataError("no ancestor at the region level for place: " + code);
    }
    region.emplace(code, p);
    return p;
  };
  for (const auto& [ci, cj] : pairs) {
    out.push_back(lookup(ci) == lookup(cj) ? 1 : 0);
  }
  return out;
}

DecayFit decay_fit(const std::vector<double>& values,
                   const std::vector<double>& dist_miles) {
  if (values.size() != dist_miles.size()) {
    throw DataError("value and distance series lengths differ");
  }
  if (values.size() < 3) {
    throw DataError("decay fit needs at least 3 observations");
  }
  const std::vector<double> ly = log10_scaled(values, 1.0);
  const std::vector<double> lx = log10_scaled(dist_miles, 1.0);
  const Eigen::Map<const Eigen::VectorXd> vy(ly.data(), ly.size());
  const Eigen::Map<const Eigen::VectorXd> vx(lx.data(), lx.size());

  DecayFit fit;
  const double ybar = vy.mean();
  if ((vy.array() - ybar).matrix().squaredNorm() == 0.0) {
    // Flat response: nothing decays, nothing is explained.
    fit.a = std::pow(10.0, ybar);
    fit.b = 0.0;
    fit.r2 = 0.0;
    return fit;
  }
  Eigen::MatrixXd X(vx.size(), 2);
  X.col(0).setOnes();
  X.col(1) = vx;
  const OlsResult r = ols(vy, X);
  fit.a = std::pow(10.0, r.beta[0]);
  fit.b = r.beta[1];
  fit.r2 = r.r2;
  return fit;
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

CorrelationReport correlate_pairs(const std::vector<PairValue>& a,
                                  const std::vector<PairValue>& b,
                                  double scale_a, double scale_b) {
  const auto canon = [](const PairValue& v) {
    return v.place_i <= v.place_j ? std::make_pair(v.place_i, v.place_j)
                                  : std::make_pair(v.place_j, v.place_i);
  };
  std::map<std::pair<std::string, std::string>, double> bmap;
  for (const auto& v : b) bmap[canon(v)] = v.value;

  // Joined, positive, log-transformed observations; each pair feeds the
  // global series and both focal places.
  struct Obs {
    double x;
    double y;
  };
  std::map<std::string, std::vector<Obs>> by_place;
  std::vector<double> gx, gy;
  CorrelationReport rep;
  for (const auto& v : a) {
    const auto key = canon(v);
    if (key.first == key.second) continue;  // self pairs carry no signal
    const auto it = bmap.find(key);
    if (it == bmap.end()) continue;
    ++rep.joined_pairs;
    if (!(v.value * scale_a > 0.0) || !(it->second * scale_b > 0.0)) {
      ++rep.excluded_nonpositive;
      continue;
    }
    const double x = std::log10(v.value * scale_a);
    const double y = std::log10(it->second * scale_b);
    gx.push_back(x);
    gy.push_back(y);
    by_place[key.first].push_back({x, y});
    by_place[key.second].push_back({x, y});
  }
  rep.global_n = gx.size();
  rep.global_r = pearson_r(gx, gy);  // throws when the join is too thin

  for (auto& [place, obs] : by_place) {
    if (obs.size() < 3) {
      rep.omitted.push_back({place, "fewer than 3 usable partners"});
      continue;
    }
    std::vector<double> xs, ys;
    xs.reserve(obs.size());
    ys.reserve(obs.size());
    for (const auto& o : obs) {
      xs.push_back(o.x);
      ys.push_back(o.y);
    }
    try {
      rep.per_place.push_back({place, pearson_r(xs, ys), obs.size()});
    } catch (const DataError&) {
      rep.omitted.push_back({place, "zero variance across partners"});
    }
  }
  return rep;  // std::map iteration already sorted both lists by place
}

std::string regression_text_table(const std::vector<std::string>& names,
                                  const OlsResult& fit) {
  if (names.size() != std::size_t(fit.beta.size())) {
    throw ConfigError("coefficient name count does not match fit");
  }
  std::size_t name_w = 12;
  for (const auto& n : names) name_w = std::max(name_w, n.size());

  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-*s  %12s %12s %6s\n", int(name_w),
                "", "coef", "se", "sig");
  out += line;
  for (std::size_t j = 0; j < names.size(); ++j) {
    std::snprintf(line, sizeof(line), "%-*s  %12.6g %12.6g %6s\n",
                  int(name_w), names[j].c_str(), fit.beta[j], fit.se[j],
                  significance_stars(fit.p[j]).c_str());
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-*s  %12.4f\n", int(name_w),
                "adjusted R2", fit.adj_r2);
  out += line;
  std::snprintf(line, sizeof(line), "%-*s  %12zu\n", int(name_w),
                "observations", fit.n);
  out += line;
  return out;
}

}  // namespace pci
