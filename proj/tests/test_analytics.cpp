#include "pci/analytics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "pci/place_registry.hpp"
#include "support/oracles.hpp"
#include "support/subprocess.hpp"
#include "support/synth.hpp"

using namespace pci;
using doctest::Approx;

namespace {

// Cross-checked against a reference statistics stack: twelve rows of
// (intercept, x1, x2) with a strong linear signal and mild noise.
struct RefFit {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  RefFit() {
    const double x1[] = {2.0, 3.5, 1.0,  5.0, 4.25, 2.75,
                         0.5, 6.0, 3.0,  4.75, 1.5, 5.5};
    const double x2[] = {10.0, 8.0, 14.0, 3.0,  6.0, 9.5,
                         15.0, 2.0, 7.25, 5.0, 12.0, 4.0};
    const double yy[] = {11.2, 10.1, 13.9, 5.3, 7.8, 10.6,
                         15.2, 4.1,  9.4,  6.6, 12.8, 5.0};
    X.resize(12, 3);
    y.resize(12);
    for (int i = 0; i < 12; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = x1[i];
      X(i, 2) = x2[i];
      y[i] = yy[i];
    }
  }
};

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("log transform with index scaling") {
  const auto out = log10_scaled({0.001, 1.0, 100.0}, 1000.0);
  CHECK(out[0] == Approx(0.0));
  CHECK(out[1] == Approx(3.0));
  CHECK(out[2] == Approx(5.0));
  CHECK_THROWS_AS(log10_scaled({1.0}, 0.0), ConfigError);
  CHECK_THROWS_AS(log10_scaled({1.0}, -2.0), ConfigError);
  CHECK_THROWS_AS(log10_scaled({0.0}, 1000.0), DataError);
  CHECK_THROWS_AS(log10_scaled({1.0, -0.5}, 1000.0), DataError);
}

TEST_CASE("correlation matches the two-pass oracle") {
  synth::Rng rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) {
      const double v = rng.uniform() * 10.0;
      x.push_back(v);
      y.push_back(0.7 * v + rng.normal());
    }
    CHECK(pearson_r(x, y) ==
          Approx(oracle::pearson_two_pass(x, y)).epsilon(1e-13));
  }
}

TEST_CASE("correlation is invariant under positive affine maps") {
  std::vector<double> x = {1.0, 2.5, 3.1, 4.7, 5.2, 6.9, 8.0};
  std::vector<double> y = {2.2, 1.9, 3.8, 3.1, 5.5, 5.0, 7.1};
  const double base = pearson_r(x, y);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xs.push_back(3.5 * x[i] - 11.0);
    ys.push_back(0.02 * y[i] + 400.0);
  }
  CHECK(pearson_r(xs, ys) == Approx(base).epsilon(1e-12));
  // A sign flip on one side flips the correlation.
  for (auto& v : xs) v = -v;
  CHECK(pearson_r(xs, ys) == Approx(-base).epsilon(1e-12));
}

TEST_CASE("correlation input guards") {
  CHECK_THROWS_AS(pearson_r({1.0, 2.0}, {3.0, 4.0}), DataError);
  CHECK_THROWS_AS(pearson_r({1.0, 2.0, 3.0}, {3.0, 4.0}), DataError);
  CHECK_THROWS_AS(pearson_r({5.0, 5.0, 5.0}, {1.0, 2.0, 3.0}), DataError);
  CHECK_THROWS_AS(pearson_r({1.0, 2.0, 3.0}, {4.0, 4.0, 4.0}), DataError);
}

TEST_CASE("least squares against reference values") {
  const RefFit f;
  const auto fit = ols(f.y, f.X);
  REQUIRE(fit.beta.size() == 3);
  CHECK(fit.n == 12);

  CHECK(fit.beta[0] == Approx(8.5782474840037271).epsilon(1e-12));
  CHECK(fit.beta[1] == Approx(-0.90160337824078463).epsilon(1e-12));
  CHECK(fit.beta[2] == Approx(0.468927044146491).epsilon(1e-12));

  CHECK(fit.se[0] == Approx(2.3932213338673933).epsilon(1e-10));
  CHECK(fit.se[1] == Approx(0.35614696945530072).epsilon(1e-10));
  CHECK(fit.se[2] == Approx(0.15301974504150578).epsilon(1e-10));

  CHECK(fit.t[0] == Approx(3.5843937050909815).epsilon(1e-10));
  CHECK(fit.t[1] == Approx(-2.5315486458293255).epsilon(1e-10));
  CHECK(fit.t[2] == Approx(3.0644871615705349).epsilon(1e-10));

  CHECK(fit.p[0] == Approx(0.0058901580659296137).epsilon(1e-9));
  CHECK(fit.p[1] == Approx(0.03215356622260971).epsilon(1e-9));
  CHECK(fit.p[2] == Approx(0.013473520581678765).epsilon(1e-9));

  CHECK(fit.r2 == Approx(0.99034445630818424).epsilon(1e-12));
  CHECK(fit.adj_r2 == Approx(0.98819877993222516).epsilon(1e-12));
  CHECK(fit.rss == Approx(1.4022424252167689).epsilon(1e-10));
}

TEST_CASE("qr solution agrees with the normal equations") {
  synth::Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 40;
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = rng.uniform() * 4.0;
      X(i, 2) = rng.uniform() * 9.0 - 3.0;
      y[i] = 2.0 + 0.5 * X(i, 1) - 1.5 * X(i, 2) + rng.normal() * 0.3;
    }
    const auto fit = ols(y, X);
    const Eigen::VectorXd want = oracle::ols_normal_equations(y, X);
    for (int j = 0; j < 3; ++j)
      CHECK(fit.beta[j] == Approx(want[j]).epsilon(1e-10));
  }
}

TEST_CASE("degenerate designs are rejected") {
  Eigen::MatrixXd X(6, 3);
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = double(i);
    X(i, 2) = 2.0 * double(i);  // collinear with column 1
    y[i] = double(i * i);
  }
  CHECK_THROWS_WITH_AS(ols(y, X), doctest::Contains("rank deficient"),
                       DataError);

  Eigen::MatrixXd small = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd ysmall = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(ols(ysmall, small), DataError);
  Eigen::VectorXd wrong = Eigen::VectorXd::Ones(5);
  Eigen::MatrixXd tall = Eigen::MatrixXd::Random(6, 2);
  CHECK_THROWS_AS(ols(wrong, tall), DataError);
}

TEST_CASE("an exact fit reports zero standard errors sanely") {
  // All-zero response: every coefficient is exactly zero, so t pins to
  // 0 and p to 1.
  Eigen::MatrixXd X(5, 2);
  for (int i = 0; i < 5; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = double(i + 1);
  }
  const auto zfit = ols(Eigen::VectorXd::Zero(5), X);
  for (int j = 0; j < 2; ++j) {
    CHECK(zfit.se[j] == 0.0);
    CHECK(zfit.t[j] == 0.0);
    CHECK(zfit.p[j] == 1.0);
  }
  CHECK(zfit.rss == 0.0);
  CHECK(zfit.r2 == 0.0);  // no variance to explain

  // A single axis-aligned column fits y = 3x without any rounding, so
  // the residual is identically zero and the slope is infinitely
  // significant.
  Eigen::MatrixXd col(3, 1);
  col << 2.0, 0.0, 0.0;
  Eigen::VectorXd target(3);
  target << 6.0, 0.0, 0.0;
  const auto xfit = ols(target, col);
  CHECK(xfit.beta[0] == 3.0);
  CHECK(xfit.se[0] == 0.0);
  CHECK(std::isinf(xfit.t[0]));
  CHECK(xfit.t[0] > 0.0);
  CHECK(xfit.p[0] == 0.0);
}

TEST_CASE("same-region indicator walks the hierarchy") {
  const auto dir = testutil::make_temp_dir("regdummy");
  const auto path = dir + "/places.json";
  synth::write_file(path, synth::grid_registry_json(synth::GridSpec{}));
  const auto reg = PlaceRegistry::load(path);

  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"S0C0", "S0C3"},  // same column strip
      {"S0C0", "S1C0"},  // neighbours across the strip border
      {"S2C1", "S2C1"},  // identical place
      {"S3", "S3C2"},    // region code paired with one of its counties
  };
  const auto dummy = same_region_dummy(pairs, reg, PlaceLevel::admin1);
  CHECK(dummy == std::vector<int>{1, 0, 1, 1});

  CHECK_THROWS_WITH_AS(
      same_region_dummy({{"XX", "S0C0"}}, reg, PlaceLevel::admin1),
      doctest::Contains("no ancestor"), DataError);
}

TEST_CASE("power-law decay recovery") {
  const double a = 3.2;
  const double b = -1.2;
  std::vector<double> dist = {10.0, 25.0, 50.0, 120.0, 400.0, 1500.0};
  std::vector<double> vals;
  for (const double d : dist) vals.push_back(a * std::pow(d, b));

  const auto fit = decay_fit(vals, dist);
  CHECK(fit.b == Approx(b).epsilon(1e-9));
  CHECK(fit.a == Approx(a).epsilon(1e-9));
  CHECK(fit.r2 == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("decay guards and the flat special case") {
  const auto flat = decay_fit({4.0, 4.0, 4.0}, {10.0, 20.0, 30.0});
  CHECK(flat.b == 0.0);
  CHECK(flat.r2 == 0.0);
  CHECK(flat.a == Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(decay_fit({1.0, 2.0}, {1.0, 2.0}), DataError);
  CHECK_THROWS_AS(decay_fit({1.0, -2.0, 3.0}, {1.0, 2.0, 3.0}), DataError);
  CHECK_THROWS_AS(decay_fit({1.0, 2.0, 3.0}, {1.0, 0.0, 3.0}), DataError);
  CHECK_THROWS_AS(decay_fit({1.0, 2.0, 3.0}, {1.0, 2.0}), DataError);
}

TEST_CASE("significance marks") {
  CHECK(significance_stars(0.009) == "***");
  CHECK(significance_stars(0.01) == "**");
  CHECK(significance_stars(0.04) == "**");
  CHECK(significance_stars(0.05) == "*");
  CHECK(significance_stars(0.09) == "*");
  CHECK(significance_stars(0.1) == "");
  CHECK(significance_stars(0.2) == "");
}

TEST_CASE("pair correlation report") {
  const auto pv = [](const char* i, const char* j, double v) {
    PairValue p;
    p.place_i = i;
    p.place_j = j;
    p.value = v;
    return p;
  };
  const std::vector<PairValue> a = {
      pv("A", "B", 10.0), pv("C", "A", 20.0), pv("A", "D", 5.0),
      pv("B", "C", 8.0),  pv("B", "D", 0.5),  pv("C", "D", 2.0),
      pv("A", "E", 9.0),  // no partner row on the other side
  };
  const std::vector<PairValue> b = {
      pv("A", "B", 100.0), pv("A", "C", 150.0), pv("A", "D", 30.0),
      pv("C", "B", 40.0),  pv("B", "D", -1.0),  pv("C", "D", 10.0),
      pv("C", "F", 3.0),
  };

  const auto rep = correlate_pairs(a, b, 1.0, 1.0);
  CHECK(rep.joined_pairs == 6);
  CHECK(rep.excluded_nonpositive == 1);  // (B, D) carries a negative
  CHECK(rep.global_n == 5);

  // Recompute the global correlation over the five surviving pairs.
  std::vector<double> gx, gy;
  for (const auto& [va, vb] :
       std::vector<std::pair<double, double>>{{10, 100},
                                              {20, 150},
                                              {5, 30},
                                              {8, 40},
                                              {2, 10}}) {
    gx.push_back(std::log10(va));
    gy.push_back(std::log10(vb));
  }
  CHECK(rep.global_r ==
        Approx(oracle::pearson_two_pass(gx, gy)).epsilon(1e-12));

  // A and C keep three usable partners each; B and D fall to two.
  REQUIRE(rep.per_place.size() == 2);
  CHECK(rep.per_place[0].place == "A");
  CHECK(rep.per_place[0].n == 3);
  CHECK(rep.per_place[1].place == "C");
  CHECK(rep.per_place[1].n == 3);
  REQUIRE(rep.omitted.size() == 2);
  CHECK(rep.omitted[0].place == "B");
  CHECK(rep.omitted[0].reason == "fewer than 3 usable partners");
  CHECK(rep.omitted[1].place == "D");
}

TEST_CASE("a constant focal series is omitted, not fatal") {
  const auto pv = [](const char* i, const char* j, double v) {
    PairValue p;
    p.place_i = i;
    p.place_j = j;
    p.value = v;
    return p;
  };
  // Z's side-a values never move, so its per-place correlation is
  // undefined while the global fit is still fine.
  const std::vector<PairValue> a = {
      pv("Z", "P", 4.0), pv("Z", "Q", 4.0), pv("Z", "R", 4.0),
      pv("P", "Q", 2.0), pv("P", "R", 6.0), pv("Q", "R", 3.0),
  };
  const std::vector<PairValue> b = {
      pv("Z", "P", 7.0),  pv("Z", "Q", 8.0),  pv("Z", "R", 9.0),
      pv("P", "Q", 5.0),  pv("P", "R", 11.0), pv("Q", "R", 13.0),
  };
  const auto rep = correlate_pairs(a, b, 1.0, 1.0);
  CHECK(rep.global_n == 6);
  REQUIRE(rep.omitted.size() == 1);
  CHECK(rep.omitted[0].place == "Z");
  CHECK(rep.omitted[0].reason == "zero variance across partners");
  CHECK(rep.per_place.size() == 3);

  // Two joined pairs cannot support a correlation at all.
  CHECK_THROWS_AS(
      correlate_pairs({pv("A", "B", 1.0), pv("A", "C", 2.0)},
                      {pv("A", "B", 3.0), pv("A", "C", 4.0)}, 1.0, 1.0),
      DataError);
}

TEST_CASE("text table layout") {
  const RefFit f;
  const auto fit = ols(f.y, f.X);
  const auto table = regression_text_table(
      {"intercept", "same_state", "log10 distance"}, fit);

  CHECK(table.find("intercept") != std::string::npos);
  CHECK(table.find("same_state") != std::string::npos);
  CHECK(table.find("log10 distance") != std::string::npos);
  CHECK(table.find("***") != std::string::npos);  // intercept p < 0.01
  CHECK(table.find("adjusted R2") != std::string::npos);
  CHECK(table.find("observations") != std::string::npos);
  CHECK(table.find("0.9882") != std::string::npos);
  CHECK(table.find("12") != std::string::npos);

  CHECK_THROWS_AS(regression_text_table({"only one name"}, fit),
                  ConfigError);
}

}  // TEST_SUITE
