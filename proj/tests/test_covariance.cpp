// Copyright 2026 the covtest authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "covtest/covariance.hpp"
#include "covtest/io.hpp"

using covtest::CovarianceKind;
using covtest::CovarianceModel;
using covtest::ObservationWindow;
using covtest::QuadratureSpec;
using covtest::TableEntry;

namespace {

// Test-side oracle: dense trapezoid rule, independent of the library's
// Simpson path.
template <class F>
double trapezoid_oracle(F&& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double acc = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) acc += f(lo + h * i);
  return acc * h;
}

CovarianceModel constant_table(double value, double support) {
  return CovarianceModel::tabulated({{0.0, value}, {support, value}});
}

}  // namespace

TEST_CASE("eval_rho analytic kinds") {
  const auto exp_unit = CovarianceModel::exponential(1.0, 1.0);
  CHECK(covtest::eval_rho(exp_unit, 0.0) == 1.0);

  const auto exp_scaled = CovarianceModel::exponential(2.0, 0.5);
  CHECK(covtest::eval_rho(exp_scaled, -2.0) ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));

  const auto sq = CovarianceModel::squared_exponential(1.0, 1.0);
  CHECK(covtest::eval_rho(sq, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(covtest::eval_rho(sq, -1.5) == covtest::eval_rho(sq, 1.5));
}

TEST_CASE("eval_rho tabulated interpolation") {
  const auto model =
      CovarianceModel::tabulated({{0.0, 2.0}, {1.0, 1.0}, {3.0, 0.0}});
  CHECK(covtest::eval_rho(model, 0.0) == 2.0);
  CHECK(covtest::eval_rho(model, 0.5) == doctest::Approx(1.5));
  CHECK(covtest::eval_rho(model, 1.0) == 1.0);
  CHECK(covtest::eval_rho(model, 2.0) == doctest::Approx(0.5));
  CHECK(covtest::eval_rho(model, 3.0) == 0.0);
  CHECK(covtest::eval_rho(model, 3.5) == 0.0);   // zero extension
  CHECK(covtest::eval_rho(model, -2.0) == covtest::eval_rho(model, 2.0));
}

TEST_CASE("model validation errors") {
  CHECK_THROWS_AS(CovarianceModel::exponential(0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(CovarianceModel::exponential(1.0, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(CovarianceModel::tabulated({}), std::invalid_argument);
  CHECK_THROWS_AS(CovarianceModel::tabulated({{0.5, 1.0}, {1.0, 0.5}}),
                  std::invalid_argument);  // lags must start at 0
  CHECK_THROWS_AS(CovarianceModel::tabulated({{0.0, 1.0}, {1.0, 1.5}}),
                  std::invalid_argument);  // |rho| > rho(0)
  CHECK_THROWS_AS(CovarianceModel::tabulated({{0.0, 1.0}, {1.0, 0.5}, {1.0, 0.2}}),
                  std::invalid_argument);  // non-increasing lags

  CovarianceModel raw;
  raw.kind = CovarianceKind::Tabulated;
  CHECK_THROWS_AS(covtest::eval_rho(raw, 0.3), std::invalid_argument);
}

TEST_CASE("observation window validation") {
  ObservationWindow good{100.0, 2.0, 0.05};
  CHECK_NOTHROW(good.validate());
  CHECK(good.length_steps() == 2000);
  CHECK(good.lag_steps() == 40);
  CHECK(good.path_points() == 2041);

  CHECK_THROWS_AS((ObservationWindow{0.0, 2.0, 0.05}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((ObservationWindow{100.0, 2.0, 0.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((ObservationWindow{100.0, 0.5, 0.7}).validate(),
                  std::invalid_argument);  // dt > min(T, A)
  CHECK_THROWS_AS((ObservationWindow{100.0, 2.0, 0.3}).validate(),
                  std::invalid_argument);  // T/dt not integral
  CHECK_THROWS_AS((ObservationWindow{99.0, 2.5, 1.0}).validate(),
                  std::invalid_argument);  // A/dt not integral
}

TEST_CASE("variance of the correlogram: constant model gives 2 B^2") {
  // rho == B on any evaluated lag: the u-integral collapses to T^2/2 * 2B^2.
  for (double value : {0.5, 1.0, 3.0}) {
    const auto model = constant_table(value, 100.0);
    for (double length : {1.0, 4.0, 10.0}) {
      for (double tau : {0.0, 0.5, 2.0}) {
        CHECK(covtest::correlogram_variance(model, length, tau) ==
              doctest::Approx(2.0 * value * value).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("variance of the correlogram: frozen references") {
  const QuadratureSpec analytic;
  QuadratureSpec forced;
  forced.force_inner_quadrature = true;

  struct Case {
    CovarianceModel model;
    double length, tau, expected;
  };
  // expected values from an independent arbitrary-precision quadrature
  const std::vector<Case> cases = {
      {CovarianceModel::exponential(1.0, 1.0), 1.0, 0.0,
       1.1353352832366127},  // equals 1 + e^-2
      {CovarianceModel::exponential(1.0, 1.0), 2.0, 3.0,
       0.37976820703775813},  // lag beyond the window
      {CovarianceModel::exponential(2.0, 0.5), 5.0, 1.25,
       2.0378199018217147},
      {CovarianceModel::squared_exponential(1.0, 1.0), 2.0, 0.7,
       0.68993761340711361},
      {CovarianceModel::squared_exponential(1.5, 0.5), 4.0, 2.0,
       0.87206544376068830},
  };
  for (const auto& c : cases) {
    CAPTURE(c.length);
    CAPTURE(c.tau);
    CHECK(covtest::correlogram_variance(c.model, c.length, c.tau, analytic) ==
          doctest::Approx(c.expected).epsilon(1e-12));
    CHECK(covtest::correlogram_variance(c.model, c.length, c.tau, forced) ==
          doctest::Approx(c.expected).epsilon(1e-8));
  }
}

TEST_CASE("closed-form and quadrature variance paths agree") {
  QuadratureSpec forced;
  forced.force_inner_quadrature = true;
  for (double variance : {0.5, 1.0, 2.0}) {
    for (double decay : {0.5, 1.0, 2.0}) {
      for (double length : {2.0, 10.0, 50.0}) {
        for (double tau : {0.0, 0.35, 1.0, 2.5}) {
          const auto exp_model =
              CovarianceModel::exponential(variance, decay);
          const auto sq_model =
              CovarianceModel::squared_exponential(variance, decay);
          CAPTURE(variance);
          CAPTURE(decay);
          CAPTURE(length);
          CAPTURE(tau);
          CHECK(covtest::correlogram_variance(exp_model, length, tau) ==
                doctest::Approx(covtest::correlogram_variance(
                                    exp_model, length, tau, forced))
                    .epsilon(1e-8));
          CHECK(covtest::correlogram_variance(sq_model, length, tau) ==
                doctest::Approx(covtest::correlogram_variance(
                                    sq_model, length, tau, forced))
                    .epsilon(1e-8));
        }
      }
    }
  }
}

TEST_CASE("variance survives a nearly flat exponential model") {
  // a*T small: the process is almost constant and the variance approaches
  // the 2 B^2 plateau; the closed form would cancel catastrophically here
  for (double decay : {1e-6, 1e-9}) {
    const auto model = CovarianceModel::exponential(1.0, decay);
    for (double tau : {0.0, 1.0}) {
      CHECK(covtest::correlogram_variance(model, 10.0, tau) ==
            doctest::Approx(2.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("variance at zero lag doubles the direct term") {
  const double length = 7.0;
  const std::vector<CovarianceModel> models = {
      CovarianceModel::exponential(1.3, 0.8),
      CovarianceModel::squared_exponential(0.9, 1.7),
      CovarianceModel::tabulated({{0.0, 1.0}, {0.5, 0.6}, {1.5, 0.1}, {2.0, 0.0}}),
  };
  for (const auto& model : models) {
    auto direct = [&](double u) {
      const double r = covtest::eval_rho(model, u);
      return (length - u) * r * r;
    };
    const double expected =
        4.0 / (length * length) * trapezoid_oracle(direct, 0.0, length, 200000);
    CHECK(covtest::correlogram_variance(model, length, 0.0) ==
          doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("cross term vanishes for compactly supported tables at large lag") {
  const auto model =
      CovarianceModel::tabulated({{0.0, 1.0}, {0.5, 0.4}, {1.0, 0.0}});
  const double length = 4.0;
  const double tau = 10.0;  // u + tau and tau - u both beyond the support
  auto direct = [&](double u) {
    const double r = covtest::eval_rho(model, u);
    return (length - u) * r * r;
  };
  const double expected =
      2.0 / (length * length) * trapezoid_oracle(direct, 0.0, length, 200000);
  CHECK(covtest::correlogram_variance(model, length, tau) ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("variance stays inside [0, 4 rho(0)^2]") {
  const std::vector<CovarianceModel> models = {
      CovarianceModel::exponential(1.0, 1.0),
      CovarianceModel::squared_exponential(2.0, 0.3),
      CovarianceModel::tabulated({{0.0, 0.8}, {1.0, 0.5}, {2.0, 0.0}}),
  };
  for (const auto& model : models) {
    const double cap = 4.0 * model.peak() * model.peak();
    for (double length : {0.5, 2.0, 20.0}) {
      for (double tau : {0.0, 0.7, 3.0, 30.0}) {
        const double value =
            covtest::correlogram_variance(model, length, tau);
        CHECK(value >= 0.0);
        CHECK(value <= cap * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("tail constant: constant model and p = 2 reduction") {
  const auto model = constant_table(1.5, 100.0);
  // integrand is the constant 2 B^2, so the integral is A * 2 B^2
  CHECK(covtest::lp_tail_constant(model, 10.0, 3.0, 2.0) ==
        doctest::Approx(3.0 * 2.0 * 1.5 * 1.5).epsilon(1e-12));

  // p = 2 integrates the variance itself
  const auto exp_model = CovarianceModel::exponential(1.0, 1.0);
  auto variance = [&](double tau) {
    return covtest::correlogram_variance(exp_model, 25.0, tau);
  };
  const double oracle = trapezoid_oracle(variance, 0.0, 2.0, 100000);
  CHECK(covtest::lp_tail_constant(exp_model, 25.0, 2.0, 2.0) ==
        doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("tail constant: frozen references") {
  // independent arbitrary-precision nested quadrature
  CHECK(covtest::lp_tail_constant(CovarianceModel::exponential(1.0, 1.0),
                                  100.0, 1.0, 2.0) ==
        doctest::Approx(0.017198744773995984).epsilon(1e-9));
  CHECK(covtest::lp_tail_constant(CovarianceModel::exponential(1.0, 1.0),
                                  100.0, 2.0, 2.0) ==
        doctest::Approx(0.029284230761810123).epsilon(1e-9));
  CHECK(covtest::lp_tail_constant(CovarianceModel::exponential(1.0, 1.0),
                                  10.0, 2.0, 3.0) ==
        doctest::Approx(0.10518416400823453).epsilon(1e-9));
  CHECK(covtest::lp_tail_constant(
            CovarianceModel::squared_exponential(1.0, 1.0), 10.0, 2.0, 3.0) ==
        doctest::Approx(0.12892501951379779).epsilon(1e-9));
}

TEST_CASE("tail constant is monotone in the lag horizon") {
  const auto model = CovarianceModel::exponential(1.0, 1.0);
  double previous = 0.0;
  for (double max_lag : {0.5, 1.0, 2.0, 5.0}) {
    const double value = covtest::lp_tail_constant(model, 50.0, max_lag, 3.0);
    CHECK(value > previous);
    previous = value;
  }
}

TEST_CASE("tail constant converges under quadrature refinement") {
  for (const auto& model : {CovarianceModel::exponential(1.0, 2.0),
                            CovarianceModel::squared_exponential(1.0, 0.5)}) {
    QuadratureSpec coarse;
    QuadratureSpec fine;
    fine.outer_intervals = 2 * coarse.outer_intervals;
    const double c = covtest::lp_tail_constant(model, 50.0, 2.0, 3.0, coarse);
    const double f = covtest::lp_tail_constant(model, 50.0, 2.0, 3.0, fine);
    CHECK(std::abs(f - c) <= 1e-6 * std::abs(f));

    QuadratureSpec forced = coarse;
    forced.force_inner_quadrature = true;
    QuadratureSpec forced_fine = forced;
    forced_fine.inner_intervals = 2 * forced.inner_intervals;
    const double qc = covtest::lp_tail_constant(model, 50.0, 2.0, 3.0, forced);
    const double qf =
        covtest::lp_tail_constant(model, 50.0, 2.0, 3.0, forced_fine);
    CHECK(std::abs(qf - qc) <= 1e-6 * std::abs(qf));
  }
}

TEST_CASE("degenerate tail constant raises") {
  const auto zero_model = constant_table(0.0, 10.0);
  CHECK_THROWS_WITH_AS(covtest::lp_tail_constant(zero_model, 5.0, 1.0, 2.0),
                       doctest::Contains("degenerate"), std::runtime_error);
}

TEST_CASE("exponential bound: frozen values and scalings") {
  // large-T limit: I_5 -> integral of (tau+1/2) e^{-2 tau} + 1/2 on [0,1],
  // giving 2 B^2 (1 - e^{-2}) / T
  CHECK(covtest::lp_tail_constant_bound_exponential(1.0, 1.0, 50.0, 1.0, 2.0) ==
        doctest::Approx(0.034586588670535492).epsilon(1e-10));
  CHECK(covtest::lp_tail_constant_bound_exponential(1.0, 1.0, 100.0, 1.0,
                                                    2.0) ==
        doctest::Approx(0.017293294335267746).epsilon(1e-10));

  // explicit T^{-p/2} scaling once e^{-2aT} is negligible
  for (double p : {1.0, 2.0, 3.0}) {
    const double at_50 =
        covtest::lp_tail_constant_bound_exponential(1.0, 1.0, 50.0, 2.0, p);
    const double at_200 =
        covtest::lp_tail_constant_bound_exponential(1.0, 1.0, 200.0, 2.0, p);
    CHECK(at_200 / at_50 ==
          doctest::Approx(std::pow(0.25, p / 2.0)).epsilon(1e-12));
  }

  // the constant scales as B^p
  for (double p : {1.0, 2.0, 4.0}) {
    const double base =
        covtest::lp_tail_constant_bound_exponential(1.0, 1.0, 50.0, 2.0, p);
    const double doubled =
        covtest::lp_tail_constant_bound_exponential(2.0, 1.0, 50.0, 2.0, p);
    CHECK(doubled == doctest::Approx(std::pow(2.0, p) * base).epsilon(1e-12));
  }
}

TEST_CASE("gaussian bound: error-function identity at p = 2") {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double A : {1.0, 5.0}) {
      const double c = std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(2.0 * a));
      const double erf_term =
          std::sqrt(std::numbers::pi / (8.0 * a)) * std::erf(std::sqrt(2.0 * a) * A);
      const double expected = 2.0 / 50.0 * c * (A + erf_term);
      CHECK(covtest::lp_tail_constant_bound_gaussian(1.0, a, 50.0, A, 2.0) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
  CHECK(covtest::lp_tail_constant_bound_gaussian(1.0, 1.0, 50.0, 1.0, 2.0) ==
        doctest::Approx(0.040059529540292989).epsilon(1e-10));
}

TEST_CASE("gaussian bound decreases as the decay rate grows") {
  double previous = std::numeric_limits<double>::infinity();
  for (double a : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double bound =
        covtest::lp_tail_constant_bound_gaussian(1.0, a, 50.0, 2.0, 3.0);
    CHECK(bound < previous);
    previous = bound;
  }
}

TEST_CASE("bounds dominate the tail constant on a spot-check grid") {
  // the full sweep runs in the acceptance suite
  for (double p : {1.0, 2.0, 4.0}) {
    for (double decay : {0.5, 2.0}) {
      const double cp_exp = covtest::lp_tail_constant(
          CovarianceModel::exponential(2.0, decay), 50.0, 2.0, p);
      CHECK(covtest::lp_tail_constant_bound_exponential(2.0, decay, 50.0, 2.0,
                                                        p) >= cp_exp - 1e-8);
      const double cp_sq = covtest::lp_tail_constant(
          CovarianceModel::squared_exponential(2.0, decay), 50.0, 2.0, p);
      CHECK(covtest::lp_tail_constant_bound_gaussian(2.0, decay, 50.0, 2.0,
                                                     p) >= cp_sq - 1e-8);
    }
  }
}

TEST_CASE("tail constant decay across observation lengths") {
  const auto model = CovarianceModel::exponential(1.0, 1.0);
  const std::vector<double> lengths = {10.0, 20.0, 40.0, 80.0};
  const auto points = covtest::lp_tail_constant_decay(model, 2.0, 2.0, lengths);
  REQUIRE(points.size() == 4);
  const double cap = 2.0 * std::pow(4.0, 1.0);  // A * (4 rho(0)^2)^(p/2)
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].length == lengths[i]);
    CHECK(points[i].constant <= cap);
    if (i > 0) CHECK(points[i].constant < points[i - 1].constant);
  }

  // a model that does not vanish at infinity has no decay
  const auto flat = constant_table(1.0, 200.0);
  const auto flat_points =
      covtest::lp_tail_constant_decay(flat, 2.0, 2.0, lengths);
  for (const auto& point : flat_points)
    CHECK(point.constant == doctest::Approx(2.0 * 2.0).epsilon(1e-10));

  CHECK_THROWS_AS(covtest::lp_tail_constant_decay(
                      model, 2.0, 2.0, std::vector<double>{10.0, 10.0}),
                  std::invalid_argument);
}

TEST_CASE("table CSV parsing") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path();

  const auto good = dir / "covtest_good_table.csv";
  {
    std::ofstream out(good);
    out << "lag,value\n0,1\n0.5,0.5\n1,0\n";
  }
  const auto table = covtest::io::read_table_csv(good.string());
  REQUIRE(table.size() == 3);
  CHECK(table[1].lag == 0.5);
  CHECK(table[1].value == 0.5);
  CHECK_NOTHROW(CovarianceModel::tabulated(table));

  const auto bad_header = dir / "covtest_bad_header.csv";
  {
    std::ofstream out(bad_header);
    out << "tau,rho\n0,1\n";
  }
  CHECK_THROWS_AS(covtest::io::read_table_csv(bad_header.string()),
                  std::runtime_error);

  const auto bad_field = dir / "covtest_bad_field.csv";
  {
    std::ofstream out(bad_field);
    out << "lag,value\n0,one\n";
  }
  CHECK_THROWS_AS(covtest::io::read_table_csv(bad_field.string()),
                  std::runtime_error);

  CHECK_THROWS_AS(covtest::io::read_table_csv((dir / "covtest_absent.csv").string()),
                  std::runtime_error);

  fs::remove(good);
  fs::remove(bad_header);
  fs::remove(bad_field);
}

TEST_CASE("variance curve matches pointwise evaluation") {
  const auto model = CovarianceModel::exponential(1.0, 1.0);
  const std::vector<double> lags = {0.0, 0.5, 1.0, 2.0};
  const auto curve = covtest::correlogram_variance_curve(model, 50.0, lags);
  REQUIRE(curve.lags.size() == lags.size());
  for (std::size_t i = 0; i < lags.size(); ++i)
    CHECK(curve.values[i] ==
          covtest::correlogram_variance(model, 50.0, lags[i]));
}
