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

#include <algorithm>
#include <cmath>
#include <vector>

#include "covtest/rng.hpp"
#include "covtest/tailbound.hpp"

using covtest::TailBoundParams;
using covtest::ThresholdBranch;

TEST_CASE("mgf_bound values and domain") {
  CHECK(covtest::mgf_bound(0.0) == 1.0);
  // sqrt(2) * exp(-1/4), arbitrary-precision reference
  CHECK(covtest::mgf_bound(0.5) ==
        doctest::Approx(1.1013906298063675).epsilon(1e-15));
  CHECK(covtest::mgf_bound(-0.5) == covtest::mgf_bound(0.5));
  for (double s = -0.95; s < 1.0; s += 0.05)
    CHECK(covtest::mgf_bound(s) >= 1.0);  // minimum sits at s = 0
  CHECK_THROWS_AS(covtest::mgf_bound(1.0), std::domain_error);
  CHECK_THROWS_AS(covtest::mgf_bound(-1.2), std::domain_error);
}

TEST_CASE("moment_bound value, monotonicity and domain") {
  CHECK(covtest::moment_bound(2.0, 1.0, 0.5) ==
        doctest::Approx(9.5396488216957428).epsilon(1e-14));

  double previous = 0.0;
  for (double m2 : {0.5, 1.0, 2.0, 4.0, 9.0}) {
    const double bound = covtest::moment_bound(3.0, m2, 0.7);
    CHECK(bound > previous);
    previous = bound;
  }

  CHECK_THROWS_AS(covtest::moment_bound(0.0, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(covtest::moment_bound(2.0, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(covtest::moment_bound(2.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(covtest::moment_bound(2.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("moment_bound dominates the Monte Carlo second moment of xi^2-1") {
  // E|xi^2 - 1|^2 = 2 exactly; the bound must sit above it for every s.
  covtest::rng::GaussianStream normals(314159);
  const std::size_t draws = 1'000'000;
  double acc = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double xi = normals.next();
    const double centered = xi * xi - 1.0;
    acc += centered * centered;
  }
  const double mc_second_moment = acc / static_cast<double>(draws);
  CHECK(mc_second_moment == doctest::Approx(2.0).epsilon(0.02));

  double best = std::numeric_limits<double>::infinity();
  for (double s = 0.05; s < 1.0; s += 0.05)
    best = std::min(best, covtest::moment_bound(2.0, 2.0, s));
  CHECK(mc_second_moment <= best);
}

TEST_CASE("tail_bound frozen value, symmetry in scale, domain") {
  const TailBoundParams params{1.0, 1.0};
  CHECK(covtest::tail_bound(2.0, params) ==
        doctest::Approx(0.95138224361434690).epsilon(1e-14));

  // depends only on (epsilon / C_p)^(1/p)
  for (double lambda : {0.25, 0.5, 2.0, 16.0, 1024.0}) {
    const TailBoundParams scaled{3.0, lambda * 0.7};
    const TailBoundParams base{3.0, 0.7};
    CHECK(covtest::tail_bound(lambda * 5.0, scaled) ==
          doctest::Approx(covtest::tail_bound(5.0, base)).epsilon(1e-13));
  }

  CHECK_THROWS_AS(covtest::tail_bound(0.0, params), std::domain_error);
  CHECK_THROWS_AS(covtest::tail_bound(-1.0, params), std::domain_error);
  CHECK_THROWS_AS(covtest::tail_bound(1.0, TailBoundParams{0.5, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(covtest::tail_bound(1.0, TailBoundParams{2.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("validity_threshold exact values and linearity in the constant") {
  const double z2 = covtest::validity_threshold({2.0, 1.0});
  CHECK(z2 == doctest::Approx(6.0 + 4.0 * std::sqrt(2.0)).epsilon(1e-15));
  const double z1 = covtest::validity_threshold({1.0, 1.0});
  CHECK(z1 ==
        doctest::Approx(1.0 / std::sqrt(2.0) + std::sqrt(1.5)).epsilon(1e-15));
  CHECK(covtest::validity_threshold({2.0, 2.0}) ==
        doctest::Approx(2.0 * z2).epsilon(1e-15));
}

TEST_CASE("tail_bound is strictly decreasing and vanishes at infinity") {
  for (double p : {1.0, 2.0, 4.0, 6.0}) {
    for (double constant : {1e-3, 1.0, 1e3}) {
      const TailBoundParams params{p, constant};
      const double z = covtest::validity_threshold(params);
      double previous = std::numeric_limits<double>::infinity();
      for (double eps = z; eps <= 1e4 * z; eps *= 4.0) {
        const double g = covtest::tail_bound(eps, params);
        if (previous > 0.0)
          CHECK(g < previous);  // strictly decreasing until underflow
        else
          CHECK(g == 0.0);
        previous = g;
      }
      CHECK(covtest::tail_bound(1e6 * z, params) < 1e-12);
    }
  }
}

TEST_CASE("tail_bound_inverse round-trip, monotonicity, scaling") {
  for (double delta : {0.01, 0.05, 0.1}) {
    for (double p : {1.0, 2.0, 4.0}) {
      for (double constant : {0.1, 1.0, 10.0}) {
        CAPTURE(delta);
        CAPTURE(p);
        CAPTURE(constant);
        const TailBoundParams params{p, constant};
        const double eps = covtest::tail_bound_inverse(delta, params);
        CHECK(std::abs(covtest::tail_bound(eps, params) - delta) <=
              1e-10 * delta);
      }
    }
  }

  const TailBoundParams params{2.0, 1.0};
  CHECK(covtest::tail_bound_inverse(0.01, params) >
        covtest::tail_bound_inverse(0.05, params));
  CHECK(covtest::tail_bound_inverse(0.05, params) >
        covtest::tail_bound_inverse(0.2, params));

  for (double lambda : {0.5, 2.0, 100.0}) {
    const double base = covtest::tail_bound_inverse(0.05, {3.0, 1.0});
    const double scaled = covtest::tail_bound_inverse(0.05, {3.0, lambda});
    CHECK(scaled == doctest::Approx(lambda * base).epsilon(1e-9));
  }

  CHECK_THROWS_AS(covtest::tail_bound_inverse(0.0, params), std::domain_error);
  CHECK_THROWS_AS(covtest::tail_bound_inverse(1.0, params), std::domain_error);
}

TEST_CASE("decision_threshold guarantees and branch selection") {
  const std::vector<double> deltas = {1e-4, 1e-3, 0.01, 0.05, 0.1, 0.25, 0.5};
  const std::vector<double> ps = {1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
  const std::vector<double> constants = {1e-3, 0.1, 1.0, 10.0, 1e3};
  for (double delta : deltas) {
    for (double p : ps) {
      for (double constant : constants) {
        CAPTURE(delta);
        CAPTURE(p);
        CAPTURE(constant);
        const TailBoundParams params{p, constant};
        const auto threshold = covtest::decision_threshold(delta, params);
        CHECK(covtest::tail_bound(threshold.value, params) <= delta);
        CHECK(threshold.value >= covtest::validity_threshold(params));
        CHECK(threshold.value ==
              std::max(threshold.epsilon_delta, threshold.validity));
      }
    }
  }

  // g at the validity threshold is ~0.4318 for p=2, so delta=0.001 forces the
  // root branch ...
  const auto from_root = covtest::decision_threshold(0.001, {2.0, 1.0});
  CHECK(from_root.branch == ThresholdBranch::FromRoot);
  CHECK(covtest::tail_bound(covtest::validity_threshold({2.0, 1.0}),
                            {2.0, 1.0}) ==
        doctest::Approx(0.43184316752296681).epsilon(1e-13));
  // ... while g at the p=1 threshold is ~0.9857, so delta=0.99 solves below
  // it and the validity floor wins.
  const auto from_validity = covtest::decision_threshold(0.99, {1.0, 1.0});
  CHECK(from_validity.branch == ThresholdBranch::FromValidity);
  CHECK(from_validity.value == covtest::validity_threshold({1.0, 1.0}));
  CHECK(from_validity.epsilon_delta < from_validity.validity);
}

TEST_CASE("empirical tail of |xi^2-1|^p stays below the bound") {
  // Y(t) = xi^2 - 1 constant in t on [0,1]: the L_p integral is |xi^2-1|^p
  // and C_p = (E Y^2)^(p/2) = 2^(p/2).
  const std::size_t draws = 20'000;
  for (double p : {1.0, 2.0}) {
    CAPTURE(p);
    const TailBoundParams params{p, std::pow(2.0, p / 2.0)};
    const double z = covtest::validity_threshold(params);

    covtest::rng::GaussianStream normals(271828);
    std::vector<double> stats(draws);
    for (double& s : stats) {
      const double xi = normals.next();
      s = std::pow(std::abs(xi * xi - 1.0), p);
    }

    for (int i = 0; i < 12; ++i) {
      const double eps = z * std::pow(50.0, i / 11.0);
      const double count = static_cast<double>(
          std::count_if(stats.begin(), stats.end(),
                        [&](double s) { return s > eps; }));
      const double freq = count / static_cast<double>(draws);
      const double stderr_freq =
          std::sqrt(freq * (1.0 - freq) / static_cast<double>(draws));
      CHECK(freq <= covtest::tail_bound(eps, params) + 3.0 * stderr_freq);
    }
  }
}
