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

#ifndef COVTEST_CRITERION_HPP
#define COVTEST_CRITERION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covtest/covariance.hpp"
#include "covtest/simulate.hpp"
#include "covtest/tailbound.hpp"

namespace covtest {

struct TestConfig {
  double delta = 0.05;  // confidence level, in (0, 1)
  double p = 2.0;       // L_p exponent, >= 1
  ObservationWindow window;
  CovarianceModel null_model;  // hypothesized covariance
  QuadratureSpec quad;

  void validate() const;
};

struct TestDecision {
  double statistic = 0.0;
  double threshold = 0.0;  // S_delta = max(epsilon_delta, z_p)
  bool accepted = false;
  double epsilon_delta = 0.0;
  double z_p = 0.0;
  double cp = 0.0;
  ThresholdBranch threshold_branch = ThresholdBranch::FromRoot;
};

// The acceptance rule is a strict inequality; a statistic exactly on the
// threshold rejects.
constexpr bool accepts(double statistic, double threshold) noexcept {
  return statistic < threshold;
}

/// Run the hypothesis test on a correlogram: the tail constant comes from the
/// null model, the threshold from decision_threshold, and the hypothesis is
/// accepted iff the L_p deviation statistic is strictly below the threshold.
TestDecision run_test(const Correlogram& corr, const TestConfig& config);

struct MonteCarloReport {
  std::int64_t replications = 0;
  std::int64_t rejections = 0;
  double rejection_rate = 0.0;
  double binomial_std_err = 0.0;
  std::string config_digest;
  std::uint64_t master_seed = 0;
};

/// Simulate `reps` independent paths from true_model and run the test
/// against config.null_model. Replication r is seeded with
/// rng::substream_seed(master_seed, r), so the report is identical for any
/// worker count and scheduling order. workers == 0 picks the hardware
/// concurrency. When true_model equals the null model the rejection rate
/// estimates the type-I error.
MonteCarloReport monte_carlo_level(const CovarianceModel& true_model,
                                   const TestConfig& config,
                                   std::int64_t replications,
                                   std::uint64_t master_seed, int workers = 0);

struct TailCurvePoint {
  double epsilon = 0.0;
  double bound = 0.0;  // tail bound value at epsilon
  bool valid = false;  // epsilon >= validity threshold
};

std::vector<TailCurvePoint> tail_curve(const TailBoundParams& params,
                                       std::span<const double> epsilons);

}  // namespace covtest

#endif  // COVTEST_CRITERION_HPP
