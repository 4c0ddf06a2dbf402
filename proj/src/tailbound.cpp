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

#include "covtest/tailbound.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace covtest {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr int kMaxBracketSteps = 200;
constexpr int kMaxBisectSteps = 200;
}  // namespace

void TailBoundParams::validate() const {
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("tail bound exponent p must be >= 1");
  if (!std::isfinite(constant) || constant <= 0.0)
    throw std::invalid_argument(
        "tail bound constant C_p must be positive and finite");
}

double mgf_bound(double s) {
  const double m = std::abs(s);
  if (!(m < 1.0)) throw std::domain_error("mgf_bound requires |s| < 1");
  return std::exp(-m / 2.0) / std::sqrt(1.0 - m);
}

double moment_bound(double alpha, double second_moment, double s) {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw std::domain_error("moment_bound requires alpha > 0");
  if (!std::isfinite(second_moment) || second_moment <= 0.0)
    throw std::domain_error("moment_bound requires a positive second moment");
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("moment_bound requires 0 < s < 1");
  return 2.0 * mgf_bound(s) *
         std::pow(std::sqrt(2.0 * second_moment) / s, alpha) *
         std::pow(alpha, alpha) * std::exp(-alpha);
}

double tail_bound(double epsilon, const TailBoundParams& params) {
  params.validate();
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw std::domain_error("tail_bound requires epsilon > 0");
  const double r = std::pow(epsilon / params.constant, 1.0 / params.p);
  return 2.0 * std::sqrt(1.0 + r * kSqrt2) * std::exp(-r / kSqrt2);
}

double validity_threshold(const TailBoundParams& params) {
  params.validate();
  const double p = params.p;
  return std::pow(p / kSqrt2 + std::sqrt((p / 2.0 + 1.0) * p), p) *
         params.constant;
}

double tail_bound_inverse(double delta, const TailBoundParams& params) {
  params.validate();
  if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0)
    throw std::domain_error("tail_bound_inverse requires 0 < delta < 1");

  // The bound is strictly decreasing with range (0, 2), so the root exists
  // and is unique. Establish lo with g(lo) >= delta and hi with g(hi) <=
  // delta, starting from the validity threshold.
  const double start = validity_threshold(params);
  const double g_start = tail_bound(start, params);
  if (g_start == delta) return start;

  double lo = start;
  double hi = start;
  if (g_start > delta) {
    for (int i = 0; tail_bound(hi, params) > delta; ++i) {
      if (i >= kMaxBracketSteps)
        throw std::runtime_error("tail_bound_inverse: bracketing failed");
      lo = hi;
      hi *= 2.0;
    }
  } else {
    for (int i = 0; tail_bound(lo, params) < delta; ++i) {
      if (i >= kMaxBracketSteps)
        throw std::runtime_error("tail_bound_inverse: bracketing failed");
      hi = lo;
      lo /= 2.0;
    }
  }

  for (int i = 0; i < kMaxBisectSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = tail_bound(mid, params);
    // accept from below only, so downstream max(eps, z_p) thresholds keep
    // the bound at or under delta
    if (g <= delta && delta - g <= 1e-10 * delta) return mid;
    if (g > delta)
      lo = mid;
    else
      hi = mid;
  }
  throw std::runtime_error("tail_bound_inverse: bisection did not converge");
}

DecisionThreshold decision_threshold(double delta,
                                     const TailBoundParams& params) {
  DecisionThreshold result;
  result.epsilon_delta = tail_bound_inverse(delta, params);
  result.validity = validity_threshold(params);
  if (result.epsilon_delta >= result.validity) {
    result.value = result.epsilon_delta;
    result.branch = ThresholdBranch::FromRoot;
  } else {
    result.value = result.validity;
    result.branch = ThresholdBranch::FromValidity;
  }
  return result;
}

}  // namespace covtest
