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

#ifndef COVTEST_TAILBOUND_HPP
#define COVTEST_TAILBOUND_HPP

namespace covtest {

/// Parameters of the square-Gaussian L_p tail bound: the exponent p >= 1 and
/// the positive constant C_p produced by lp_tail_constant.
struct TailBoundParams {
  double p = 2.0;
  double constant = 1.0;  // C_p

  void validate() const;
};

/// Exponential-moment bound for square Gaussian variables, |s| < 1:
///   (1 - |s|)^(-1/2) * exp(-|s|/2).
double mgf_bound(double s);

/// Upper bound on E|Z|^alpha for square Gaussian Z with E Z^2 =
/// second_moment, valid for 0 < s < 1:
///   2 * mgf_bound(s) * (sqrt(2*second_moment)/s)^alpha * alpha^alpha
///     * exp(-alpha).
double moment_bound(double alpha, double second_moment, double s);

/// Tail bound for P{ integral |Y|^p > epsilon }:
///   2 * sqrt(1 + r*sqrt(2)) * exp(-r/sqrt(2)),  r = (epsilon/C_p)^(1/p).
/// Strictly decreasing in epsilon with range (0, 2); it is a proven
/// probability bound only for epsilon >= validity_threshold(params), but the
/// value is computed for any epsilon > 0 (callers gate on the threshold).
/// Values above 1 are returned as-is.
double tail_bound(double epsilon, const TailBoundParams& params);

/// Smallest epsilon for which the tail bound is proven:
///   (p/sqrt(2) + sqrt((p/2 + 1)*p))^p * C_p.
double validity_threshold(const TailBoundParams& params);

/// The unique solution of tail_bound(epsilon) = delta for 0 < delta < 1,
/// found by bracketing from the validity threshold and bisecting; the result
/// satisfies delta * (1 - 1e-10) <= tail_bound(eps) <= delta, so the
/// round-trip error is at most 1e-10 relative and never overshoots delta.
/// The root may lie below the validity threshold when delta >= tail_bound at
/// the threshold.
double tail_bound_inverse(double delta, const TailBoundParams& params);

enum class ThresholdBranch { FromRoot, FromValidity };

struct DecisionThreshold {
  double value = 0.0;  // max(epsilon_delta, validity threshold)
  ThresholdBranch branch = ThresholdBranch::FromRoot;
  double epsilon_delta = 0.0;
  double validity = 0.0;
};

/// Rejection threshold at confidence level delta:
///   max(tail_bound_inverse(delta), validity_threshold), with the branch
/// recording which argument attained the max. Guarantees
/// tail_bound(value) <= delta and value >= validity_threshold.
DecisionThreshold decision_threshold(double delta,
                                     const TailBoundParams& params);

}  // namespace covtest

#endif  // COVTEST_TAILBOUND_HPP
