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

#ifndef COVTEST_COVARIANCE_HPP
#define COVTEST_COVARIANCE_HPP

#include <span>
#include <vector>

#include "covtest/quadrature.hpp"

namespace covtest {

enum class CovarianceKind { Exponential, SquaredExponential, Tabulated };

struct TableEntry {
  double lag = 0.0;
  double value = 0.0;
};

/// Even stationary covariance function rho(tau). The analytic kinds evaluate
///   Exponential:         B * exp(-a*|tau|)
///   SquaredExponential:  B * exp(-a*tau^2)
/// with variance scale B > 0 and decay rate a > 0. Tabulated models
/// interpolate linearly between knots (lags strictly increasing from 0),
/// mirror to negative lags, and are zero beyond the last knot.
/// Positive-definiteness of user tables is not validated.
struct CovarianceModel {
  CovarianceKind kind = CovarianceKind::Exponential;
  double variance = 1.0;  // B
  double decay = 1.0;     // a
  std::vector<TableEntry> table;

  static CovarianceModel exponential(double variance, double decay);
  static CovarianceModel squared_exponential(double variance, double decay);
  static CovarianceModel tabulated(std::vector<TableEntry> knots);

  void validate() const;
  double peak() const;  // rho(0)
};

double eval_rho(const CovarianceModel& model, double tau);

/// Sampling geometry: the process is observed on [0, T + A] with uniform
/// step dt, the correlogram integrates over [0, T] and is evaluated at lags
/// in [0, A]. T/dt and A/dt must be integers within 1e-9 relative.
struct ObservationWindow {
  double length = 0.0;   // T
  double max_lag = 0.0;  // A
  double dt = 0.0;

  void validate() const;
  int length_steps() const;  // T/dt
  int lag_steps() const;     // A/dt
  int path_points() const;   // (T+A)/dt + 1
};

/// Variance of the correlogram deviation at lag tau for observation
/// length T:
///   (2/T^2) * integral_0^T (T-u) * (rho^2(u) + rho(u+tau)*rho(u-tau)) du.
/// Analytic kinds use exact antiderivatives unless
/// quad.force_inner_quadrature is set; tabulated kinds always integrate
/// numerically. The result is a variance: tiny negative round-off is clamped
/// to zero, genuinely negative values raise std::runtime_error.
double correlogram_variance(const CovarianceModel& model, double length,
                            double tau, const QuadratureSpec& quad = {});

struct VarianceCurve {
  std::vector<double> lags;
  std::vector<double> values;
};

VarianceCurve correlogram_variance_curve(const CovarianceModel& model,
                                         double length,
                                         std::span<const double> lags,
                                         const QuadratureSpec& quad = {});

/// The constant scaling the L_p tail bound:
///   integral_0^A correlogram_variance(T, tau)^(p/2) dtau,   p >= 1.
/// Throws std::runtime_error when the result degenerates below 1e-300
/// (downstream thresholds divide by its p-th root).
double lp_tail_constant(const CovarianceModel& model, double length,
                        double max_lag, double p,
                        const QuadratureSpec& quad = {});

inline double lp_tail_constant(const CovarianceModel& model,
                               const ObservationWindow& window, double p,
                               const QuadratureSpec& quad = {}) {
  return lp_tail_constant(model, window.length, window.max_lag, p, quad);
}

/// Closed-form upper bounds on lp_tail_constant for the analytic kinds:
/// (2B^2)^(p/2) * T^(-p/2) * I with
///   exponential: I = integral_0^A ((tau + 1/(2a)) e^(-2a tau) + 1/(2a)
///                                  + e^(-2aT)/(2a^2))^(p/2) dtau
///   gaussian:    I = integral_0^A (c + c e^(-2a tau^2))^(p/2) dtau,
///                c = sqrt(pi)/(2 sqrt(2a)).
/// The exponential bound dominates lp_tail_constant for T >= 1.
double lp_tail_constant_bound_exponential(double variance, double decay,
                                          double length, double max_lag,
                                          double p, int intervals = 1024);
double lp_tail_constant_bound_gaussian(double variance, double decay,
                                       double length, double max_lag, double p,
                                       int intervals = 1024);

struct DecayPoint {
  double length = 0.0;    // T
  double constant = 0.0;  // lp_tail_constant at that T
};

/// lp_tail_constant across a strictly increasing list of observation
/// lengths; supports checking that the constant decays as T grows.
std::vector<DecayPoint> lp_tail_constant_decay(const CovarianceModel& model,
                                               double max_lag, double p,
                                               std::span<const double> lengths,
                                               const QuadratureSpec& quad = {});

}  // namespace covtest

#endif  // COVTEST_COVARIANCE_HPP
