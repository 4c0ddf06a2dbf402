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

#include "covtest/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace covtest {

namespace {

bool near_integer(double x) {
  return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

void require_positive_finite(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0)
    throw std::invalid_argument(std::string(name) +
                                " must be positive and finite");
}

}  // namespace

CovarianceModel CovarianceModel::exponential(double variance, double decay) {
  CovarianceModel m;
  m.kind = CovarianceKind::Exponential;
  m.variance = variance;
  m.decay = decay;
  m.validate();
  return m;
}

CovarianceModel CovarianceModel::squared_exponential(double variance,
                                                     double decay) {
  CovarianceModel m;
  m.kind = CovarianceKind::SquaredExponential;
  m.variance = variance;
  m.decay = decay;
  m.validate();
  return m;
}

CovarianceModel CovarianceModel::tabulated(std::vector<TableEntry> knots) {
  CovarianceModel m;
  m.kind = CovarianceKind::Tabulated;
  m.table = std::move(knots);
  m.validate();
  return m;
}

void CovarianceModel::validate() const {
  if (kind == CovarianceKind::Tabulated) {
    if (table.empty())
      throw std::invalid_argument(
          "invalid covariance model: tabulated model with empty table");
    if (table.front().lag != 0.0)
      throw std::invalid_argument(
          "invalid covariance model: table lags must start at 0");
    const double head = table.front().value;
    if (!std::isfinite(head) || head < 0.0)
      throw std::invalid_argument(
          "invalid covariance model: table value at lag 0 must be finite and "
          "nonnegative");
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!std::isfinite(table[i].lag) || !std::isfinite(table[i].value))
        throw std::invalid_argument(
            "invalid covariance model: non-finite table entry");
      if (i > 0 && !(table[i].lag > table[i - 1].lag))
        throw std::invalid_argument(
            "invalid covariance model: table lags must be strictly "
            "increasing");
      if (std::abs(table[i].value) > head)
        throw std::invalid_argument(
            "invalid covariance model: |rho(tau)| exceeds rho(0)");
    }
    return;
  }
  require_positive_finite(variance, "covariance model parameter B");
  require_positive_finite(decay, "covariance model parameter a");
}

double CovarianceModel::peak() const {
  return kind == CovarianceKind::Tabulated
             ? (table.empty() ? 0.0 : table.front().value)
             : variance;
}

double eval_rho(const CovarianceModel& model, double tau) {
  const double t = std::abs(tau);
  switch (model.kind) {
    case CovarianceKind::Exponential:
      return model.variance * std::exp(-model.decay * t);
    case CovarianceKind::SquaredExponential:
      return model.variance * std::exp(-model.decay * t * t);
    case CovarianceKind::Tabulated:
      break;
  }
  const auto& knots = model.table;
  if (knots.empty())
    throw std::invalid_argument(
        "invalid covariance model: tabulated model with empty table");
  if (t > knots.back().lag) return 0.0;
  const auto it = std::lower_bound(
      knots.begin(), knots.end(), t,
      [](const TableEntry& e, double lag) { return e.lag < lag; });
  if (it == knots.begin()) return it->value;
  if (it->lag == t) return it->value;
  const auto prev = it - 1;
  const double w = (t - prev->lag) / (it->lag - prev->lag);
  return prev->value + w * (it->value - prev->value);
}

void ObservationWindow::validate() const {
  require_positive_finite(length, "observation window T");
  require_positive_finite(max_lag, "observation window A");
  require_positive_finite(dt, "observation window dt");
  if (dt > std::min(length, max_lag))
    throw std::invalid_argument(
        "observation window dt must not exceed min(T, A)");
  if (!near_integer(length / dt))
    throw std::invalid_argument("observation window: T/dt is not an integer");
  if (!near_integer(max_lag / dt))
    throw std::invalid_argument("observation window: A/dt is not an integer");
}

int ObservationWindow::length_steps() const {
  return static_cast<int>(std::llround(length / dt));
}

int ObservationWindow::lag_steps() const {
  return static_cast<int>(std::llround(max_lag / dt));
}

int ObservationWindow::path_points() const {
  return length_steps() + lag_steps() + 1;
}

namespace {

// integral_0^T (T-u)(rho^2(u) + rho(u+tau) rho(u-tau)) du for the unit-scale
// exponential kind, exact. The cross factor equals e^{-2a*tau} for u <= tau
// and e^{-2a*u} beyond, so the antiderivative branches at tau = T.
double variance_integral_exponential(double a, double T, double tau) {
  const double eT = std::exp(-2.0 * a * T);
  if (tau >= T) {
    const double direct =
        T / (2.0 * a) + std::expm1(-2.0 * a * T) / (4.0 * a * a);
    return direct + std::exp(-2.0 * a * tau) * T * T / 2.0;
  }
  const double et = std::exp(-2.0 * a * tau);
  const double inv2a = 1.0 / (2.0 * a);
  const double inv4a2 = 1.0 / (4.0 * a * a);
  return (T * tau + T * inv2a - tau * tau / 2.0 - tau * inv2a - inv4a2) * et +
         eT / (2.0 * a * a) + T * inv2a - inv4a2;
}

// Same integral for the squared-exponential kind; the cross factor is
// exactly e^{-2a*tau^2} e^{-2a*u^2}, so no branch is needed.
double variance_integral_gaussian(double a, double T, double tau) {
  const double g =
      std::sqrt(std::numbers::pi / (8.0 * a)) * std::erf(std::sqrt(2.0 * a) * T);
  const double h = -std::expm1(-2.0 * a * T * T) / (4.0 * a);
  return (1.0 + std::exp(-2.0 * a * tau * tau)) * (T * g - h);
}

double variance_integral_quadrature(const CovarianceModel& model, double T,
                                    double tau, int intervals) {
  auto integrand = [&](double u) {
    const double direct = eval_rho(model, u);
    return (T - u) * (direct * direct +
                      eval_rho(model, u + tau) * eval_rho(model, u - tau));
  };
  // The exponential cross factor has a derivative kink at u = tau; splitting
  // there restores the h^4 convergence of the composite rule.
  if (model.kind == CovarianceKind::Exponential && tau > 0.0 && tau < T) {
    int left = static_cast<int>(std::lround(intervals * tau / T));
    left -= left % 2;
    left = std::clamp(left, 2, intervals - 2);
    return quadrature::simpson(integrand, 0.0, tau, left) +
           quadrature::simpson(integrand, tau, T, intervals - left);
  }
  return quadrature::simpson(integrand, 0.0, T, intervals);
}

}  // namespace

double correlogram_variance(const CovarianceModel& model, double length,
                            double tau, const QuadratureSpec& quad) {
  model.validate();
  require_positive_finite(length, "observation length T");
  if (!std::isfinite(tau) || tau < 0.0)
    throw std::invalid_argument("lag tau must be finite and nonnegative");

  double value = 0.0;
  // The exponential antiderivative cancels ~1/(4a^2)-sized terms, which
  // loses all precision once a*T is tiny; the integrand is then nearly
  // polynomial and the quadrature path is exact instead.
  const bool nearly_flat =
      model.kind == CovarianceKind::Exponential && model.decay * length < 1e-3;
  if (!quad.force_inner_quadrature && !nearly_flat &&
      model.kind == CovarianceKind::Exponential) {
    const double scale =
        2.0 * model.variance * model.variance / (length * length);
    value = scale * variance_integral_exponential(model.decay, length, tau);
  } else if (!quad.force_inner_quadrature &&
             model.kind == CovarianceKind::SquaredExponential) {
    const double scale =
        2.0 * model.variance * model.variance / (length * length);
    value = scale * variance_integral_gaussian(model.decay, length, tau);
  } else {
    value = 2.0 / (length * length) *
            variance_integral_quadrature(model, length, tau,
                                         quad.inner_intervals);
  }

  if (!std::isfinite(value))
    throw std::runtime_error(
        "correlogram variance evaluation produced a non-finite value");
  if (value < 0.0) {
    const double tol = 1e-9 * 4.0 * model.peak() * model.peak() + 1e-300;
    if (value < -tol)
      throw std::runtime_error(
          "correlogram variance is negative; the covariance table is not a "
          "valid covariance function");
    value = 0.0;
  }
  return value;
}

VarianceCurve correlogram_variance_curve(const CovarianceModel& model,
                                         double length,
                                         std::span<const double> lags,
                                         const QuadratureSpec& quad) {
  VarianceCurve curve;
  curve.lags.assign(lags.begin(), lags.end());
  curve.values.reserve(lags.size());
  for (double tau : lags)
    curve.values.push_back(correlogram_variance(model, length, tau, quad));
  return curve;
}

double lp_tail_constant(const CovarianceModel& model, double length,
                        double max_lag, double p, const QuadratureSpec& quad) {
  model.validate();
  require_positive_finite(length, "observation length T");
  require_positive_finite(max_lag, "maximum lag A");
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("exponent p must be >= 1");

  const double half_p = 0.5 * p;
  auto integrand = [&](double tau) {
    return std::pow(correlogram_variance(model, length, tau, quad), half_p);
  };
  const double value =
      quadrature::simpson(integrand, 0.0, max_lag, quad.outer_intervals);
  if (!std::isfinite(value))
    throw std::runtime_error("tail constant evaluation is non-finite");
  if (value <= 1e-300)
    throw std::runtime_error(
        "degenerate tail constant (C_p <= 1e-300): the tail bound divides by "
        "its p-th root");
  return value;
}

double lp_tail_constant_bound_exponential(double variance, double decay,
                                          double length, double max_lag,
                                          double p, int intervals) {
  require_positive_finite(variance, "B");
  require_positive_finite(decay, "a");
  require_positive_finite(length, "T");
  require_positive_finite(max_lag, "A");
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("exponent p must be >= 1");
  const double a = decay;
  const double inv2a = 1.0 / (2.0 * a);
  const double tail = std::exp(-2.0 * a * length) / (2.0 * a * a);
  const double half_p = 0.5 * p;
  auto integrand = [&](double tau) {
    return std::pow((tau + inv2a) * std::exp(-2.0 * a * tau) + inv2a + tail,
                    half_p);
  };
  const double bound_integral =
      quadrature::simpson(integrand, 0.0, max_lag, intervals);
  return std::pow(2.0 * variance * variance, half_p) *
         std::pow(length, -half_p) * bound_integral;
}

double lp_tail_constant_bound_gaussian(double variance, double decay,
                                       double length, double max_lag, double p,
                                       int intervals) {
  require_positive_finite(variance, "B");
  require_positive_finite(decay, "a");
  require_positive_finite(length, "T");
  require_positive_finite(max_lag, "A");
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("exponent p must be >= 1");
  const double c =
      std::sqrt(std::numbers::pi) / (2.0 * std::sqrt(2.0 * decay));
  const double half_p = 0.5 * p;
  auto integrand = [&](double tau) {
    return std::pow(c + c * std::exp(-2.0 * decay * tau * tau), half_p);
  };
  const double bound_integral =
      quadrature::simpson(integrand, 0.0, max_lag, intervals);
  return std::pow(2.0 * variance * variance, half_p) *
         std::pow(length, -half_p) * bound_integral;
}

std::vector<DecayPoint> lp_tail_constant_decay(const CovarianceModel& model,
                                               double max_lag, double p,
                                               std::span<const double> lengths,
                                               const QuadratureSpec& quad) {
  if (lengths.empty())
    throw std::invalid_argument("decay check needs at least one length");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!std::isfinite(lengths[i]) || lengths[i] <= 0.0)
      throw std::invalid_argument("lengths must be positive and finite");
    if (i > 0 && !(lengths[i] > lengths[i - 1]))
      throw std::invalid_argument("lengths must be strictly increasing");
  }
  std::vector<DecayPoint> points;
  points.reserve(lengths.size());
  for (double length : lengths)
    points.push_back(
        {length, lp_tail_constant(model, length, max_lag, p, quad)});
  return points;
}

}  // namespace covtest
