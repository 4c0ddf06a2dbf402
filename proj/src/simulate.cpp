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

#include "covtest/simulate.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "covtest/kernels.hpp"
#include "covtest/rng.hpp"

namespace covtest {

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;
constexpr std::size_t kMaxCholeskyPoints = 4096;

// FFTW's planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer alloc_complex(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return ComplexBuffer(p);
}

class ForwardDft {
 public:
  ForwardDft(std::size_t n, fftw_complex* in, fftw_complex* out) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr)
      throw std::runtime_error("fftw plan creation failed");
  }
  ~ForwardDft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  ForwardDft(const ForwardDft&) = delete;
  ForwardDft& operator=(const ForwardDft&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

std::size_t next_power_of_two(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

std::size_t checked_grid_points(const ObservationWindow& window) {
  window.validate();
  const auto n = static_cast<std::size_t>(window.path_points());
  if (n > kMaxGridPoints)
    throw std::invalid_argument("sampling grid exceeds 2^24 points");
  return n;
}

bool near_integer(double x) {
  return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

}  // namespace

CirculantSampler::CirculantSampler(const CovarianceModel& model,
                                   const ObservationWindow& window) {
  model.validate();
  points_ = checked_grid_points(window);
  dt_ = window.dt;
  size_ = next_power_of_two(std::max<std::size_t>(2 * (points_ - 1), 2));

  auto in = alloc_complex(size_);
  auto out = alloc_complex(size_);
  for (std::size_t j = 0; j < size_; ++j) {
    const std::size_t wrap = std::min(j, size_ - j);
    in[j][0] = eval_rho(model, static_cast<double>(wrap) * dt_);
    in[j][1] = 0.0;
  }
  ForwardDft dft(size_, in.get(), out.get());
  dft.execute();

  double max_eig = 0.0;
  for (std::size_t k = 0; k < size_; ++k)
    max_eig = std::max(max_eig, out[k][0]);
  const double tol = 1e-9 * max_eig;

  spectral_scale_.resize(2 * size_);
  for (std::size_t k = 0; k < size_; ++k) {
    double eig = out[k][0];
    if (eig < 0.0) {
      if (eig < -tol)
        throw embedding_error(
            "circulant embedding has negative eigenvalues beyond tolerance "
            "(min " +
            std::to_string(eig) +
            "); enlarge the observation window or use the Cholesky sampler");
      eig = 0.0;
    }
    const double scale = std::sqrt(eig / static_cast<double>(size_));
    spectral_scale_[2 * k] = scale;
    spectral_scale_[2 * k + 1] = scale;
  }
}

SamplePath CirculantSampler::sample(std::uint64_t seed) const {
  auto in = alloc_complex(size_);
  auto out = alloc_complex(size_);

  // b_k = sqrt(lambda_k / M) * (xi_k + i eta_k); both the real and the
  // imaginary part of the transform carry the target covariance, the real
  // part is kept.
  rng::GaussianStream normals(seed);
  auto* draws = reinterpret_cast<double*>(in.get());
  normals.fill({draws, 2 * size_});
  kernels::mul_inplace(draws, spectral_scale_.data(), 2 * size_);

  ForwardDft dft(size_, in.get(), out.get());
  dft.execute();

  SamplePath path;
  path.dt = dt_;
  path.seed = seed;
  path.values.resize(points_);
  for (std::size_t i = 0; i < points_; ++i) path.values[i] = out[i][0];
  return path;
}

CholeskySampler::CholeskySampler(const CovarianceModel& model,
                                 const ObservationWindow& window) {
  model.validate();
  points_ = checked_grid_points(window);
  dt_ = window.dt;
  if (points_ > kMaxCholeskyPoints)
    throw std::invalid_argument(
        "Cholesky sampler supports grids of at most 4096 points");

  const std::size_t n = points_;
  factor_.assign(n * n, 0.0);
  const double jitter = 1e-12 * model.peak();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      factor_[i * n + j] =
          eval_rho(model, static_cast<double>(i - j) * dt_) +
          (i == j ? jitter : 0.0);

  // In-place lower Cholesky.
  for (std::size_t j = 0; j < n; ++j) {
    double* row_j = factor_.data() + j * n;
    const double pivot = row_j[j] - kernels::dot(row_j, row_j, j);
    if (!(pivot > 0.0))
      throw simulation_error(
          "covariance matrix is not positive definite; the table model is "
          "not a valid covariance function");
    row_j[j] = std::sqrt(pivot);
    for (std::size_t i = j + 1; i < n; ++i) {
      double* row_i = factor_.data() + i * n;
      row_i[j] = (row_i[j] - kernels::dot(row_i, row_j, j)) / row_j[j];
    }
  }
}

SamplePath CholeskySampler::sample(std::uint64_t seed) const {
  const std::size_t n = points_;
  std::vector<double> draws(n);
  rng::GaussianStream normals(seed);
  normals.fill(draws);

  SamplePath path;
  path.dt = dt_;
  path.seed = seed;
  path.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    path.values[i] = kernels::dot(factor_.data() + i * n, draws.data(), i + 1);
  return path;
}

SamplePath simulate_path(const CovarianceModel& model,
                         const ObservationWindow& window, std::uint64_t seed,
                         SamplerMethod method) {
  if (method == SamplerMethod::Cholesky)
    return CholeskySampler(model, window).sample(seed);
  return CirculantSampler(model, window).sample(seed);
}

Correlogram correlogram(const SamplePath& path,
                        const ObservationWindow& window) {
  window.validate();
  if (!(path.dt > 0.0) ||
      std::abs(path.dt - window.dt) > 1e-9 * window.dt)
    throw std::invalid_argument(
        "sample path grid step does not match the observation window");
  const auto steps = static_cast<std::size_t>(window.length_steps());
  const auto lags = static_cast<std::size_t>(window.lag_steps());
  if (path.values.size() < steps + lags + 1)
    throw std::invalid_argument(
        "sample path does not cover [0, T+A] for the requested window");

  const double* x = path.values.data();
  const double scale = window.dt / window.length;
  Correlogram corr;
  corr.dt = window.dt;
  corr.values.resize(lags + 1);
  for (std::size_t k = 0; k <= lags; ++k) {
    const double full = kernels::dot(x, x + k, steps + 1);
    corr.values[k] =
        (full - 0.5 * (x[0] * x[k] + x[steps] * x[steps + k])) * scale;
  }
  return corr;
}

double lp_deviation(const Correlogram& corr, const CovarianceModel& model,
                    double max_lag, double p) {
  model.validate();
  if (!(corr.dt > 0.0) || !std::isfinite(corr.dt))
    throw std::invalid_argument("correlogram grid step must be positive");
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("exponent p must be >= 1");
  if (!std::isfinite(max_lag) || max_lag <= 0.0 ||
      !near_integer(max_lag / corr.dt))
    throw std::invalid_argument(
        "maximum lag A must be a positive multiple of the correlogram grid "
        "step");
  const auto lags = static_cast<std::size_t>(std::llround(max_lag / corr.dt));
  if (corr.values.size() < lags + 1)
    throw std::invalid_argument(
        "correlogram does not cover [0, A] for the requested statistic");

  std::vector<double> powers(lags + 1);
  for (std::size_t k = 0; k <= lags; ++k) {
    const double deviation = std::abs(
        corr.values[k] - eval_rho(model, static_cast<double>(k) * corr.dt));
    if (p == 2.0)
      powers[k] = deviation * deviation;
    else if (p == 1.0)
      powers[k] = deviation;
    else
      powers[k] = std::pow(deviation, p);
  }
  const double total = kernels::sum(powers.data(), lags + 1);
  return (total - 0.5 * (powers.front() + powers.back())) * corr.dt;
}

}  // namespace covtest
