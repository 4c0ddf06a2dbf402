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

#ifndef COVTEST_SIMULATE_HPP
#define COVTEST_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "covtest/covariance.hpp"

namespace covtest {

// The circulant embedding of the requested covariance is not positive
// semidefinite beyond tolerance.
class embedding_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The dense fallback factorization failed (non-PSD table model).
class simulation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SamplePath {
  double dt = 0.0;
  std::vector<double> values;  // X(i*dt), i = 0..N-1 covering [0, T+A]
  std::optional<std::uint64_t> seed;
};

struct Correlogram {
  double dt = 0.0;
  std::vector<double> values;  // estimate at lag k*dt, k = 0..A/dt
};

enum class SamplerMethod { Circulant, Cholesky };

/// Exact stationary Gaussian sampling on the window grid via circulant
/// embedding: the covariance sequence is embedded into a circulant of length
/// 2(N-1) padded to the next power of two and diagonalized by FFT.
/// Eigenvalues below -1e-9 * lambda_max raise embedding_error (enlarging the
/// window or switching to the Cholesky sampler are the ways out); negative
/// round-off above that is clipped to zero.
class CirculantSampler {
 public:
  CirculantSampler(const CovarianceModel& model,
                   const ObservationWindow& window);

  // Deterministic in (model, window, seed); thread-safe.
  SamplePath sample(std::uint64_t seed) const;

  std::size_t embedding_size() const { return size_; }

 private:
  double dt_ = 0.0;
  std::size_t points_ = 0;
  std::size_t size_ = 0;                // embedding length, power of two
  std::vector<double> spectral_scale_;  // sqrt(lambda_k / M), interleaved re/im
};

/// Dense fallback for grids of at most 4096 points: Cholesky factor of the
/// covariance matrix with diagonal jitter 1e-12 * rho(0).
class CholeskySampler {
 public:
  CholeskySampler(const CovarianceModel& model,
                  const ObservationWindow& window);

  SamplePath sample(std::uint64_t seed) const;

 private:
  double dt_ = 0.0;
  std::size_t points_ = 0;
  std::vector<double> factor_;  // row-major lower triangle
};

SamplePath simulate_path(const CovarianceModel& model,
                         const ObservationWindow& window, std::uint64_t seed,
                         SamplerMethod method = SamplerMethod::Circulant);

/// Correlogram on the lag grid k*dt, k = 0..A/dt:
///   (1/T) * trapezoid over t in [0, T] of X(t + lag) * X(t).
Correlogram correlogram(const SamplePath& path,
                        const ObservationWindow& window);

/// L_p deviation statistic, trapezoid rule on the lag grid:
///   integral_0^A |corr(tau) - rho(tau)|^p dtau.
/// The absolute value makes the statistic meaningful for every p >= 1 (it
/// matches the plain power for even integer p).
double lp_deviation(const Correlogram& corr, const CovarianceModel& model,
                    double max_lag, double p);

}  // namespace covtest

#endif  // COVTEST_SIMULATE_HPP
