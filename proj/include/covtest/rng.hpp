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

#ifndef COVTEST_RNG_HPP
#define COVTEST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace covtest::rng {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Stream splitting: replication r of a Monte Carlo run is seeded with
// substream_seed(master, r), the splitmix64 finalizer applied to the master
// seed advanced r+1 golden-ratio increments. The derivation depends only on
// (master, r), so results are invariant to how replications are scheduled
// across workers.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

// Standard normal draws from a fully pinned algorithm: mt19937_64 (specified
// by the standard bit-for-bit) feeding an explicit Box-Muller transform.
// std::normal_distribution is implementation-defined and would break
// reproducibility of stored seeds across toolchains.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  void fill(std::span<double> out) {
    for (double& v : out) v = next();
  }

 private:
  // 53-bit mantissa, offset by half a step so the result lies in (0, 1).
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace covtest::rng

#endif  // COVTEST_RNG_HPP
