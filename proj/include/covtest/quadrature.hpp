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

#ifndef COVTEST_QUADRATURE_HPP
#define COVTEST_QUADRATURE_HPP

#include <stdexcept>
#include <vector>

#include "covtest/kernels.hpp"

namespace covtest {

// Resolution of the nested composite-Simpson rules. Defaults are set so that
// doubling either count moves the lag-integral results by less than 1e-6
// relative for the analytic covariance kinds.
struct QuadratureSpec {
  int inner_intervals = 4096;  // u over [0, T]
  int outer_intervals = 1024;  // tau over [0, A]
  // Integrate the inner variance integral numerically even for covariance
  // kinds that have an exact closed form (used to cross-check the two paths).
  bool force_inner_quadrature = false;
};

namespace quadrature {

// Composite Simpson rule with `intervals` uniform subdivisions (even, >= 2).
template <class F>
double simpson(F&& f, double lo, double hi, int intervals) {
  if (intervals < 2 || intervals % 2 != 0)
    throw std::invalid_argument(
        "simpson: interval count must be even and at least 2");
  if (!(hi >= lo)) throw std::invalid_argument("simpson: inverted range");
  const auto n = static_cast<std::size_t>(intervals);
  const double h = (hi - lo) / intervals;
  std::vector<double> values(n + 1);
  std::vector<double> weights(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + h * static_cast<double>(i);
    values[i] = f(x);
    weights[i] = (i == 0 || i == n) ? h / 3.0
                 : (i % 2 == 1)     ? 4.0 * h / 3.0
                                    : 2.0 * h / 3.0;
  }
  return kernels::dot(values.data(), weights.data(), n + 1);
}

}  // namespace quadrature
}  // namespace covtest

#endif  // COVTEST_QUADRATURE_HPP
