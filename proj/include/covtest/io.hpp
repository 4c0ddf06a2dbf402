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

#ifndef COVTEST_IO_HPP
#define COVTEST_IO_HPP

#include <string>
#include <vector>

#include "covtest/covariance.hpp"
#include "covtest/criterion.hpp"
#include "covtest/simulate.hpp"

namespace covtest::io {

// All floating-point output carries 17 significant digits so repeated runs
// are byte-comparable and values round-trip exactly.
std::string format17(double value);

// Tabulated covariance input: header "lag,value", lags strictly increasing
// from 0.
std::vector<TableEntry> read_table_csv(const std::string& filename);

// Sample path files: header "t,x", one row per grid point.
void write_path_csv(const std::string& filename, const SamplePath& path);
SamplePath read_path_csv(const std::string& filename);

// Correlogram files: header "lag,rho_hat".
void write_correlogram_csv(const std::string& filename,
                           const Correlogram& corr);

// Tail curve files: header "epsilon,g,valid" with valid in {0, 1}.
void write_tail_curve_csv(const std::string& filename,
                          const std::vector<TailCurvePoint>& points);

}  // namespace covtest::io

#endif  // COVTEST_IO_HPP
