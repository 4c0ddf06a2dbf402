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

#ifndef COVTEST_KERNELS_HPP
#define COVTEST_KERNELS_HPP

#include <cstddef>

namespace covtest::kernels {

enum class Backend { Scalar, Avx2 };

// Backend selected at first use: AVX2+FMA when the CPU supports it and the
// build carries the AVX2 translation unit, scalar otherwise. The environment
// variable COVTEST_KERNELS=scalar|avx2 overrides detection.
Backend active_backend();

// Test hook. Throws std::invalid_argument if the backend is unavailable.
// Not safe to call concurrently with kernel invocations.
void force_backend(Backend b);

bool backend_available(Backend b);
const char* backend_name(Backend b);

double dot(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
void mul_inplace(double* x, const double* y, std::size_t n);

}  // namespace covtest::kernels

#endif  // COVTEST_KERNELS_HPP
