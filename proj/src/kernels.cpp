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

#include "covtest/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace covtest::kernels {

namespace detail {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void mul_inplace_scalar(double* x, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= y[i];
}

#ifdef COVTEST_HAVE_AVX2
double dot_avx2(const double* x, const double* y, std::size_t n);
double sum_avx2(const double* x, std::size_t n);
void mul_inplace_avx2(double* x, const double* y, std::size_t n);
#endif

}  // namespace detail

namespace {

struct Dispatch {
  Backend which;
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*mul_inplace)(double*, const double*, std::size_t);
};

constexpr Dispatch kScalar{Backend::Scalar, detail::dot_scalar,
                           detail::sum_scalar, detail::mul_inplace_scalar};

#ifdef COVTEST_HAVE_AVX2
constexpr Dispatch kAvx2{Backend::Avx2, detail::dot_avx2, detail::sum_avx2,
                         detail::mul_inplace_avx2};
#endif

bool cpu_has_avx2() {
#if defined(COVTEST_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Dispatch detect() {
  const char* env = std::getenv("COVTEST_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return kScalar;
#ifdef COVTEST_HAVE_AVX2
  if (cpu_has_avx2()) return kAvx2;
#endif
  return kScalar;
}

Dispatch& active() {
  static Dispatch d = detect();
  return d;
}

}  // namespace

Backend active_backend() { return active().which; }

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument(std::string("kernel backend unavailable: ") +
                                backend_name(b));
  switch (b) {
    case Backend::Scalar:
      active() = kScalar;
      break;
    case Backend::Avx2:
#ifdef COVTEST_HAVE_AVX2
      active() = kAvx2;
#endif
      break;
  }
}

double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}

double sum(const double* x, std::size_t n) { return active().sum(x, n); }

void mul_inplace(double* x, const double* y, std::size_t n) {
  active().mul_inplace(x, y, n);
}

}  // namespace covtest::kernels
