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

#include "covtest/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <thread>
#include <utility>

#include "covtest/io.hpp"
#include "covtest/rng.hpp"

namespace covtest {

void TestConfig::validate() const {
  if (!std::isfinite(delta) || delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("confidence level delta must be in (0, 1)");
  if (!std::isfinite(p) || p < 1.0)
    throw std::invalid_argument("exponent p must be >= 1");
  window.validate();
  null_model.validate();
}

TestDecision run_test(const Correlogram& corr, const TestConfig& config) {
  config.validate();
  TestDecision decision;
  decision.cp =
      lp_tail_constant(config.null_model, config.window, config.p, config.quad);
  const auto threshold =
      decision_threshold(config.delta, TailBoundParams{config.p, decision.cp});
  decision.threshold = threshold.value;
  decision.threshold_branch = threshold.branch;
  decision.epsilon_delta = threshold.epsilon_delta;
  decision.z_p = threshold.validity;
  decision.statistic =
      lp_deviation(corr, config.null_model, config.window.max_lag, config.p);
  decision.accepted = accepts(decision.statistic, decision.threshold);
  return decision;
}

namespace {

// FNV-1a over the knot bytes; keeps table digests content-addressed without
// spelling out every knot.
std::uint64_t table_fingerprint(const std::vector<TableEntry>& table) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  auto mix = [&hash](double value) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &value, sizeof(double));
    for (unsigned char b : bytes) {
      hash ^= b;
      hash *= 0x100000001B3ull;
    }
  };
  for (const auto& entry : table) {
    mix(entry.lag);
    mix(entry.value);
  }
  return hash;
}

std::string describe(const CovarianceModel& model) {
  switch (model.kind) {
    case CovarianceKind::Exponential:
      return "exponential(B=" + io::format17(model.variance) +
             ",a=" + io::format17(model.decay) + ")";
    case CovarianceKind::SquaredExponential:
      return "squared_exponential(B=" + io::format17(model.variance) +
             ",a=" + io::format17(model.decay) + ")";
    case CovarianceKind::Tabulated: {
      char fingerprint[32];
      std::snprintf(fingerprint, sizeof(fingerprint), "%016llx",
                    static_cast<unsigned long long>(
                        table_fingerprint(model.table)));
      return "tabulated(knots=" + std::to_string(model.table.size()) +
             ",fnv=" + fingerprint + ")";
    }
  }
  return "unknown";
}

// Worker count is an execution detail: it must not appear here, the digest
// has to be identical for serial and parallel runs of the same experiment.
std::string make_digest(const CovarianceModel& true_model,
                        const TestConfig& config, std::int64_t replications,
                        std::uint64_t master_seed) {
  std::string digest;
  digest += "true=" + describe(true_model);
  digest += ";null=" + describe(config.null_model);
  digest += ";T=" + io::format17(config.window.length);
  digest += ";A=" + io::format17(config.window.max_lag);
  digest += ";dt=" + io::format17(config.window.dt);
  digest += ";p=" + io::format17(config.p);
  digest += ";delta=" + io::format17(config.delta);
  digest += ";quad=" + std::to_string(config.quad.inner_intervals) + "/" +
            std::to_string(config.quad.outer_intervals);
  digest += ";sampler=circulant";
  digest += ";reps=" + std::to_string(replications);
  digest += ";master_seed=" + std::to_string(master_seed);
  return digest;
}

}  // namespace

MonteCarloReport monte_carlo_level(const CovarianceModel& true_model,
                                   const TestConfig& config,
                                   std::int64_t replications,
                                   std::uint64_t master_seed, int workers) {
  if (replications < 1)
    throw std::invalid_argument("replication count must be at least 1");
  config.validate();
  true_model.validate();

  // Replication-independent quantities, computed once.
  const double cp =
      lp_tail_constant(config.null_model, config.window, config.p, config.quad);
  const double threshold =
      decision_threshold(config.delta, TailBoundParams{config.p, cp}).value;
  const CirculantSampler sampler(true_model, config.window);

  int worker_count = workers > 0
                         ? workers
                         : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::clamp<std::int64_t>(worker_count, 1, replications);

  std::vector<std::int64_t> counts(worker_count, 0);
  // first failed replication per worker: (index, message)
  std::vector<std::pair<std::int64_t, std::string>> failures(
      worker_count, {-1, std::string()});

  auto run_range = [&](int w, std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      try {
        const SamplePath path =
            sampler.sample(rng::substream_seed(master_seed, r));
        const Correlogram corr = correlogram(path, config.window);
        const double stat = lp_deviation(corr, config.null_model,
                                         config.window.max_lag, config.p);
        if (!accepts(stat, threshold)) ++counts[w];
      } catch (const std::exception& e) {
        failures[w] = {r, e.what()};
        return;
      }
    }
  };

  if (worker_count == 1) {
    run_range(0, 0, replications);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) {
      const std::int64_t begin = replications * w / worker_count;
      const std::int64_t end = replications * (w + 1) / worker_count;
      pool.emplace_back(run_range, w, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  std::int64_t first_failure = -1;
  std::string failure_message;
  for (const auto& [index, message] : failures) {
    if (index >= 0 && (first_failure < 0 || index < first_failure)) {
      first_failure = index;
      failure_message = message;
    }
  }
  if (first_failure >= 0)
    throw std::runtime_error("replication " + std::to_string(first_failure) +
                             ": " + failure_message);

  MonteCarloReport report;
  report.replications = replications;
  for (std::int64_t c : counts) report.rejections += c;
  report.rejection_rate = static_cast<double>(report.rejections) /
                          static_cast<double>(replications);
  report.binomial_std_err =
      std::sqrt(report.rejection_rate * (1.0 - report.rejection_rate) /
                static_cast<double>(replications));
  report.config_digest =
      make_digest(true_model, config, replications, master_seed);
  report.master_seed = master_seed;
  return report;
}

std::vector<TailCurvePoint> tail_curve(const TailBoundParams& params,
                                       std::span<const double> epsilons) {
  params.validate();
  const double validity = validity_threshold(params);
  std::vector<TailCurvePoint> points;
  points.reserve(epsilons.size());
  for (double epsilon : epsilons)
    points.push_back(
        {epsilon, tail_bound(epsilon, params), epsilon >= validity});
  return points;
}

}  // namespace covtest
