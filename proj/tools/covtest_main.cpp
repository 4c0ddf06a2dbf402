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

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "covtest/covariance.hpp"
#include "covtest/criterion.hpp"
#include "covtest/io.hpp"
#include "covtest/simulate.hpp"
#include "covtest/tailbound.hpp"

namespace {

using covtest::io::format17;

// Exit codes: 0 success/ACCEPT, 1 REJECT, 2 usage or computation error.
constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

struct RunManifest {
  std::string model = "exp";
  double B = 1.0;
  double a = 1.0;
  std::string table;
  double T = 0.0;
  double A = 0.0;
  double dt = 0.0;  // 0 = auto-select for analytic models
  double p = 2.0;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::int64_t reps = 1000;
  int workers = 0;
  int points = 200;
  std::string out;
  std::string path_csv;
};

void apply_manifest_file(RunManifest& m, const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open manifest " + filename);
  nlohmann::json j;
  in >> j;
  if (j.contains("model")) m.model = j.at("model").get<std::string>();
  if (j.contains("B")) m.B = j.at("B").get<double>();
  if (j.contains("a")) m.a = j.at("a").get<double>();
  if (j.contains("table")) m.table = j.at("table").get<std::string>();
  if (j.contains("T")) m.T = j.at("T").get<double>();
  if (j.contains("A")) m.A = j.at("A").get<double>();
  if (j.contains("dt")) m.dt = j.at("dt").get<double>();
  if (j.contains("p")) m.p = j.at("p").get<double>();
  if (j.contains("delta")) m.delta = j.at("delta").get<double>();
  if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("reps")) m.reps = j.at("reps").get<std::int64_t>();
  if (j.contains("workers")) m.workers = j.at("workers").get<int>();
  if (j.contains("points")) m.points = j.at("points").get<int>();
  if (j.contains("out")) m.out = j.at("out").get<std::string>();
  if (j.contains("path")) m.path_csv = j.at("path").get<std::string>();
}

// Per-subcommand option set. Flags override manifest values, which override
// the defaults.
struct ManifestOptions {
  RunManifest flags;
  std::string manifest_file;
  CLI::Option* model = nullptr;
  CLI::Option* B = nullptr;
  CLI::Option* a = nullptr;
  CLI::Option* table = nullptr;
  CLI::Option* T = nullptr;
  CLI::Option* A = nullptr;
  CLI::Option* dt = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* delta = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* reps = nullptr;
  CLI::Option* workers = nullptr;
  CLI::Option* points = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* manifest = nullptr;

  void attach(CLI::App* cmd) {
    model = cmd->add_option("--model", flags.model,
                            "covariance model: exp|sqexp|table");
    B = cmd->add_option("--B", flags.B, "variance scale B (analytic models)");
    a = cmd->add_option("--a", flags.a, "decay rate a (analytic models)");
    table = cmd->add_option("--table", flags.table,
                            "CSV file with lag,value knots (table model)");
    T = cmd->add_option("--T", flags.T, "observation length T");
    A = cmd->add_option("--A", flags.A, "maximum tested lag A");
    dt = cmd->add_option("--dt", flags.dt,
                         "grid step (default: 0.05/a for analytic models)");
    p = cmd->add_option("--p", flags.p, "L_p exponent, >= 1");
    delta = cmd->add_option("--delta", flags.delta,
                            "confidence level, in (0,1)");
    seed = cmd->add_option("--seed", flags.seed, "64-bit seed");
    reps = cmd->add_option("--reps", flags.reps, "Monte Carlo replications");
    workers =
        cmd->add_option("--workers", flags.workers,
                        "worker threads for mc-level (0 = hardware)");
    points = cmd->add_option("--points", flags.points,
                             "grid size for tail-curve output");
    out = cmd->add_option("--out", flags.out, "output file");
    manifest = cmd->add_option("--manifest", manifest_file,
                               "JSON manifest; explicit flags override it");
  }

  RunManifest resolve() const {
    RunManifest final;
    if (manifest->count() > 0) apply_manifest_file(final, manifest_file);
    if (model->count() > 0) final.model = flags.model;
    if (B->count() > 0) final.B = flags.B;
    if (a->count() > 0) final.a = flags.a;
    if (table->count() > 0) final.table = flags.table;
    if (T->count() > 0) final.T = flags.T;
    if (A->count() > 0) final.A = flags.A;
    if (dt->count() > 0) final.dt = flags.dt;
    if (p->count() > 0) final.p = flags.p;
    if (delta->count() > 0) final.delta = flags.delta;
    if (seed->count() > 0) final.seed = flags.seed;
    if (reps->count() > 0) final.reps = flags.reps;
    if (workers->count() > 0) final.workers = flags.workers;
    if (points->count() > 0) final.points = flags.points;
    if (out->count() > 0) final.out = flags.out;
    return final;
  }
};

covtest::CovarianceModel make_model(const RunManifest& m) {
  if (m.model == "exp") return covtest::CovarianceModel::exponential(m.B, m.a);
  if (m.model == "sqexp")
    return covtest::CovarianceModel::squared_exponential(m.B, m.a);
  if (m.model == "table") {
    if (m.table.empty())
      throw std::invalid_argument("--table is required for --model table");
    return covtest::CovarianceModel::tabulated(
        covtest::io::read_table_csv(m.table));
  }
  throw std::invalid_argument("--model must be one of exp|sqexp|table");
}

double resolve_dt(const RunManifest& m, const covtest::CovarianceModel& model) {
  if (m.dt != 0.0) return m.dt;
  if (model.kind == covtest::CovarianceKind::Tabulated)
    throw std::invalid_argument("--dt is required for table models");
  if (!(m.A > 0.0))
    throw std::invalid_argument("--A must be positive");
  const double target = std::min(0.05 / model.decay, m.A);
  const double dt = m.A / std::ceil(m.A / target);
  const double ratio = m.T / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument(
        "auto-selected --dt does not divide --T; pass --dt explicitly");
  return dt;
}

covtest::ObservationWindow make_window(const RunManifest& m,
                                       const covtest::CovarianceModel& model) {
  covtest::ObservationWindow window;
  window.length = m.T;
  window.max_lag = m.A;
  window.dt = resolve_dt(m, model);
  window.validate();
  return window;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

const char* branch_name(covtest::ThresholdBranch branch) {
  return branch == covtest::ThresholdBranch::FromRoot ? "FromRoot"
                                                      : "FromValidity";
}

void emit(const RunManifest& m, const std::string& text) {
  std::cout << text;
  if (!m.out.empty()) {
    std::ofstream out(m.out);
    if (!out) throw std::runtime_error("cannot write " + m.out);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + m.out);
  }
}

int run_threshold(const RunManifest& m) {
  const auto model = make_model(m);
  const double cp =
      covtest::lp_tail_constant(model, m.T, m.A, m.p, covtest::QuadratureSpec{});
  const auto threshold =
      covtest::decision_threshold(m.delta, covtest::TailBoundParams{m.p, cp});

  std::cout << "cp = " << format17(cp) << '\n'
            << "z_p = " << format17(threshold.validity) << '\n'
            << "epsilon_delta = " << format17(threshold.epsilon_delta) << '\n'
            << "s_delta = " << format17(threshold.value) << '\n'
            << "threshold_branch = " << branch_name(threshold.branch) << '\n';

  if (!m.out.empty()) {
    std::string j;
    j += "{\n";
    j += "  \"cp\": " + format17(cp) + ",\n";
    j += "  \"z_p\": " + format17(threshold.validity) + ",\n";
    j += "  \"epsilon_delta\": " + format17(threshold.epsilon_delta) + ",\n";
    j += "  \"s_delta\": " + format17(threshold.value) + ",\n";
    j += "  \"threshold_branch\": \"" + std::string(branch_name(threshold.branch)) +
         "\"\n";
    j += "}\n";
    std::ofstream out(m.out);
    if (!out) throw std::runtime_error("cannot write " + m.out);
    out << j;
    if (!out) throw std::runtime_error("write failed for " + m.out);
  }
  return kExitAccept;
}

int run_simulate(const RunManifest& m) {
  if (m.out.empty())
    throw std::invalid_argument("--out is required for simulate");
  const auto model = make_model(m);
  const auto window = make_window(m, model);
  const auto path = covtest::simulate_path(model, window, m.seed);
  covtest::io::write_path_csv(m.out, path);
  std::cout << "wrote " << path.values.size() << " samples to " << m.out
            << '\n';
  return kExitAccept;
}

int run_test(const RunManifest& m) {
  if (m.path_csv.empty())
    throw std::invalid_argument("test needs a sample path CSV argument");
  auto path = covtest::io::read_path_csv(m.path_csv);

  RunManifest resolved = m;
  if (resolved.dt == 0.0) resolved.dt = path.dt;
  const auto model = make_model(resolved);
  covtest::ObservationWindow window;
  window.length = resolved.T;
  window.max_lag = resolved.A;
  window.dt = resolved.dt;
  window.validate();

  covtest::TestConfig config;
  config.delta = resolved.delta;
  config.p = resolved.p;
  config.window = window;
  config.null_model = model;

  const auto corr = covtest::correlogram(path, window);
  const auto decision = covtest::run_test(corr, config);

  std::cout << "statistic = " << format17(decision.statistic) << '\n'
            << "s_delta = " << format17(decision.threshold) << '\n'
            << "epsilon_delta = " << format17(decision.epsilon_delta) << '\n'
            << "z_p = " << format17(decision.z_p) << '\n'
            << "cp = " << format17(decision.cp) << '\n'
            << "threshold_branch = " << branch_name(decision.threshold_branch)
            << '\n'
            << "verdict = " << (decision.accepted ? "ACCEPT" : "REJECT")
            << '\n';

  if (!resolved.out.empty()) {
    std::string j;
    j += "{\n";
    j += "  \"statistic\": " + format17(decision.statistic) + ",\n";
    j += "  \"threshold\": " + format17(decision.threshold) + ",\n";
    j += "  \"accepted\": " + std::string(decision.accepted ? "true" : "false") +
         ",\n";
    j += "  \"epsilon_delta\": " + format17(decision.epsilon_delta) + ",\n";
    j += "  \"z_p\": " + format17(decision.z_p) + ",\n";
    j += "  \"cp\": " + format17(decision.cp) + ",\n";
    j += "  \"threshold_branch\": \"" +
         std::string(branch_name(decision.threshold_branch)) + "\"\n";
    j += "}\n";
    std::ofstream out(resolved.out);
    if (!out) throw std::runtime_error("cannot write " + resolved.out);
    out << j;
    if (!out) throw std::runtime_error("write failed for " + resolved.out);
  }
  return decision.accepted ? kExitAccept : kExitReject;
}

int run_mc_level(const RunManifest& m) {
  const auto model = make_model(m);
  const auto window = make_window(m, model);

  covtest::TestConfig config;
  config.delta = m.delta;
  config.p = m.p;
  config.window = window;
  config.null_model = model;

  const auto report = covtest::monte_carlo_level(model, config, m.reps, m.seed,
                                                 m.workers);
  std::string j;
  j += "{\n";
  j += "  \"replications\": " + std::to_string(report.replications) + ",\n";
  j += "  \"rejections\": " + std::to_string(report.rejections) + ",\n";
  j += "  \"rejection_rate\": " + format17(report.rejection_rate) + ",\n";
  j += "  \"binomial_std_err\": " + format17(report.binomial_std_err) + ",\n";
  j += "  \"config_digest\": \"" + json_escape(report.config_digest) + "\",\n";
  j += "  \"master_seed\": " + std::to_string(report.master_seed) + "\n";
  j += "}\n";
  emit(m, j);
  return kExitAccept;
}

int run_tail_curve(const RunManifest& m) {
  const auto model = make_model(m);
  const double cp =
      covtest::lp_tail_constant(model, m.T, m.A, m.p, covtest::QuadratureSpec{});
  const covtest::TailBoundParams params{m.p, cp};
  const double z = covtest::validity_threshold(params);
  if (m.points < 2)
    throw std::invalid_argument("--points must be at least 2");

  std::vector<double> epsilons(m.points);
  const double span = 1000.0;
  for (int i = 0; i < m.points; ++i)
    epsilons[i] =
        z * std::pow(span, static_cast<double>(i) / (m.points - 1));
  const auto curve = covtest::tail_curve(params, epsilons);

  std::string text = "epsilon,g,valid\n";
  for (const auto& point : curve)
    text += format17(point.epsilon) + "," + format17(point.bound) + "," +
            (point.valid ? "1" : "0") + "\n";
  emit(m, text);
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Hypothesis testing for the covariance function of a stationary "
      "Gaussian process"};
  app.require_subcommand(1);

  ManifestOptions threshold_opts, simulate_opts, test_opts, mc_opts,
      curve_opts;

  auto* cmd_threshold = app.add_subcommand(
      "threshold", "compute C_p, z_p, epsilon_delta and S_delta");
  threshold_opts.attach(cmd_threshold);

  auto* cmd_simulate = app.add_subcommand(
      "simulate", "simulate a stationary Gaussian sample path to CSV");
  simulate_opts.attach(cmd_simulate);

  auto* cmd_test = app.add_subcommand(
      "test", "run the hypothesis test on a stored sample path");
  test_opts.attach(cmd_test);
  std::string path_csv;
  auto* path_arg =
      cmd_test->add_option("path", path_csv, "sample path CSV (t,x)");

  auto* cmd_mc = app.add_subcommand(
      "mc-level", "Monte Carlo estimate of the rejection rate");
  mc_opts.attach(cmd_mc);

  auto* cmd_curve = app.add_subcommand(
      "tail-curve", "tabulate the tail bound on a geometric epsilon grid");
  curve_opts.attach(cmd_curve);

  try {
    app.parse(argc, argv);
    if (cmd_threshold->parsed()) return run_threshold(threshold_opts.resolve());
    if (cmd_simulate->parsed()) return run_simulate(simulate_opts.resolve());
    if (cmd_test->parsed()) {
      RunManifest m = test_opts.resolve();
      if (path_arg->count() > 0) m.path_csv = path_csv;
      return run_test(m);
    }
    if (cmd_mc->parsed()) return run_mc_level(mc_opts.resolve());
    if (cmd_curve->parsed()) return run_tail_curve(curve_opts.resolve());
    return kExitError;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
