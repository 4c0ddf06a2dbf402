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

#include "covtest/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace covtest::io {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double parse_field(const std::string& field, const std::string& filename) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error(filename + ": malformed numeric field '" + field +
                             "'");
  return value;
}

// Splits a two-column CSV row; rejects anything that is not exactly two
// fields.
std::pair<double, double> parse_row(const std::string& line,
                                    const std::string& filename) {
  const auto comma = line.find(',');
  if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
    throw std::runtime_error(filename + ": expected two comma-separated fields, got '" +
                             line + "'");
  return {parse_field(line.substr(0, comma), filename),
          parse_field(line.substr(comma + 1), filename)};
}

std::ifstream open_input(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open " + filename);
  return in;
}

std::ofstream open_output(const std::string& filename) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot write " + filename);
  return out;
}

void expect_header(std::ifstream& in, const std::string& expected,
                   const std::string& filename) {
  std::string header;
  if (!std::getline(in, header) || strip_cr(header) != expected)
    throw std::runtime_error(filename + ": expected header '" + expected +
                             "'");
}

}  // namespace

std::string format17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::vector<TableEntry> read_table_csv(const std::string& filename) {
  auto in = open_input(filename);
  expect_header(in, "lag,value", filename);
  std::vector<TableEntry> table;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto [lag, value] = parse_row(line, filename);
    table.push_back({lag, value});
  }
  return table;
}

void write_path_csv(const std::string& filename, const SamplePath& path) {
  auto out = open_output(filename);
  out << "t,x\n";
  for (std::size_t i = 0; i < path.values.size(); ++i)
    out << format17(static_cast<double>(i) * path.dt) << ','
        << format17(path.values[i]) << '\n';
  if (!out) throw std::runtime_error("write failed for " + filename);
}

SamplePath read_path_csv(const std::string& filename) {
  auto in = open_input(filename);
  expect_header(in, "t,x", filename);
  std::vector<double> times;
  SamplePath path;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto [t, x] = parse_row(line, filename);
    times.push_back(t);
    path.values.push_back(x);
  }
  if (path.values.size() < 2)
    throw std::runtime_error(filename + ": need at least two grid points");
  path.dt = times[1] - times[0];
  if (!(path.dt > 0.0))
    throw std::runtime_error(filename + ": time column must be increasing");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = static_cast<double>(i) * path.dt;
    if (std::abs(times[i] - expected) >
        1e-9 * std::max(1.0, std::abs(expected)))
      throw std::runtime_error(filename + ": time grid is not uniform");
    if (!std::isfinite(path.values[i]))
      throw std::runtime_error(filename + ": non-finite sample value");
  }
  return path;
}

void write_correlogram_csv(const std::string& filename,
                           const Correlogram& corr) {
  auto out = open_output(filename);
  out << "lag,rho_hat\n";
  for (std::size_t k = 0; k < corr.values.size(); ++k)
    out << format17(static_cast<double>(k) * corr.dt) << ','
        << format17(corr.values[k]) << '\n';
  if (!out) throw std::runtime_error("write failed for " + filename);
}

void write_tail_curve_csv(const std::string& filename,
                          const std::vector<TailCurvePoint>& points) {
  auto out = open_output(filename);
  out << "epsilon,g,valid\n";
  for (const auto& point : points)
    out << format17(point.epsilon) << ',' << format17(point.bound) << ','
        << (point.valid ? '1' : '0') << '\n';
  if (!out) throw std::runtime_error("write failed for " + filename);
}

}  // namespace covtest::io
