// Copyright 2026 The einsdrop authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "einsdrop/cli_support.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace einsdrop::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_plain_double(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse number '" + text + "'");
  }
  if (pos != text.size())
    throw std::invalid_argument(what + ": trailing junk in '" + text + "'");
  return v;
}

long long parse_plain_int(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse integer '" + text +
                                "'");
  }
  if (pos != text.size())
    throw std::invalid_argument(what + ": trailing junk in '" + text + "'");
  return v;
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.push_back("");
  return parts;
}

}  // namespace

double parse_angle(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("angle: empty string");

  const std::size_t pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) return parse_plain_double(s, "angle");

  // [coefficient][*]pi[/divisor]
  std::string coef_text = trim(s.substr(0, pi_pos));
  if (!coef_text.empty() && coef_text.back() == '*')
    coef_text = trim(coef_text.substr(0, coef_text.size() - 1));
  double coef = 1.0;
  if (coef_text == "-")
    coef = -1.0;
  else if (!coef_text.empty())
    coef = parse_plain_double(coef_text, "angle");

  std::string rest = trim(s.substr(pi_pos + 2));
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/')
      throw std::invalid_argument("angle: expected '/divisor' after pi in '" +
                                  text + "'");
    divisor = parse_plain_double(trim(rest.substr(1)), "angle");
    if (divisor == 0.0) throw std::invalid_argument("angle: division by zero");
  }
  return coef * std::numbers::pi / divisor;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_on(text, ','))
    out.push_back(parse_plain_double(item, "list"));
  return out;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  for (const std::string& item : split_on(text, ','))
    out.push_back(parse_plain_int(item, "list"));
  return out;
}

std::vector<double> parse_double_grid(const std::string& text) {
  const std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw std::invalid_argument("grid: expected start:stop[:step], got '" +
                                text + "'");
  const double start = parse_plain_double(parts[0], "grid");
  const double stop = parse_plain_double(parts[1], "grid");
  const double step =
      parts.size() == 3 ? parse_plain_double(parts[2], "grid") : 1.0;
  if (step <= 0.0) throw std::invalid_argument("grid: step must be positive");
  if (stop < start) throw std::invalid_argument("grid: stop before start");
  std::vector<double> out;
  const long long count =
      static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
  for (long long i = 0; i < count; ++i) out.push_back(start + i * step);
  return out;
}

std::vector<long long> parse_int_grid(const std::string& text) {
  const std::vector<std::string> parts = split_on(text, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw std::invalid_argument("grid: expected start:stop[:step], got '" +
                                text + "'");
  const long long start = parse_plain_int(parts[0], "grid");
  const long long stop = parse_plain_int(parts[1], "grid");
  const long long step =
      parts.size() == 3 ? parse_plain_int(parts[2], "grid") : 1;
  if (step <= 0) throw std::invalid_argument("grid: step must be positive");
  if (stop < start) throw std::invalid_argument("grid: stop before start");
  std::vector<long long> out;
  for (long long v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

std::map<std::string, std::string> load_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(lineno) + ": empty key");
    if (key.rfind("manifest_", 0) == 0) continue;
    out[key] = value;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace einsdrop::cli
