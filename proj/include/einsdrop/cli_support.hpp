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
#pragma once

#include <map>
#include <string>
#include <vector>

namespace einsdrop::cli {

/// Angle in radians from "0.5", "pi", "pi/4", "3pi/4", "2*pi/3", "-pi/2".
double parse_angle(const std::string& text);

/// "a,b,c" -> numbers; throws std::invalid_argument on junk.
std::vector<double> parse_double_list(const std::string& text);
std::vector<long long> parse_int_list(const std::string& text);

/// "start:stop[:step]" inclusive grid.
std::vector<double> parse_double_grid(const std::string& text);
std::vector<long long> parse_int_grid(const std::string& text);

/// Flat "key = value" file with '#' comments. Keys starting with
/// "manifest_" are informational and skipped, so a manifest can be fed back
/// as a config.
std::map<std::string, std::string> load_kv_file(const std::string& path);

/// Shortest round-trip-exact decimal form (17 significant digits).
std::string fmt_double(double v);

}  // namespace einsdrop::cli
