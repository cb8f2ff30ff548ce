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

#include <cstdint>
#include <random>

#include "einsdrop/types.hpp"

namespace einsdrop {

/// Seedable, splittable random stream. All variates are derived from
/// std::mt19937_64 with hand-rolled transforms, so identical seeds give
/// bitwise-identical sequences on every platform.
///
/// split(i) derives an independent child stream from the *root seed* only;
/// it does not consume or depend on the draw position of the parent. Work
/// units that may run concurrently must each own their own split.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Child stream keyed by (root seed, stream id).
  RngStream split(std::uint64_t stream_id) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform01();

  /// Standard normal (Box-Muller; one spare cached).
  double gaussian();

  /// Independent standard normals in the real and imaginary parts.
  Complex complex_gaussian();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace einsdrop
