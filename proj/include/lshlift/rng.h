// Copyright 2026 The lshlift Authors
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

namespace lshlift {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream `stream` of `seed`. Every randomized operation draws
/// item i (hyperplane i, sample i, candidate i) from its own substream, so
/// item i does not depend on how many items are requested or how the work
/// is split across threads.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** seeded through splitmix64. Normal deviates use the
/// Marsaglia polar method so the stream is identical on every platform
/// (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);
  double normal();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lshlift
