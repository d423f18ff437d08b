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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lshlift/core.h"
#include "lshlift/preprocess.h"

namespace lshlift {

/// Everything needed to encode a raw vector: preprocessing state plus the
/// ordered hyperplanes (bit i comes from hyperplanes[i]).
struct HashModel {
  std::vector<Hyperplane> hyperplanes;
  PreprocessParams preprocess;
  std::uint64_t seed = 0;
  /// Free-form tag naming how the planes were produced ("lsh-lift", ...).
  std::string method;

  std::size_t bit_count() const noexcept { return hyperplanes.size(); }
  std::size_t input_dim() const noexcept { return preprocess.input_dim(); }

  /// Throws if any plane's dimension differs from preprocess.output_dim.
  void validate() const;

  friend bool operator==(const HashModel&, const HashModel&) = default;
};

/// Bit i = side_of(hyperplanes[i], transform(preprocess, raw)).
BitCode encode(const HashModel& model, std::span<const double> raw);

/// Encodes points that are already in the model's projected space.
BitCode encode_projected(std::span<const Hyperplane> planes,
                         std::span<const double> projected);

/// Element-wise encode, order preserving. Failures name the offending index.
std::vector<BitCode> encode_all(const HashModel& model,
                                std::span<const Vector> data);

struct Neighbor {
  std::size_t index = 0;
  std::size_t distance = 0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct L2Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
  friend bool operator==(const L2Neighbor&, const L2Neighbor&) = default;
};

/// Exact top-k by Hamming distance, ascending; equal distances are ordered
/// by database index, and exactly k results are returned.
std::vector<Neighbor> search(const BitCode& query, std::span<const BitCode> db,
                             std::size_t k);

/// Exact top-k by Euclidean distance with the same ordering rule.
std::vector<L2Neighbor> l2_search(std::span<const double> query,
                                  std::span<const Vector> db, std::size_t k);

/// search() for every query, parallel across queries.
std::vector<std::vector<Neighbor>> search_all(std::span<const BitCode> queries,
                                              std::span<const BitCode> db,
                                              std::size_t k);

std::vector<std::vector<L2Neighbor>> l2_search_all(
    std::span<const Vector> queries, std::span<const Vector> db,
    std::size_t k);

}  // namespace lshlift
