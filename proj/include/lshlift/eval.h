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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lshlift/core.h"
#include "lshlift/hashing.h"

namespace lshlift {

enum class Split { kLearn, kDatabase, kQuery };

std::string_view to_string(Split split);
/// Accepts learn/database/query (also db, base, q).
Split parse_split(std::string_view text);

/// Vectors with one split designation each; labels are class ids with -1
/// meaning unlabelled (labels may be empty when there are none at all).
/// A vector belongs to exactly one split, so the splits are disjoint.
struct LabeledDataset {
  std::vector<Vector> vectors;
  std::vector<int> labels;
  std::vector<Split> splits;

  void validate() const;
  std::vector<std::size_t> indices(Split split) const;
  std::vector<Vector> subset(Split split) const;
};

/// "Same label" between two dataset indices: either equal class ids or
/// membership in an explicit pairwise relation. The relation form is not
/// transitive.
class SameLabel {
 public:
  static SameLabel from_labels(std::vector<int> labels);
  static SameLabel from_pairs(std::size_t n, std::span<const IndexPair> pairs);

  bool operator()(std::size_t a, std::size_t b) const;
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<int> labels_;
  /// Sorted neighbour lists; symmetric.
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Marks the floor(top_fraction * n(n-1)/2) closest pairs (Euclidean, ties to
/// the lexicographically smaller index pair) as same-label. Returned pairs
/// have first < second and are sorted.
std::vector<IndexPair> auto_label_pairs(std::span<const Vector> data,
                                        double top_fraction);

struct EvalReport {
  std::size_t bit_count = 0;
  double acquisition = 0.0;
  std::size_t k = 0;
  std::size_t queries = 0;
  /// Queries with no same-label database item; left out of recall and
  /// error rate.
  std::size_t queries_without_relevant = 0;
  double precision = 0.0;
  /// Absent when every query lacks a same-label database item.
  std::optional<double> recall;
  std::optional<double> error_rate;
  std::optional<double> pearson_l2_hamming;
};

/// k = ceil(acquisition * |database|), at least 1.
std::size_t acquisition_k(double acquisition, std::size_t database_size);

/// Scores ranked retrieval lists. retrieved[q] lists database positions
/// returned for query q; `query_ids`/`database_ids` map positions to the
/// indices `same` understands.
EvalReport score_retrieval(const std::vector<std::vector<std::size_t>>& retrieved,
                           std::span<const std::size_t> query_ids,
                           std::span<const std::size_t> database_ids,
                           const SameLabel& same);

/// Hamming top-k retrieval of every query against the database split and
/// its precision, recall and error rate.
EvalReport evaluate(const HashModel& model, const LabeledDataset& dataset,
                    double acquisition, const SameLabel& same);

/// The L2 baseline: exact Euclidean top-k in the model's projected space.
EvalReport evaluate_l2(const PreprocessParams& preprocess,
                       const LabeledDataset& dataset, double acquisition,
                       const SameLabel& same);

struct Correlation {
  double pearson = 0.0;
  /// (l2, hamming) for each sampled pair.
  std::vector<std::pair<double, std::size_t>> scatter;
};

/// Pearson correlation between input-space Euclidean distance and Hamming
/// distance of the codes, over n_pairs random pairs of distinct indices.
Correlation correlate(const HashModel& model, std::span<const Vector> data,
                      std::size_t n_pairs, std::uint64_t rng_seed);

double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace lshlift
