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

// Reference origin-crossing learner. It is a stand-in for feature-selection
// style hash learners: sample a large pool of random directions, score each
// by how well it separates labelled pairs, keep the best. It ignores offsets
// entirely, which makes it a fair demonstration of what lifting adds.
//
// Other learners (for example minimal-loss hashing) plug in the same way:
// wrap them as an OriginLearner and pass them to lift_learner.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lshlift/core.h"
#include "lshlift/lift.h"

namespace lshlift {

struct LearnerConfig {
  std::size_t pool_size = 10000;
  std::size_t iterations = 10000;
  std::size_t target_bits = 32;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Pair batch size per iteration is min(kMaxBatch, available pairs).
inline constexpr std::size_t kMaxBatch = 1024;

struct PoolSelection {
  /// All sampled candidates, in sampling order.
  std::vector<Vector> pool;
  /// Mean over iterations of (diff-label split rate - same-label split rate).
  std::vector<double> scores;
  /// Indices into pool of the kept candidates, ascending.
  std::vector<std::size_t> selected;
};

/// Samples pool_size unit normals, scores them over `iterations` batches of
/// resampled pairs and keeps the target_bits best (ties to the lower pool
/// index). A pair is split by a plane when its two points fall on opposite
/// sides. Deterministic for a given config.
PoolSelection pool_select(const LearnerConfig& config,
                          std::span<const Vector> learning_data,
                          std::span<const IndexPair> same_label_pairs,
                          std::span<const IndexPair> diff_label_pairs);

/// Selected unit normals in pool order.
std::vector<Vector> learn_pool_select(const LearnerConfig& config,
                                      std::span<const Vector> learning_data,
                                      std::span<const IndexPair> same_label_pairs,
                                      std::span<const IndexPair> diff_label_pairs);

/// learn_pool_select as a plug-in. Pair indices refer to the points the
/// learner is handed, which lift_learner passes through in order.
OriginLearner pool_learner(LearnerConfig config,
                           std::vector<IndexPair> same_label_pairs,
                           std::vector<IndexPair> diff_label_pairs);

/// Mean of |offset| over the planes. Throws on an empty list.
double mean_abs_offset(std::span<const Hyperplane> planes);

struct TrainingPairs {
  std::vector<IndexPair> same;
  std::vector<IndexPair> diff;
};

/// Builds same/different pairs from class labels (-1 = unlabelled, never
/// paired). Each list is capped at max_pairs by seeded sampling.
TrainingPairs pairs_from_labels(std::span<const int> labels,
                                std::size_t max_pairs, std::uint64_t seed);

/// Same pairs from an explicit relation on n points; different pairs are
/// sampled from its complement. Each list is capped at max_pairs.
TrainingPairs pairs_from_relation(std::size_t n,
                                  std::span<const IndexPair> relation,
                                  std::size_t max_pairs, std::uint64_t seed);

}  // namespace lshlift
