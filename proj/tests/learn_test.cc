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

#include "lshlift/learn.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "lshlift/parallel.h"
#include "test_util.h"

namespace lshlift {
namespace {

struct Clusters {
  std::vector<Vector> points;
  std::vector<int> labels;
};

Clusters two_clusters(std::size_t per_cluster, std::uint64_t seed) {
  Rng rng(seed);
  Clusters c;
  for (int label = 0; label < 2; ++label) {
    const double cx = label == 0 ? -4.0 : 4.0;
    for (std::size_t i = 0; i < per_cluster; ++i) {
      c.points.push_back({cx + 0.5 * rng.normal(), 2.0 + 0.5 * rng.normal()});
      c.labels.push_back(label);
    }
  }
  return c;
}

double split_rate(const Vector& normal, const std::vector<Vector>& pts,
                  const std::vector<IndexPair>& pairs) {
  std::size_t split = 0;
  for (const auto& [a, b] : pairs) {
    split += side_of_origin(normal, pts[a]) != side_of_origin(normal, pts[b]);
  }
  return static_cast<double>(split) / static_cast<double>(pairs.size());
}

LearnerConfig small_config(std::size_t pool, std::size_t bits, std::uint64_t seed) {
  LearnerConfig c;
  c.pool_size = pool;
  c.iterations = 50;
  c.target_bits = bits;
  c.rng_seed = seed;
  return c;
}

TEST(PoolSelect, TwoClustersFavourSeparatingPlanes) {
  const Clusters c = two_clusters(40, 3);
  const TrainingPairs pairs = pairs_from_labels(c.labels, 100000, 1);
  const PoolSelection sel =
      pool_select(small_config(200, 16, 5), c.points, pairs.same, pairs.diff);

  double pool_avg = 0.0;
  for (const auto& n : sel.pool) pool_avg += split_rate(n, c.points, pairs.diff);
  pool_avg /= static_cast<double>(sel.pool.size());
  double chosen_avg = 0.0;
  for (std::size_t i : sel.selected) {
    chosen_avg += split_rate(sel.pool[i], c.points, pairs.diff);
  }
  chosen_avg /= static_cast<double>(sel.selected.size());
  EXPECT_GE(chosen_avg, pool_avg);
  EXPECT_GT(chosen_avg, 0.9);
}

TEST(PoolSelect, FullTargetIsIdentity) {
  const Clusters c = two_clusters(10, 4);
  const TrainingPairs pairs = pairs_from_labels(c.labels, 1000, 1);
  const LearnerConfig cfg = small_config(12, 12, 9);
  const PoolSelection sel = pool_select(cfg, c.points, pairs.same, pairs.diff);
  EXPECT_EQ(learn_pool_select(cfg, c.points, pairs.same, pairs.diff), sel.pool);
}

TEST(PoolSelect, DeterministicAndThreadIndependent) {
  const Clusters c = two_clusters(30, 5);
  const TrainingPairs pairs = pairs_from_labels(c.labels, 500, 2);
  const LearnerConfig cfg = small_config(300, 20, 13);
  set_thread_count(1);
  const auto a = learn_pool_select(cfg, c.points, pairs.same, pairs.diff);
  set_thread_count(4);
  const auto b = learn_pool_select(cfg, c.points, pairs.same, pairs.diff);
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

TEST(PoolSelect, OutputComesFromThePool) {
  const Clusters c = two_clusters(20, 6);
  const TrainingPairs pairs = pairs_from_labels(c.labels, 300, 3);
  const LearnerConfig cfg = small_config(100, 10, 21);
  const PoolSelection sel = pool_select(cfg, c.points, pairs.same, pairs.diff);
  const std::set<Vector> pool(sel.pool.begin(), sel.pool.end());
  const auto out = learn_pool_select(cfg, c.points, pairs.same, pairs.diff);
  ASSERT_EQ(out.size(), 10u);
  for (const auto& v : out) EXPECT_TRUE(pool.contains(v));
  EXPECT_TRUE(std::is_sorted(sel.selected.begin(), sel.selected.end()));
}

TEST(PoolSelect, BeatsRandomSubsets) {
  const Clusters c = two_clusters(30, 7);
  const TrainingPairs pairs = pairs_from_labels(c.labels, 1000, 4);
  const PoolSelection sel =
      pool_select(small_config(200, 12, 2), c.points, pairs.same, pairs.diff);
  double chosen = 0.0;
  for (std::size_t i : sel.selected) chosen += sel.scores[i];

  Rng rng(55);
  int wins = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> idx(sel.pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < 12; ++i) {
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    }
    double random = 0.0;
    for (std::size_t i = 0; i < 12; ++i) random += sel.scores[idx[i]];
    wins += chosen >= random;
  }
  EXPECT_GE(wins, 19);
}

TEST(PoolSelect, RejectsBadInput) {
  const Clusters c = two_clusters(5, 1);
  const std::vector<IndexPair> none;
  const std::vector<IndexPair> bad = {{0, 99}};
  EXPECT_THROW(pool_select(small_config(10, 2, 1), c.points, none, none), Error);
  EXPECT_THROW(pool_select(small_config(10, 2, 1), c.points, bad, none), Error);
  EXPECT_THROW(pool_select(small_config(2, 3, 1), c.points, bad, none), Error);
  LearnerConfig zero_iter = small_config(10, 2, 1);
  zero_iter.iterations = 0;
  EXPECT_THROW(zero_iter.validate(), Error);
}

TEST(PoolLearner, LiftedPlanesCarryOffsets) {
  const Clusters c = two_clusters(40, 8);
  const TrainingPairs pairs = pairs_from_labels(c.labels, 2000, 5);
  const LiftResult r = lift_learner(
      pool_learner(small_config(300, 16, 3), pairs.same, pairs.diff), c.points);
  ASSERT_EQ(r.planes.size(), 16u);
  const bool any_offset = std::any_of(r.planes.begin(), r.planes.end(),
                                      [](const Hyperplane& h) { return std::abs(h.offset()) > 1e-6; });
  EXPECT_TRUE(any_offset);
}

TEST(MeanAbsOffset, Examples) {
  const std::vector<Hyperplane> origin = {Hyperplane({1.0, 0.0}, 0.0),
                                          Hyperplane({0.0, 1.0}, 0.0)};
  EXPECT_EQ(mean_abs_offset(origin), 0.0);
  const std::vector<Hyperplane> offset = {Hyperplane({1.0}, 0.5), Hyperplane({1.0}, -0.5)};
  EXPECT_EQ(mean_abs_offset(offset), 0.5);
  EXPECT_THROW(mean_abs_offset(std::vector<Hyperplane>{}), Error);
}

TEST(PairsFromLabels, EnumeratesSmallSets) {
  const std::vector<int> labels = {0, 1, 0, -1, 1};
  const TrainingPairs p = pairs_from_labels(labels, 100, 0);
  EXPECT_EQ(p.same, (std::vector<IndexPair>{{0, 2}, {1, 4}}));
  EXPECT_EQ(p.diff, (std::vector<IndexPair>{{0, 1}, {0, 4}, {1, 2}, {2, 4}}));
}

TEST(PairsFromLabels, SamplesWhenCapped) {
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) labels.push_back(i % 3);
  const TrainingPairs p = pairs_from_labels(labels, 50, 7);
  ASSERT_EQ(p.same.size(), 50u);
  ASSERT_EQ(p.diff.size(), 50u);
  for (const auto& [a, b] : p.same) {
    EXPECT_LT(a, b);
    EXPECT_EQ(labels[a], labels[b]);
  }
  for (const auto& [a, b] : p.diff) EXPECT_NE(labels[a], labels[b]);
  const TrainingPairs again = pairs_from_labels(labels, 50, 7);
  EXPECT_EQ(p.same, again.same);
  EXPECT_EQ(p.diff, again.diff);
}

TEST(PairsFromRelation, ComplementIsDiff) {
  const std::vector<IndexPair> rel = {{1, 0}, {2, 3}};
  const TrainingPairs p = pairs_from_relation(4, rel, 100, 0);
  EXPECT_EQ(p.same, (std::vector<IndexPair>{{0, 1}, {2, 3}}));
  EXPECT_EQ(p.diff, (std::vector<IndexPair>{{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
  EXPECT_THROW(pairs_from_relation(2, rel, 100, 0), Error);
}

}  // namespace
}  // namespace lshlift
