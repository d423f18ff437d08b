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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>

#include "lshlift/parallel.h"
#include "lshlift/rng.h"

namespace lshlift {

namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

IndexPair ordered(std::size_t a, std::size_t b) {
  return a < b ? IndexPair{a, b} : IndexPair{b, a};
}

// Pair multiplicities accumulated over all iterations. Summing per-pair
// counts gives exactly the per-iteration batch scores, without rescanning
// the batches for every candidate.
struct BatchCounts {
  std::vector<std::size_t> pair_index;
  std::vector<std::uint64_t> count;
  std::size_t batch = 0;
};

BatchCounts accumulate_batches(std::size_t n_pairs, std::size_t iterations,
                               Rng& rng) {
  BatchCounts out;
  if (n_pairs == 0) return out;
  out.batch = std::min(kMaxBatch, n_pairs);
  std::vector<std::uint64_t> counts(n_pairs, 0);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t b = 0; b < out.batch; ++b) ++counts[rng.below(n_pairs)];
  }
  for (std::size_t p = 0; p < n_pairs; ++p) {
    if (counts[p] != 0) {
      out.pair_index.push_back(p);
      out.count.push_back(counts[p]);
    }
  }
  return out;
}

void check_pairs(std::span<const IndexPair> pairs, std::size_t n,
                 const char* what) {
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " pair (" + std::to_string(a) + ", " +
                      std::to_string(b) + ") is out of range for " +
                      std::to_string(n) + " points");
    }
  }
}

}  // namespace

void LearnerConfig::validate() const {
  if (target_bits < 1 || pool_size < target_bits) {
    throw Error(ErrorCode::kInvalidArgument,
                "learner needs pool_size >= target_bits >= 1 (pool " +
                    std::to_string(pool_size) + ", bits " +
                    std::to_string(target_bits) + ")");
  }
  if (iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "learner needs iterations >= 1");
  }
}

PoolSelection pool_select(const LearnerConfig& config,
                          std::span<const Vector> data,
                          std::span<const IndexPair> same,
                          std::span<const IndexPair> diff) {
  config.validate();
  if (data.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "pool_select: no learning data");
  }
  if (same.empty() && diff.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "pool_select: no labelled pairs supplied");
  }
  const std::size_t dim = data.front().size();
  for (const auto& x : data) {
    if (x.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "pool_select: learning data has mixed dimensions");
    }
  }
  check_pairs(same, data.size(), "same-label");
  check_pairs(diff, data.size(), "different-label");

  PoolSelection out;
  out.pool = sample_unit_normals(dim, config.pool_size,
                                 derive_seed(config.rng_seed, 0));

  Rng batch_rng(derive_seed(config.rng_seed, 1));
  const BatchCounts same_counts =
      accumulate_batches(same.size(), config.iterations, batch_rng);
  const BatchCounts diff_counts =
      accumulate_batches(diff.size(), config.iterations, batch_rng);

  // Only points that appear in a sampled pair need side bits.
  std::vector<std::size_t> slot(data.size(), SIZE_MAX);
  std::vector<std::size_t> used;
  auto touch = [&](std::size_t i) {
    if (slot[i] == SIZE_MAX) {
      slot[i] = used.size();
      used.push_back(i);
    }
  };
  for (std::size_t p : same_counts.pair_index) {
    touch(same[p].first);
    touch(same[p].second);
  }
  for (std::size_t p : diff_counts.pair_index) {
    touch(diff[p].first);
    touch(diff[p].second);
  }

  const double iters = static_cast<double>(config.iterations);
  out.scores.assign(config.pool_size, 0.0);
  parallel_for(config.pool_size, [&](std::size_t begin, std::size_t end) {
    std::vector<unsigned char> side(used.size());
    for (std::size_t c = begin; c < end; ++c) {
      for (std::size_t u = 0; u < used.size(); ++u) {
        side[u] = side_of_origin(out.pool[c], data[used[u]]) ? 1 : 0;
      }
      auto split_mass = [&](const BatchCounts& counts,
                            std::span<const IndexPair> pairs) {
        std::uint64_t mass = 0;
        for (std::size_t q = 0; q < counts.pair_index.size(); ++q) {
          const auto& [a, b] = pairs[counts.pair_index[q]];
          if (side[slot[a]] != side[slot[b]]) mass += counts.count[q];
        }
        return mass;
      };
      double score = 0.0;
      if (diff_counts.batch != 0) {
        score += static_cast<double>(split_mass(diff_counts, diff)) /
                 (static_cast<double>(diff_counts.batch) * iters);
      }
      if (same_counts.batch != 0) {
        score -= static_cast<double>(split_mass(same_counts, same)) /
                 (static_cast<double>(same_counts.batch) * iters);
      }
      out.scores[c] = score;
    }
  });

  std::vector<std::size_t> order(config.pool_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.scores[a] > out.scores[b];
  });
  out.selected.assign(order.begin(),
                      order.begin() + static_cast<std::ptrdiff_t>(config.target_bits));
  std::sort(out.selected.begin(), out.selected.end());
  return out;
}

std::vector<Vector> learn_pool_select(const LearnerConfig& config,
                                      std::span<const Vector> data,
                                      std::span<const IndexPair> same,
                                      std::span<const IndexPair> diff) {
  PoolSelection sel = pool_select(config, data, same, diff);
  std::vector<Vector> out;
  out.reserve(sel.selected.size());
  for (std::size_t i : sel.selected) out.push_back(std::move(sel.pool[i]));
  return out;
}

OriginLearner pool_learner(LearnerConfig config, std::vector<IndexPair> same,
                           std::vector<IndexPair> diff) {
  return [config, same = std::move(same),
          diff = std::move(diff)](std::span<const Vector> points) {
    return learn_pool_select(config, points, same, diff);
  };
}

double mean_abs_offset(std::span<const Hyperplane> planes) {
  if (planes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mean_abs_offset: no planes");
  }
  double s = 0.0;
  for (const auto& h : planes) s += std::abs(h.offset());
  return s / static_cast<double>(planes.size());
}

TrainingPairs pairs_from_labels(std::span<const int> labels,
                                std::size_t max_pairs, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> groups;
  std::vector<std::size_t> labelled;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) continue;
    groups[labels[i]].push_back(i);
    labelled.push_back(i);
  }
  Rng rng(derive_seed(seed, 2));
  TrainingPairs out;

  std::vector<const std::vector<std::size_t>*> group_list;
  std::vector<std::uint64_t> cumulative;
  std::uint64_t same_total = 0;
  for (const auto& [label, members] : groups) {
    const std::uint64_t s = members.size();
    if (s < 2) continue;
    same_total += s * (s - 1) / 2;
    group_list.push_back(&members);
    cumulative.push_back(same_total);
  }
  if (same_total <= max_pairs) {
    for (const auto* members : group_list) {
      for (std::size_t a = 0; a < members->size(); ++a) {
        for (std::size_t b = a + 1; b < members->size(); ++b) {
          out.same.push_back(ordered((*members)[a], (*members)[b]));
        }
      }
    }
  } else {
    for (std::size_t p = 0; p < max_pairs; ++p) {
      const std::uint64_t r = rng.below(same_total);
      const std::size_t g = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), r) -
          cumulative.begin());
      const auto& members = *group_list[g];
      const std::size_t a = rng.below(members.size());
      std::size_t b = rng.below(members.size() - 1);
      if (b >= a) ++b;
      out.same.push_back(ordered(members[a], members[b]));
    }
  }

  const std::uint64_t l = labelled.size();
  const std::uint64_t all_pairs = l * (l - (l > 0 ? 1 : 0)) / 2;
  const std::uint64_t diff_total = all_pairs - same_total;
  if (diff_total == 0) return out;
  if (diff_total <= max_pairs) {
    for (std::size_t a = 0; a < labelled.size(); ++a) {
      for (std::size_t b = a + 1; b < labelled.size(); ++b) {
        if (labels[labelled[a]] != labels[labelled[b]]) {
          out.diff.push_back(IndexPair{labelled[a], labelled[b]});
        }
      }
    }
  } else {
    while (out.diff.size() < max_pairs) {
      const std::size_t a = labelled[rng.below(l)];
      const std::size_t b = labelled[rng.below(l)];
      if (labels[a] != labels[b]) out.diff.push_back(ordered(a, b));
    }
  }
  return out;
}

TrainingPairs pairs_from_relation(std::size_t n,
                                  std::span<const IndexPair> relation,
                                  std::size_t max_pairs, std::uint64_t seed) {
  check_pairs(relation, n, "relation");
  Rng rng(derive_seed(seed, 3));
  TrainingPairs out;
  out.same.assign(relation.begin(), relation.end());
  for (auto& p : out.same) p = ordered(p.first, p.second);
  if (out.same.size() > max_pairs) {
    for (std::size_t i = 0; i < max_pairs; ++i) {
      const std::size_t j = i + rng.below(out.same.size() - i);
      std::swap(out.same[i], out.same[j]);
    }
    out.same.resize(max_pairs);
    std::sort(out.same.begin(), out.same.end());
  }

  std::unordered_set<std::uint64_t> related;
  related.reserve(relation.size() * 2);
  for (const auto& [a, b] : relation) related.insert(pair_key(a, b));
  const std::uint64_t all_pairs =
      static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
  const std::uint64_t diff_total = all_pairs - related.size();
  if (diff_total == 0) return out;
  if (diff_total <= max_pairs) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!related.contains(pair_key(a, b))) out.diff.push_back({a, b});
      }
    }
  } else {
    while (out.diff.size() < max_pairs) {
      const std::size_t a = rng.below(n);
      const std::size_t b = rng.below(n);
      if (a != b && !related.contains(pair_key(a, b))) {
        out.diff.push_back(ordered(a, b));
      }
    }
  }
  return out;
}

}  // namespace lshlift
