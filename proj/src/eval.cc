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

#include "lshlift/eval.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "lshlift/parallel.h"
#include "lshlift/rng.h"

namespace lshlift {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kLearn: return "learn";
    case Split::kDatabase: return "database";
    case Split::kQuery: return "query";
  }
  return "unknown";
}

Split parse_split(std::string_view text) {
  if (text == "learn" || text == "learning" || text == "train") return Split::kLearn;
  if (text == "database" || text == "db" || text == "base") return Split::kDatabase;
  if (text == "query" || text == "q") return Split::kQuery;
  throw Error(ErrorCode::kParse, "unknown split '" + std::string(text) + "'");
}

void LabeledDataset::validate() const {
  if (splits.size() != vectors.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset has " + std::to_string(vectors.size()) +
                    " vectors but " + std::to_string(splits.size()) +
                    " split designations");
  }
  if (!labels.empty() && labels.size() != vectors.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset has " + std::to_string(vectors.size()) +
                    " vectors but " + std::to_string(labels.size()) + " labels");
  }
}

std::vector<std::size_t> LabeledDataset::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] == split) out.push_back(i);
  }
  return out;
}

std::vector<Vector> LabeledDataset::subset(Split split) const {
  std::vector<Vector> out;
  for (std::size_t i : indices(split)) out.push_back(vectors[i]);
  return out;
}

SameLabel SameLabel::from_labels(std::vector<int> labels) {
  SameLabel s;
  s.n_ = labels.size();
  s.labels_ = std::move(labels);
  return s;
}

SameLabel SameLabel::from_pairs(std::size_t n, std::span<const IndexPair> pairs) {
  SameLabel s;
  s.n_ = n;
  s.adjacency_.resize(n);
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw Error(ErrorCode::kInvalidArgument, "relation pair out of range");
    }
    s.adjacency_[a].push_back(b);
    s.adjacency_[b].push_back(a);
  }
  for (auto& list : s.adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return s;
}

bool SameLabel::operator()(std::size_t a, std::size_t b) const {
  if (a >= n_ || b >= n_) {
    throw Error(ErrorCode::kInvalidArgument, "label lookup out of range");
  }
  if (!labels_.empty()) {
    return labels_[a] >= 0 && labels_[a] == labels_[b];
  }
  if (adjacency_.empty()) return false;
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<IndexPair> auto_label_pairs(std::span<const Vector> data,
                                        double top_fraction) {
  const std::size_t n = data.size();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "auto_label_pairs needs n >= 2");
  }
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "top_fraction must be in (0, 1]");
  }
  for (const auto& x : data) {
    if (x.size() != data.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "auto_label_pairs: mixed dimensions");
    }
  }
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const auto keep = static_cast<std::size_t>(
      std::floor(top_fraction * static_cast<double>(total)));
  if (keep == 0) return {};

  // Squared distances order pairs exactly as distances do.
  using Entry = std::tuple<double, std::size_t, std::size_t>;
  const std::size_t workers = std::min(thread_count(), n);
  std::vector<std::vector<Entry>> partial(workers);
  // Rows are dealt round-robin so early (long) rows spread across workers.
  parallel_for(workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      std::priority_queue<Entry> heap;
      for (std::size_t i = w; i < n; i += workers) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double d2 = 0.0;
          const auto& a = data[i];
          const auto& b = data[j];
          for (std::size_t c = 0; c < a.size(); ++c) {
            const double d = a[c] - b[c];
            d2 += d * d;
          }
          Entry e{d2, i, j};
          if (heap.size() < keep) {
            heap.push(e);
          } else if (e < heap.top()) {
            heap.pop();
            heap.push(e);
          }
        }
      }
      auto& out = partial[w];
      out.reserve(heap.size());
      while (!heap.empty()) {
        out.push_back(heap.top());
        heap.pop();
      }
    }
  });
  std::vector<Entry> merged;
  for (auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
  std::sort(merged.begin(), merged.end());
  merged.resize(std::min(merged.size(), keep));

  std::vector<IndexPair> out;
  out.reserve(merged.size());
  for (const auto& [d2, i, j] : merged) out.emplace_back(i, j);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t acquisition_k(double acquisition, std::size_t database_size) {
  if (!(acquisition > 0.0 && acquisition <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "acquisition must be in (0, 1]");
  }
  if (database_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "database split is empty");
  }
  const double k = std::ceil(acquisition * static_cast<double>(database_size));
  return std::clamp<std::size_t>(static_cast<std::size_t>(k), 1, database_size);
}

EvalReport score_retrieval(const std::vector<std::vector<std::size_t>>& retrieved,
                           std::span<const std::size_t> query_ids,
                           std::span<const std::size_t> database_ids,
                           const SameLabel& same) {
  if (retrieved.size() != query_ids.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score_retrieval: one result list per query expected");
  }
  if (query_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "query split is empty");
  }
  const std::size_t nq = query_ids.size();
  std::vector<std::size_t> hits(nq, 0), relevant(nq, 0), k_of(nq, 0);
  parallel_for(nq, [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const std::size_t qid = query_ids[q];
      for (std::size_t pos : retrieved[q]) {
        if (same(qid, database_ids[pos])) ++hits[q];
      }
      for (std::size_t id : database_ids) {
        if (same(qid, id)) ++relevant[q];
      }
      k_of[q] = retrieved[q].size();
    }
  });

  EvalReport r;
  r.queries = nq;
  r.k = k_of.front();
  double precision_sum = 0.0, recall_sum = 0.0;
  std::size_t eligible = 0, misses = 0;
  for (std::size_t q = 0; q < nq; ++q) {
    if (k_of[q] == 0) {
      throw Error(ErrorCode::kInvalidArgument, "empty retrieval list");
    }
    precision_sum += static_cast<double>(hits[q]) / static_cast<double>(k_of[q]);
    if (relevant[q] == 0) {
      ++r.queries_without_relevant;
      continue;
    }
    ++eligible;
    recall_sum += static_cast<double>(hits[q]) / static_cast<double>(relevant[q]);
    if (hits[q] == 0) ++misses;
  }
  r.precision = precision_sum / static_cast<double>(nq);
  if (eligible > 0) {
    r.recall = recall_sum / static_cast<double>(eligible);
    r.error_rate = static_cast<double>(misses) / static_cast<double>(eligible);
  }
  return r;
}

namespace {

void check_eval_inputs(const LabeledDataset& dataset, const SameLabel& same,
                       std::span<const std::size_t> db,
                       std::span<const std::size_t> queries) {
  dataset.validate();
  if (same.size() != dataset.vectors.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "label relation covers " + std::to_string(same.size()) +
                    " points, dataset has " +
                    std::to_string(dataset.vectors.size()));
  }
  if (db.empty()) throw Error(ErrorCode::kInvalidArgument, "database split is empty");
  if (queries.empty()) throw Error(ErrorCode::kInvalidArgument, "query split is empty");
}

}  // namespace

EvalReport evaluate(const HashModel& model, const LabeledDataset& dataset,
                    double acquisition, const SameLabel& same) {
  const auto db_ids = dataset.indices(Split::kDatabase);
  const auto query_ids = dataset.indices(Split::kQuery);
  check_eval_inputs(dataset, same, db_ids, query_ids);
  const std::size_t k = acquisition_k(acquisition, db_ids.size());

  const auto db_codes = encode_all(model, dataset.subset(Split::kDatabase));
  const auto query_codes = encode_all(model, dataset.subset(Split::kQuery));
  const auto ranked = search_all(query_codes, db_codes, k);

  std::vector<std::vector<std::size_t>> retrieved(ranked.size());
  for (std::size_t q = 0; q < ranked.size(); ++q) {
    for (const auto& nb : ranked[q]) retrieved[q].push_back(nb.index);
  }
  EvalReport r = score_retrieval(retrieved, query_ids, db_ids, same);
  r.bit_count = model.bit_count();
  r.acquisition = acquisition;
  return r;
}

EvalReport evaluate_l2(const PreprocessParams& preprocess,
                       const LabeledDataset& dataset, double acquisition,
                       const SameLabel& same) {
  const auto db_ids = dataset.indices(Split::kDatabase);
  const auto query_ids = dataset.indices(Split::kQuery);
  check_eval_inputs(dataset, same, db_ids, query_ids);
  const std::size_t k = acquisition_k(acquisition, db_ids.size());

  const auto db = transform_all(preprocess, dataset.subset(Split::kDatabase));
  const auto queries = transform_all(preprocess, dataset.subset(Split::kQuery));
  const auto ranked = l2_search_all(queries, db, k);

  std::vector<std::vector<std::size_t>> retrieved(ranked.size());
  for (std::size_t q = 0; q < ranked.size(); ++q) {
    for (const auto& nb : ranked[q]) retrieved[q].push_back(nb.index);
  }
  EvalReport r = score_retrieval(retrieved, query_ids, db_ids, same);
  r.bit_count = 0;
  r.acquisition = acquisition;
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "pearson needs two equal-length samples of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCode::kDegenerate,
                "correlation is undefined: a distance sample has zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

Correlation correlate(const HashModel& model, std::span<const Vector> data,
                      std::size_t n_pairs, std::uint64_t rng_seed) {
  if (n_pairs < 2) {
    throw Error(ErrorCode::kInvalidArgument, "correlate needs n_pairs >= 2");
  }
  if (data.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "correlate needs at least 2 points");
  }
  const auto codes = encode_all(model, data);
  Rng rng(derive_seed(rng_seed, 0));
  Correlation out;
  out.scatter.reserve(n_pairs);
  std::vector<double> l2(n_pairs), ham(n_pairs);
  for (std::size_t p = 0; p < n_pairs; ++p) {
    const std::size_t i = rng.below(data.size());
    std::size_t j = rng.below(data.size() - 1);
    if (j >= i) ++j;
    l2[p] = l2_distance(data[i], data[j]);
    const std::size_t h = hamming_distance(codes[i], codes[j]);
    ham[p] = static_cast<double>(h);
    out.scatter.emplace_back(l2[p], h);
  }
  out.pearson = pearson(l2, ham);
  return out;
}

}  // namespace lshlift
