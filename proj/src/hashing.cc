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

#include "lshlift/hashing.h"

#include <algorithm>
#include <bit>
#include <string>

#include "lshlift/parallel.h"

namespace lshlift {

namespace {

void check_k(std::size_t k, std::size_t db_size) {
  if (k < 1 || k > db_size) {
    throw Error(ErrorCode::kInvalidArgument,
                "k must be in [1, " + std::to_string(db_size) + "], got " +
                    std::to_string(k));
  }
}

template <typename T>
void keep_top_k(std::vector<T>& all, std::size_t k) {
  auto less = [](const T& a, const T& b) {
    return a.distance < b.distance ||
           (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                    all.end(), less);
  all.resize(k);
}

}  // namespace

void HashModel::validate() const {
  if (preprocess.pca_basis.size() != preprocess.output_dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "model: basis size differs from output dimension");
  }
  for (std::size_t i = 0; i < hyperplanes.size(); ++i) {
    if (hyperplanes[i].dim() != preprocess.output_dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "model: hyperplane " + std::to_string(i) + " has dimension " +
                      std::to_string(hyperplanes[i].dim()) + ", expected " +
                      std::to_string(preprocess.output_dim));
    }
  }
}

BitCode encode_projected(std::span<const Hyperplane> planes,
                         std::span<const double> projected) {
  BitCode code(planes.size());
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (side_of(planes[i], projected)) code.set(i, true);
  }
  return code;
}

BitCode encode(const HashModel& model, std::span<const double> raw) {
  const Vector projected = transform(model.preprocess, raw);
  return encode_projected(model.hyperplanes, projected);
}

std::vector<BitCode> encode_all(const HashModel& model,
                                std::span<const Vector> data) {
  std::vector<BitCode> out(data.size());
  parallel_for(data.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = encode(model, data[i]);
      } catch (const Error& e) {
        throw Error(e.code(), "vector " + std::to_string(i) + ": " + e.what());
      }
    }
  });
  return out;
}

std::vector<Neighbor> search(const BitCode& query, std::span<const BitCode> db,
                             std::size_t k) {
  check_k(k, db.size());
  const std::size_t width = query.width();
  const auto q = query.words();
  std::vector<Neighbor> all(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (db[i].width() != width) {
      throw Error(ErrorCode::kWidthMismatch,
                  "search: database code " + std::to_string(i) + " has width " +
                      std::to_string(db[i].width()) + ", query has " +
                      std::to_string(width));
    }
    const auto w = db[i].words();
    std::size_t d = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      d += static_cast<std::size_t>(std::popcount(q[j] ^ w[j]));
    }
    all[i] = Neighbor{i, d};
  }
  keep_top_k(all, k);
  return all;
}

std::vector<L2Neighbor> l2_search(std::span<const double> query,
                                  std::span<const Vector> db, std::size_t k) {
  check_k(k, db.size());
  std::vector<L2Neighbor> all(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    all[i] = L2Neighbor{i, l2_distance(query, db[i])};
  }
  keep_top_k(all, k);
  return all;
}

std::vector<std::vector<Neighbor>> search_all(std::span<const BitCode> queries,
                                              std::span<const BitCode> db,
                                              std::size_t k) {
  std::vector<std::vector<Neighbor>> out(queries.size());
  parallel_for(queries.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = search(queries[i], db, k);
  });
  return out;
}

std::vector<std::vector<L2Neighbor>> l2_search_all(
    std::span<const Vector> queries, std::span<const Vector> db,
    std::size_t k) {
  std::vector<std::vector<L2Neighbor>> out(queries.size());
  parallel_for(queries.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = l2_search(queries[i], db, k);
    }
  });
  return out;
}

}  // namespace lshlift
