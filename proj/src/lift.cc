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

#include "lshlift/lift.h"

#include <cmath>
#include <string>

#include "lshlift/parallel.h"
#include "lshlift/rng.h"

namespace lshlift {

namespace {

constexpr double kMinNorm = 1e-12;

// Standard normal vector of `dim` components from `rng`, redrawn until the
// norm of its first `head` components reaches kMinNorm.
Vector draw_gaussian(Rng& rng, std::size_t dim, std::size_t head,
                     std::size_t& redraws) {
  Vector g(dim);
  for (;;) {
    for (double& v : g) v = rng.normal();
    if (l2_norm(std::span<const double>(g).first(head)) >= kMinNorm) return g;
    ++redraws;
  }
}

}  // namespace

Vector lift_point(std::span<const double> x) {
  if (!all_finite(x)) {
    throw Error(ErrorCode::kNonFinite, "lift_point: non-finite component");
  }
  Vector out(x.begin(), x.end());
  out.push_back(1.0);
  return out;
}

std::vector<Vector> lift_all(std::span<const Vector> data) {
  std::vector<Vector> out;
  out.reserve(data.size());
  for (const auto& x : data) out.push_back(lift_point(x));
  return out;
}

std::vector<LiftedHyperplane> sample_lifted(std::size_t dim, std::size_t count,
                                            std::uint64_t seed,
                                            std::size_t* redraws) {
  if (dim == 0 || count == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample_lifted: dimension and count must be positive");
  }
  std::vector<LiftedHyperplane> out(count);
  std::vector<std::size_t> per_plane(count, 0);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      Vector g = draw_gaussian(rng, dim + 1, dim, per_plane[i]);
      const double head = l2_norm(std::span<const double>(g).first(dim));
      for (double& v : g) v /= head;
      out[i] = LiftedHyperplane(std::move(g));
    }
  });
  if (redraws != nullptr) {
    *redraws = 0;
    for (std::size_t r : per_plane) *redraws += r;
  }
  return out;
}

Hyperplane unlift_hyperplane(const LiftedHyperplane& h) {
  const auto n = h.n();
  const double norm = l2_norm(n);
  if (norm < kMinNorm) {
    throw Error(ErrorCode::kDegenerate,
                "lifted plane is parallel to the z axis and does not cross "
                "the z=1 plane");
  }
  Vector normal(n.begin(), n.end());
  if (std::abs(norm - 1.0) <= kUnitTolerance) {
    return Hyperplane(std::move(normal), h.w());
  }
  for (double& v : normal) v /= norm;
  return Hyperplane(std::move(normal), h.w() / norm);
}

LiftResult lift_learner(const OriginLearner& learner,
                        std::span<const Vector> learning_data) {
  if (learning_data.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "lift_learner: no learning data");
  }
  const std::size_t dim = learning_data.front().size();
  for (const auto& x : learning_data) {
    if (x.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "lift_learner: learning data has mixed dimensions");
    }
  }
  const std::vector<Vector> lifted = lift_all(learning_data);
  const std::vector<Vector> normals = learner(lifted);

  LiftResult result;
  result.planes.reserve(normals.size());
  for (const auto& normal : normals) {
    if (normal.size() != dim + 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "lift_learner: learner returned a normal of dimension " +
                      std::to_string(normal.size()) + ", expected " +
                      std::to_string(dim + 1));
    }
    const LiftedHyperplane h(normal);
    if (l2_norm(h.n()) < kMinNorm) {
      ++result.skipped;
      continue;
    }
    result.planes.push_back(unlift_hyperplane(h));
  }
  return result;
}

std::vector<Vector> sample_unit_normals(std::size_t dim, std::size_t count,
                                        std::uint64_t seed) {
  if (dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample_unit_normals: dim is 0");
  }
  std::vector<Vector> out(count);
  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, i));
      std::size_t unused = 0;
      Vector g = draw_gaussian(rng, dim, dim, unused);
      const double norm = l2_norm(g);
      for (double& v : g) v /= norm;
      out[i] = std::move(g);
    }
  });
  return out;
}

OriginLearner random_origin_learner(std::size_t count, std::uint64_t seed) {
  return [count, seed](std::span<const Vector> points) {
    if (points.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "random_origin_learner: no points");
    }
    return sample_unit_normals(points.front().size(), count, seed);
  };
}

std::vector<Hyperplane> origin_planes(std::span<const Vector> normals) {
  std::vector<Hyperplane> out;
  out.reserve(normals.size());
  for (const auto& n : normals) out.emplace_back(n, 0.0);
  return out;
}

}  // namespace lshlift
