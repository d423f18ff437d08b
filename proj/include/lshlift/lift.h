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

// Lifting turns any learner of origin-crossing hyperplanes into a learner of
// offset hyperplanes. Data x in R^N is embedded as (x, 1) in R^(N+1); an
// origin-crossing plane with normal (n, w) there meets the z = 1 slice in
// the affine plane n . x + w = 0, and the sign of (n, w) . (x, 1) equals the
// sign of n . x + w. The learner never has to model offsets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lshlift/core.h"

namespace lshlift {

/// Appends a trailing 1: (x_1, ..., x_N) -> (x_1, ..., x_N, 1).
Vector lift_point(std::span<const double> x);

std::vector<Vector> lift_all(std::span<const Vector> data);

/// Samples `count` lifted normals for base dimension `dim`. All dim + 1
/// components of plane i are standard normal draws from substream i of
/// `seed`; the whole vector is then divided by the norm of its first `dim`
/// components. Draws whose first-`dim` norm is below 1e-12 are redrawn and
/// counted in `redraws`.
std::vector<LiftedHyperplane> sample_lifted(std::size_t dim, std::size_t count,
                                            std::uint64_t seed,
                                            std::size_t* redraws = nullptr);

/// Intersection of a lifted plane with the z = 1 slice, as a plane in the
/// base space: normal n / |n|, offset w / |n|. When |n| is already 1 within
/// kUnitTolerance the components are taken unchanged. Throws kDegenerate if
/// the normal is parallel to the z axis (|n| < 1e-12).
Hyperplane unlift_hyperplane(const LiftedHyperplane& h);

/// Plug-in contract for learners of origin-crossing hyperplanes: given the
/// training points (all of one dimension D), return unit normals in R^D.
/// Any hash learner that ignores offsets fits this signature.
using OriginLearner =
    std::function<std::vector<Vector>(std::span<const Vector> points)>;

struct LiftResult {
  std::vector<Hyperplane> planes;
  /// Learned planes parallel to the z axis; they never meet z = 1.
  std::size_t skipped = 0;
};

/// Runs `learner` on the lifted learning data and maps every returned
/// plane back to an offset plane in the base space.
LiftResult lift_learner(const OriginLearner& learner,
                        std::span<const Vector> learning_data);

/// Random-projection learner: `count` unit normals with i.i.d. standard
/// normal components, plane i drawn from substream i of `seed`.
OriginLearner random_origin_learner(std::size_t count, std::uint64_t seed);

/// Draws `count` unit normals of dimension `dim` as random_origin_learner
/// does.
std::vector<Vector> sample_unit_normals(std::size_t dim, std::size_t count,
                                        std::uint64_t seed);

/// Origin-crossing planes (offset 0) from unit normals.
std::vector<Hyperplane> origin_planes(std::span<const Vector> normals);

}  // namespace lshlift
