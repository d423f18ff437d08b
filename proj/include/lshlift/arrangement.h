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

// Region counts of hyperplane arrangements. Each region of the complement
// receives its own bit code, so the count bounds how finely a hash can
// discretize space. For m planes in general position in R^d:
//
//   through the origin:  2 * sum_{i=0}^{d-1} C(m-1, i)   ~ m^(d-1)
//   with offsets:            sum_{i=0}^{d}   C(m, i)     ~ m^d

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lshlift/core.h"

namespace lshlift {

inline constexpr std::size_t kMaxExactDim = 3;
inline constexpr std::size_t kMaxExactPlanes = 20;

enum class ArrangementMode { kCentral, kOffset };

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Closed-form region count of a generic central arrangement.
std::uint64_t central_region_count(std::size_t dim, std::size_t planes);

/// Closed-form region count of a generic affine arrangement.
std::uint64_t offset_region_count(std::size_t dim, std::size_t planes);

std::uint64_t closed_form_region_count(ArrangementMode mode, std::size_t dim,
                                       std::size_t planes);

/// Number of nonempty open cells {x : s_i (n_i . x + b_i) > 0} over all sign
/// vectors s. Sign vectors are built one plane at a time and an infeasible
/// prefix prunes all of its extensions; feasibility is decided by a linear
/// program. Requires dim <= 3 and at most 20 planes.
std::uint64_t count_regions_exact(std::span<const Hyperplane> planes,
                                  std::size_t dim);

/// Distinct sign vectors among n_samples points drawn uniformly from the
/// ball of radius sample_radius (point i from substream i of rng_seed). A
/// lower bound on the region count, nondecreasing in n_samples.
std::uint64_t count_regions_sampled(std::span<const Hyperplane> planes,
                                    std::size_t dim, std::size_t n_samples,
                                    double sample_radius,
                                    std::uint64_t rng_seed);

/// Random planes in R^dim: unit normals with standard normal components;
/// offsets 0 (central) or the lifted-sampling offsets (offset mode).
std::vector<Hyperplane> sample_arrangement(ArrangementMode mode,
                                           std::size_t dim, std::size_t planes,
                                           std::uint64_t seed);

struct GenericArrangement {
  std::vector<Hyperplane> planes;
  std::uint64_t seed_used = 0;
  /// Draws rejected because their exact count disagreed with the closed
  /// form (non-generic position).
  std::size_t rejected = 0;
};

/// sample_arrangement, redrawn with seed + 1, + 2, ... until the exact count
/// matches the closed form, at most max_attempts draws.
GenericArrangement sample_generic_arrangement(ArrangementMode mode,
                                              std::size_t dim,
                                              std::size_t planes,
                                              std::uint64_t seed,
                                              std::size_t max_attempts = 16);

}  // namespace lshlift
