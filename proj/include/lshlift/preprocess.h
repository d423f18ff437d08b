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
#include <span>
#include <vector>

#include "lshlift/core.h"

namespace lshlift {

/// Per-component standardization followed by projection onto the leading
/// principal directions of the standardized learning data.
struct PreprocessParams {
  Vector mean;
  /// Population standard deviation per component (1 where a constant
  /// component was allowed).
  Vector scale;
  /// output_dim orthonormal directions, each of raw dimension.
  std::vector<Vector> pca_basis;
  /// All eigenvalues of the standardized covariance, descending.
  Vector eigenvalues;
  std::size_t output_dim = 0;
  /// Cumulative contribution threshold used to pick output_dim.
  double contribution = 0.80;

  std::size_t input_dim() const noexcept { return mean.size(); }

  /// Zero mean, unit scale, identity basis: transform is truncation to the
  /// first k coordinates (k = dim by default).
  static PreprocessParams identity(std::size_t dim, std::size_t k = 0);

  friend bool operator==(const PreprocessParams&,
                         const PreprocessParams&) = default;
};

struct FitOptions {
  double contribution = 0.80;
  /// Substitute scale 1 for zero-variance components instead of failing.
  bool allow_constant = false;
};

/// Fits standardization and PCA on the learning split. Covariance uses the
/// 1/n convention; output_dim is the smallest k whose leading eigenvalues
/// reach `contribution` of the total. Eigenvectors are signed so that their
/// largest-magnitude component is positive.
PreprocessParams fit(std::span<const Vector> learning_data,
                     const FitOptions& options = {});

/// (x - mean) / scale, without projection.
Vector normalize(const PreprocessParams& params, std::span<const double> x);

/// pca_basis . ((x - mean) / scale), dimension output_dim.
Vector transform(const PreprocessParams& params, std::span<const double> x);

std::vector<Vector> transform_all(const PreprocessParams& params,
                                  std::span<const Vector> data);

/// Largest eigenvalue over the output_dim-th one.
double eigenvalue_ratio(const PreprocessParams& params);

/// Running sum of eigenvalues over their total, one entry per eigenvalue.
std::vector<double> cumulative_contribution(const PreprocessParams& params);

/// Smallest k with cumulative contribution >= threshold. A relative slack of
/// 1e-12 absorbs rounding when the threshold is hit exactly.
std::size_t minimal_components(std::span<const double> descending_eigenvalues,
                               double threshold);

}  // namespace lshlift
