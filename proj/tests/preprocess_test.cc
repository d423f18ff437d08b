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

#include "lshlift/preprocess.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "test_util.h"

namespace lshlift {
namespace {

// Latent Gaussian with the given standard deviations, mixed by a fixed
// rotation so the components are correlated.
std::vector<Vector> planted(std::size_t n, const std::vector<double>& sd,
                            std::uint64_t seed) {
  const std::size_t dim = sd.size();
  Rng rng(seed);
  std::vector<Vector> mix(dim, Vector(dim));
  for (auto& row : mix) {
    for (double& v : row) v = rng.normal();
  }
  std::vector<Vector> out(n, Vector(dim, 0.0));
  for (auto& x : out) {
    Vector z(dim);
    for (std::size_t j = 0; j < dim; ++j) z[j] = sd[j] * rng.normal();
    for (std::size_t r = 0; r < dim; ++r) x[r] = dot(mix[r], z) + 3.0 * r;
  }
  return out;
}

std::vector<double> population_variances(const std::vector<Vector>& ys) {
  const std::size_t k = ys.front().size();
  std::vector<double> mean(k, 0.0), var(k, 0.0);
  for (const auto& y : ys) {
    for (std::size_t j = 0; j < k; ++j) mean[j] += y[j];
  }
  for (double& m : mean) m /= static_cast<double>(ys.size());
  for (const auto& y : ys) {
    for (std::size_t j = 0; j < k; ++j) var[j] += (y[j] - mean[j]) * (y[j] - mean[j]);
  }
  for (double& v : var) v /= static_cast<double>(ys.size());
  return var;
}

TEST(Fit, CollinearDataHasOneComponent) {
  // Normalized y = x data has covariance [[1, 1], [1, 1]] under the 1/n
  // convention: eigenvalues 2 and 0.
  std::vector<Vector> data;
  for (int t = 1; t <= 5; ++t) data.push_back({double(t), double(t)});
  const PreprocessParams p = fit(data);
  ASSERT_EQ(p.eigenvalues.size(), 2u);
  EXPECT_NEAR(p.eigenvalues[0], 2.0, 1e-12);
  EXPECT_NEAR(p.eigenvalues[1], 0.0, 1e-12);
  EXPECT_EQ(p.output_dim, 1u);
  EXPECT_NEAR(p.pca_basis[0][0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(p.pca_basis[0][1], std::sqrt(0.5), 1e-12);
}

TEST(Fit, IsotropicGaussianKeepsAllThree) {
  const auto data = testing::gaussian_data(10000, 3, 21);
  const PreprocessParams p = fit(data);
  const double total =
      std::accumulate(p.eigenvalues.begin(), p.eigenvalues.end(), 0.0);
  EXPECT_LT((p.eigenvalues[0] + p.eigenvalues[1]) / total, 0.80);
  EXPECT_EQ(p.output_dim, 3u);
  EXPECT_NEAR(eigenvalue_ratio(p), 1.0, 0.1);
}

TEST(Fit, RepeatedPointIsDegenerate) {
  std::vector<Vector> data(10, Vector{1.5, -2.0});
  EXPECT_THROW(fit(data), Error);
  FitOptions allow;
  allow.allow_constant = true;
  EXPECT_THROW(fit(data, allow), Error) << "no variance left at all";
}

TEST(Fit, RejectsTooFewOrMixedVectors) {
  EXPECT_THROW(fit(std::vector<Vector>{{1.0}}), Error);
  EXPECT_THROW(fit(std::vector<Vector>{{1.0, 2.0}, {1.0}}), Error);
  EXPECT_THROW(fit(std::vector<Vector>{{1.0, 2.0}, {1.0, std::nan("")}}), Error);
}

TEST(Fit, ConstantComponentNeedsOptIn) {
  auto data = testing::gaussian_data(200, 3, 4);
  for (auto& x : data) x[1] = 7.0;
  try {
    fit(data);
    FAIL() << "expected a zero-variance error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
    EXPECT_NE(std::string(e.what()).find("component 1"), std::string::npos);
  }
  FitOptions allow;
  allow.allow_constant = true;
  const PreprocessParams p = fit(data, allow);
  EXPECT_EQ(p.scale[1], 1.0);
  EXPECT_NEAR(p.eigenvalues.back(), 0.0, 1e-12);
}

TEST(Fit, PlantedCovarianceContract) {
  const auto data = planted(4000, {5.0, 3.0, 1.0, 0.5, 0.2, 0.1}, 99);
  const PreprocessParams p = fit(data);

  // Minimal k reaching 80% cumulative contribution.
  const auto cum = cumulative_contribution(p);
  ASSERT_GE(p.output_dim, 1u);
  EXPECT_GE(cum[p.output_dim - 1], 0.80);
  if (p.output_dim > 1) {
    EXPECT_LT(cum[p.output_dim - 2], 0.80);
  }

  EXPECT_TRUE(std::is_sorted(p.eigenvalues.rbegin(), p.eigenvalues.rend()));

  for (std::size_t a = 0; a < p.output_dim; ++a) {
    for (std::size_t b = 0; b < p.output_dim; ++b) {
      EXPECT_NEAR(dot(p.pca_basis[a], p.pca_basis[b]), a == b ? 1.0 : 0.0, 1e-8);
    }
  }

  const auto var = population_variances(transform_all(p, data));
  for (std::size_t j = 0; j < p.output_dim; ++j) {
    EXPECT_NEAR(var[j], p.eigenvalues[j], 1e-6 * p.eigenvalues[j]);
  }
}

TEST(Fit, EigenvectorSignConvention) {
  const auto data = planted(500, {4.0, 2.0, 1.0, 0.5}, 5);
  FitOptions all;
  all.contribution = 1.0;
  const PreprocessParams p = fit(data, all);
  for (const auto& v : p.pca_basis) {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < v.size(); ++j) {
      if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
    }
    EXPECT_GT(v[arg], 0.0);
  }
}

TEST(Fit, IsDeterministic) {
  const auto data = planted(1000, {3.0, 2.0, 1.0, 1.0, 0.5}, 8);
  EXPECT_EQ(fit(data), fit(data));
}

TEST(Transform, MeanMapsToZero) {
  const auto data = planted(800, {2.0, 1.0, 0.5}, 12);
  const PreprocessParams p = fit(data);
  for (double y : transform(p, p.mean)) EXPECT_NEAR(y, 0.0, 1e-9);
}

TEST(Transform, IdentityIsTruncation) {
  const PreprocessParams p = PreprocessParams::identity(4, 2);
  const Vector y = transform(p, Vector{1.5, -2.0, 3.0, 4.0});
  ASSERT_EQ(y.size(), 2u);
  EXPECT_EQ(y[0], 1.5);
  EXPECT_EQ(y[1], -2.0);
}

TEST(Transform, DimensionMismatchThrows) {
  const PreprocessParams p = PreprocessParams::identity(3);
  EXPECT_THROW(transform(p, Vector{1.0, 2.0}), Error);
}

TEST(EigenvalueRatio, DirectQuotient) {
  PreprocessParams p = PreprocessParams::identity(2);
  p.eigenvalues = {4.0, 1.0};
  EXPECT_DOUBLE_EQ(eigenvalue_ratio(p), 4.0);
  p.eigenvalues = {4.0, 0.0};
  EXPECT_THROW(eigenvalue_ratio(p), Error);
}

TEST(MinimalComponents, HitsThresholdExactly) {
  const std::vector<double> ev = {4.0, 3.0, 2.0, 1.0};
  EXPECT_EQ(minimal_components(ev, 0.7), 2u);  // 7/10 exactly
  EXPECT_EQ(minimal_components(ev, 0.71), 3u);
  EXPECT_EQ(minimal_components(ev, 1.0), 4u);
}

}  // namespace
}  // namespace lshlift
