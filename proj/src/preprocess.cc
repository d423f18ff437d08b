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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lshlift/parallel.h"

namespace lshlift {

PreprocessParams PreprocessParams::identity(std::size_t dim, std::size_t k) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "identity: dim is 0");
  if (k == 0) k = dim;
  if (k > dim) throw Error(ErrorCode::kInvalidArgument, "identity: k > dim");
  PreprocessParams p;
  p.mean.assign(dim, 0.0);
  p.scale.assign(dim, 1.0);
  p.eigenvalues.assign(dim, 1.0);
  p.output_dim = k;
  p.contribution = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    Vector e(dim, 0.0);
    e[j] = 1.0;
    p.pca_basis.push_back(std::move(e));
  }
  return p;
}

std::size_t minimal_components(std::span<const double> eigenvalues,
                               double threshold) {
  const double total =
      std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "total variance is zero");
  }
  double running = 0.0;
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    running += eigenvalues[k];
    if (running >= threshold * total * (1.0 - 1e-12)) return k + 1;
  }
  return eigenvalues.size();
}

PreprocessParams fit(std::span<const Vector> data, const FitOptions& options) {
  if (data.size() < 2) {
    throw Error(ErrorCode::kDegenerate,
                "fit needs at least 2 learning vectors, got " +
                    std::to_string(data.size()));
  }
  if (!(options.contribution > 0.0 && options.contribution <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "contribution must be in (0, 1]");
  }
  const std::size_t dim = data.front().size();
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "vectors are empty");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "vector " + std::to_string(i) + " has dimension " +
                      std::to_string(data[i].size()) + ", expected " +
                      std::to_string(dim));
    }
    if (!all_finite(data[i])) {
      throw Error(ErrorCode::kNonFinite,
                  "vector " + std::to_string(i) + " has non-finite values");
    }
  }
  const double n = static_cast<double>(data.size());

  PreprocessParams p;
  p.contribution = options.contribution;
  p.mean.assign(dim, 0.0);
  for (const auto& x : data) {
    for (std::size_t j = 0; j < dim; ++j) p.mean[j] += x[j];
  }
  for (double& m : p.mean) m /= n;

  Vector var(dim, 0.0);
  for (const auto& x : data) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = x[j] - p.mean[j];
      var[j] += d * d;
    }
  }
  p.scale.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double sd = std::sqrt(var[j] / n);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(p.mean[j])))) {
      if (!options.allow_constant) {
        throw Error(ErrorCode::kDegenerate,
                    "component " + std::to_string(j) +
                        " has zero variance (use --allow-constant to keep it)");
      }
      p.scale[j] = 1.0;
    } else {
      p.scale[j] = sd;
    }
  }

  Eigen::MatrixXd z(data.size(), dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      z(i, j) = (data[i][j] - p.mean[j]) / p.scale[j];
    }
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose(), 1.0 / n);
  cov = cov.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kDegenerate, "eigendecomposition did not converge");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values(a) > values(b);
  });

  p.eigenvalues.resize(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    p.eigenvalues[r] = std::max(0.0, values(order[r]));
  }
  p.output_dim = minimal_components(p.eigenvalues, options.contribution);

  p.pca_basis.reserve(p.output_dim);
  for (std::size_t r = 0; r < p.output_dim; ++r) {
    const auto col = vectors.col(order[r]);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < dim; ++j) {
      if (std::abs(col(j)) > std::abs(col(arg))) arg = j;
    }
    const double sign = col(arg) < 0.0 ? -1.0 : 1.0;
    Vector v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = sign * col(j);
    p.pca_basis.push_back(std::move(v));
  }
  return p;
}

Vector normalize(const PreprocessParams& params, std::span<const double> x) {
  if (x.size() != params.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected raw dimension " + std::to_string(params.input_dim()) +
                    ", got " + std::to_string(x.size()));
  }
  Vector z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    z[j] = (x[j] - params.mean[j]) / params.scale[j];
  }
  return z;
}

Vector transform(const PreprocessParams& params, std::span<const double> x) {
  const Vector z = normalize(params, x);
  Vector y(params.output_dim);
  for (std::size_t r = 0; r < params.output_dim; ++r) {
    y[r] = dot(params.pca_basis[r], z);
  }
  return y;
}

std::vector<Vector> transform_all(const PreprocessParams& params,
                                  std::span<const Vector> data) {
  std::vector<Vector> out(data.size());
  parallel_for(data.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = transform(params, data[i]);
  });
  return out;
}

double eigenvalue_ratio(const PreprocessParams& params) {
  if (params.output_dim == 0 || params.output_dim > params.eigenvalues.size()) {
    throw Error(ErrorCode::kInvalidArgument, "eigenvalue_ratio: no components");
  }
  const double last = params.eigenvalues[params.output_dim - 1];
  if (!(last > 0.0)) {
    throw Error(ErrorCode::kDegenerate,
                "eigenvalue_ratio: retained eigenvalue " +
                    std::to_string(params.output_dim) + " is zero");
  }
  return params.eigenvalues.front() / last;
}

std::vector<double> cumulative_contribution(const PreprocessParams& params) {
  const double total = std::accumulate(params.eigenvalues.begin(),
                                       params.eigenvalues.end(), 0.0);
  std::vector<double> out;
  out.reserve(params.eigenvalues.size());
  double running = 0.0;
  for (double v : params.eigenvalues) {
    running += v;
    out.push_back(total > 0.0 ? running / total : 0.0);
  }
  return out;
}

}  // namespace lshlift
