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

#include "lshlift/arrangement.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "lshlift/hashing.h"
#include "lshlift/lift.h"
#include "lshlift/parallel.h"
#include "lshlift/rng.h"

namespace lshlift {

namespace {

void check_planes(std::span<const Hyperplane> planes, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "dimension is 0");
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (planes[i].dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "plane " + std::to_string(i) + " has dimension " +
                      std::to_string(planes[i].dim()) + ", expected " +
                      std::to_string(dim));
    }
  }
}

// Dense tableau simplex for  max c.z  s.t.  A z <= b, z >= 0  with b >= 0,
// so the all-slack basis is feasible from the start. Bland's rule rules out
// cycling. Every variable is boxed by the callers, so the LP is bounded.
class Simplex {
 public:
  Simplex(std::size_t rows, std::size_t vars)
      : rows_(rows), vars_(vars), cols_(vars + rows + 1),
        t_((rows + 1) * cols_, 0.0), basis_(rows) {
    for (std::size_t r = 0; r < rows_; ++r) {
      at(r, vars_ + r) = 1.0;
      basis_[r] = vars_ + r;
    }
  }

  double& a(std::size_t r, std::size_t v) { return at(r, v); }
  double& b(std::size_t r) { return at(r, cols_ - 1); }
  void set_objective(std::size_t v, double c) { at(rows_, v) = -c; }

  double solve() {
    constexpr double kPivotTol = 1e-12;
    for (std::size_t guard = 0; guard < 10000; ++guard) {
      std::size_t enter = cols_;
      for (std::size_t v = 0; v + 1 < cols_; ++v) {
        if (at(rows_, v) < -kPivotTol) {
          enter = v;
          break;
        }
      }
      if (enter == cols_) return at(rows_, cols_ - 1);
      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double coef = at(r, enter);
        if (coef <= kPivotTol) continue;
        const double ratio = at(r, cols_ - 1) / coef;
        if (leave == rows_ || ratio < best ||
            (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) {
        throw Error(ErrorCode::kDegenerate, "region LP is unbounded");
      }
      pivot(leave, enter);
    }
    throw Error(ErrorCode::kDegenerate, "region LP did not terminate");
  }

 private:
  double& at(std::size_t r, std::size_t c) { return t_[r * cols_ + c]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t c = 0; c < cols_; ++c) at(row, c) /= p;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == row) continue;
      const double f = at(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= f * at(row, c);
    }
    basis_[row] = col;
  }

  std::size_t rows_, vars_, cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

// Radius such that every cell of the arrangement meets the ball of radius
// radius / 2. Each cell's closure contains a minimal face, which is a flat cut
// out by at most `dim` planes with independent normals, and so contains that
// flat's minimum-norm point.
double enclosing_radius(std::span<const Hyperplane> planes, std::size_t dim) {
  double reach = 0.0;
  const std::size_t m = planes.size();
  std::vector<std::size_t> subset;
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (!subset.empty()) {
      const auto s = static_cast<Eigen::Index>(subset.size());
      Eigen::MatrixXd a(s, static_cast<Eigen::Index>(dim));
      Eigen::VectorXd c(s);
      for (Eigen::Index r = 0; r < s; ++r) {
        const auto& h = planes[subset[static_cast<std::size_t>(r)]];
        for (std::size_t j = 0; j < dim; ++j) {
          a(r, static_cast<Eigen::Index>(j)) = h.normal()[j];
        }
        c(r) = h.offset();
      }
      const Eigen::MatrixXd gram = a * a.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
      lu.setThreshold(1e-10);
      if (lu.isInvertible()) {
        const Eigen::VectorXd x = -a.transpose() * lu.solve(c);
        reach = std::max(reach, x.norm());
      }
    }
    if (subset.size() == dim) return;
    for (std::size_t i = start; i < m; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  visit(visit, 0);
  return 2.0 * reach + 1.0;
}

// Is {x : signs[i] * (n_i . x + b_i) > 0 for i < signs.size()} nonempty?
// Maximizes the common margin t inside a box that meets every cell.
bool cell_feasible(std::span<const Hyperplane> planes,
                   std::span<const signed char> signs, std::size_t dim,
                   double radius, double shift) {
  const std::size_t k = signs.size();
  // Variables: y_j = x_j + radius in [0, 2 radius], tau = t + shift >= 0.
  Simplex lp(k + dim + 1, dim + 1);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = signs[i];
    const auto& n = planes[i].normal();
    double n_sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      lp.a(i, j) = -s * n[j];
      n_sum += n[j];
    }
    lp.a(i, dim) = 1.0;
    lp.b(i) = shift - s * radius * n_sum + s * planes[i].offset();
  }
  for (std::size_t j = 0; j < dim; ++j) {
    lp.a(k + j, j) = 1.0;
    lp.b(k + j) = 2.0 * radius;
  }
  lp.a(k + dim, dim) = 1.0;
  lp.b(k + dim) = shift + 1.0;
  lp.set_objective(dim, 1.0);
  const double margin = lp.solve() - shift;
  return margin > 1e-10 * shift;
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t central_region_count(std::size_t dim, std::size_t planes) {
  if (planes == 0) return 1;
  std::uint64_t s = 0;
  for (std::size_t i = 0; i + 1 <= dim; ++i) s += binomial(planes - 1, i);
  return 2 * s;
}

std::uint64_t offset_region_count(std::size_t dim, std::size_t planes) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i <= dim; ++i) s += binomial(planes, i);
  return s;
}

std::uint64_t closed_form_region_count(ArrangementMode mode, std::size_t dim,
                                       std::size_t planes) {
  return mode == ArrangementMode::kCentral ? central_region_count(dim, planes)
                                           : offset_region_count(dim, planes);
}

std::uint64_t count_regions_exact(std::span<const Hyperplane> planes,
                                  std::size_t dim) {
  if (dim < 1 || dim > kMaxExactDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "exact region counting supports dimensions 1 to 3, got " +
                    std::to_string(dim));
  }
  if (planes.size() > kMaxExactPlanes) {
    throw Error(ErrorCode::kInvalidArgument,
                "exact region counting supports at most 20 planes, got " +
                    std::to_string(planes.size()));
  }
  check_planes(planes, dim);
  if (planes.empty()) return 1;

  const double radius = enclosing_radius(planes, dim);
  double max_offset = 0.0;
  for (const auto& h : planes) max_offset = std::max(max_offset, std::abs(h.offset()));
  const double shift =
      radius * std::sqrt(static_cast<double>(dim)) + max_offset + 1.0;

  std::vector<std::vector<signed char>> cells{{}};
  for (std::size_t p = 0; p < planes.size(); ++p) {
    std::vector<std::vector<signed char>> next;
    next.reserve(cells.size() * 2);
    for (const auto& cell : cells) {
      for (signed char s : {static_cast<signed char>(1), static_cast<signed char>(-1)}) {
        std::vector<signed char> extended = cell;
        extended.push_back(s);
        if (cell_feasible(planes, extended, dim, radius, shift)) {
          next.push_back(std::move(extended));
        }
      }
    }
    cells = std::move(next);
  }
  return cells.size();
}

std::uint64_t count_regions_sampled(std::span<const Hyperplane> planes,
                                    std::size_t dim, std::size_t n_samples,
                                    double sample_radius,
                                    std::uint64_t rng_seed) {
  if (n_samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_samples must be at least 1");
  }
  if (!(sample_radius > 0.0) || !std::isfinite(sample_radius)) {
    throw Error(ErrorCode::kInvalidArgument, "sample radius must be positive");
  }
  check_planes(planes, dim);
  if (planes.empty()) return 1;

  std::vector<BitCode> codes(n_samples);
  parallel_for(n_samples, [&](std::size_t begin, std::size_t end) {
    Vector x(dim);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(rng_seed, i));
      double norm = 0.0;
      do {
        for (double& v : x) v = rng.normal();
        norm = l2_norm(x);
      } while (norm == 0.0);
      const double r =
          sample_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
      for (double& v : x) v *= r / norm;
      codes[i] = encode_projected(planes, x);
    }
  });
  auto less = [](const BitCode& a, const BitCode& b) {
    return std::lexicographical_compare(a.words().begin(), a.words().end(),
                                        b.words().begin(), b.words().end());
  };
  std::sort(codes.begin(), codes.end(), less);
  return static_cast<std::uint64_t>(
      std::unique(codes.begin(), codes.end()) - codes.begin());
}

std::vector<Hyperplane> sample_arrangement(ArrangementMode mode,
                                           std::size_t dim, std::size_t planes,
                                           std::uint64_t seed) {
  if (planes == 0) return {};
  if (mode == ArrangementMode::kCentral) {
    return origin_planes(sample_unit_normals(dim, planes, seed));
  }
  std::vector<Hyperplane> out;
  out.reserve(planes);
  for (const auto& h : sample_lifted(dim, planes, seed)) {
    out.push_back(unlift_hyperplane(h));
  }
  return out;
}

GenericArrangement sample_generic_arrangement(ArrangementMode mode,
                                              std::size_t dim,
                                              std::size_t planes,
                                              std::uint64_t seed,
                                              std::size_t max_attempts) {
  const std::uint64_t expected = closed_form_region_count(mode, dim, planes);
  GenericArrangement out;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    out.seed_used = seed + attempt;
    out.planes = sample_arrangement(mode, dim, planes, out.seed_used);
    if (count_regions_exact(out.planes, dim) == expected) return out;
    ++out.rejected;
  }
  throw Error(ErrorCode::kDegenerate,
              "no generic arrangement found in " + std::to_string(max_attempts) +
                  " draws");
}

}  // namespace lshlift
