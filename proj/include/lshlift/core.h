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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lshlift {

/// Dense feature point. All vectors of one dataset share a dimension.
using Vector = std::vector<double>;

/// Unordered pair of dataset indices, stored with first < second.
using IndexPair = std::pair<std::size_t, std::size_t>;

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kWidthMismatch,
  kDegenerate,
  kNonFinite,
  kIo,
  kParse,
  kBadMagic,
  kVersionMismatch,
  kChecksum,
  kTruncated,
};

std::string_view to_string(ErrorCode code);

/// The single exception type thrown by the library. `code()` tells callers
/// which failure class occurred; `what()` carries a human-readable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);
double l2_distance(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> a);

/// Tolerance on the unit-norm invariant of hyperplane normals.
inline constexpr double kUnitTolerance = 1e-9;

/// Affine hyperplane {x : normal . x + offset = 0} with a unit normal.
///
/// The offset is stored as the constant term of the plane equation, so the
/// signed distance of the plane from the origin is -offset and |offset| is
/// its distance.
class Hyperplane {
 public:
  Hyperplane() = default;

  /// Validates that `normal` is unit within kUnitTolerance and finite.
  Hyperplane(Vector normal, double offset);

  /// Scales (normal, offset) jointly by 1/|normal|. The side function is
  /// unchanged by positive scaling, so this is the canonical form of any
  /// (normal, offset) pair with a nonzero normal.
  static Hyperplane normalized(Vector normal, double offset);

  const Vector& normal() const noexcept { return normal_; }
  double offset() const noexcept { return offset_; }
  std::size_t dim() const noexcept { return normal_.size(); }

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;

 private:
  Vector normal_;
  double offset_ = 0.0;
};

/// Origin-crossing hyperplane in the lifted space, normal written (n, w)
/// where n spans the first dim-1 components.
///
/// Any finite normal with at least two components is accepted; planes built
/// by sample_lifted additionally satisfy |n| == 1 (see is_normalized).
class LiftedHyperplane {
 public:
  LiftedHyperplane() = default;
  explicit LiftedHyperplane(Vector lifted_normal);

  const Vector& lifted_normal() const noexcept { return normal_; }
  /// Dimension of the base space, i.e. lifted dimension minus one.
  std::size_t base_dim() const noexcept { return normal_.size() - 1; }
  double w() const noexcept { return normal_.back(); }
  std::span<const double> n() const noexcept {
    return std::span<const double>(normal_).first(base_dim());
  }
  bool is_normalized(double tolerance = kUnitTolerance) const;

  friend bool operator==(const LiftedHyperplane&,
                         const LiftedHyperplane&) = default;

 private:
  Vector normal_;
};

/// Fixed-width packed bit string. Bit i lives in word i / 64 at position
/// i % 64 (little-endian within 64-bit words); bits past width are zero.
class BitCode {
 public:
  BitCode() = default;
  explicit BitCode(std::size_t width);
  BitCode(std::size_t width, std::vector<std::uint64_t> words);

  /// Parses a string of '0'/'1' characters, bit 0 first.
  static BitCode from_string(std::string_view bits);
  std::string to_string() const;

  std::size_t width() const noexcept { return width_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);

  static constexpr std::size_t words_for(std::size_t width) {
    return (width + 63) / 64;
  }

  friend bool operator==(const BitCode&, const BitCode&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Number of differing bit positions. Throws kWidthMismatch on unequal widths.
std::size_t hamming_distance(const BitCode& a, const BitCode& b);

/// 1 iff normal . x + offset > 0. Points on the plane map to 0.
bool side_of(const Hyperplane& h, std::span<const double> x);

/// Sign test of an origin-crossing plane: 1 iff normal . x > 0.
bool side_of_origin(std::span<const double> normal, std::span<const double> x);

}  // namespace lshlift
