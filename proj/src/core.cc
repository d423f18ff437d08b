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

#include "lshlift/core.h"

#include <bit>
#include <cmath>

namespace lshlift {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kWidthMismatch: return "width mismatch";
    case ErrorCode::kDegenerate: return "degenerate input";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kChecksum: return "checksum mismatch";
    case ErrorCode::kTruncated: return "truncated file";
  }
  return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dot: dimensions " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "l2_distance: dimensions " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(std::span<const double> a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Hyperplane::Hyperplane(Vector normal, double offset)
    : normal_(std::move(normal)), offset_(offset) {
  if (normal_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "hyperplane normal is empty");
  }
  if (!all_finite(normal_) || !std::isfinite(offset_)) {
    throw Error(ErrorCode::kNonFinite, "hyperplane has non-finite values");
  }
  const double norm = l2_norm(normal_);
  if (std::abs(norm - 1.0) > kUnitTolerance) {
    throw Error(ErrorCode::kInvalidArgument,
                "hyperplane normal is not unit (norm " + std::to_string(norm) +
                    ")");
  }
}

Hyperplane Hyperplane::normalized(Vector normal, double offset) {
  if (!all_finite(normal) || !std::isfinite(offset)) {
    throw Error(ErrorCode::kNonFinite, "hyperplane has non-finite values");
  }
  const double norm = l2_norm(normal);
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::kDegenerate, "hyperplane normal is zero");
  }
  for (double& v : normal) v /= norm;
  return Hyperplane(std::move(normal), offset / norm);
}

LiftedHyperplane::LiftedHyperplane(Vector lifted_normal)
    : normal_(std::move(lifted_normal)) {
  if (normal_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "lifted normal needs at least 2 components");
  }
  if (!all_finite(normal_)) {
    throw Error(ErrorCode::kNonFinite, "lifted normal has non-finite values");
  }
}

bool LiftedHyperplane::is_normalized(double tolerance) const {
  return std::abs(l2_norm(n()) - 1.0) <= tolerance;
}

BitCode::BitCode(std::size_t width)
    : width_(width), words_(words_for(width), 0) {}

BitCode::BitCode(std::size_t width, std::vector<std::uint64_t> words)
    : width_(width), words_(std::move(words)) {
  if (words_.size() != words_for(width_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bit code of width " + std::to_string(width_) + " needs " +
                    std::to_string(words_for(width_)) + " words, got " +
                    std::to_string(words_.size()));
  }
  if (width_ % 64 != 0 && !words_.empty()) {
    const std::uint64_t mask = (std::uint64_t{1} << (width_ % 64)) - 1;
    if ((words_.back() & ~mask) != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bit code has nonzero bits past its width");
    }
  }
}

BitCode BitCode::from_string(std::string_view bits) {
  BitCode code(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      code.set(i, true);
    } else if (bits[i] != '0') {
      throw Error(ErrorCode::kParse, "bit string may only contain 0 and 1");
    }
  }
  return code;
}

std::string BitCode::to_string() const {
  std::string out(width_, '0');
  for (std::size_t i = 0; i < width_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

bool BitCode::get(std::size_t i) const {
  if (i >= width_) throw Error(ErrorCode::kInvalidArgument, "bit index out of range");
  return (words_[i / 64] >> (i % 64)) & 1u;
}

void BitCode::set(std::size_t i, bool value) {
  if (i >= width_) throw Error(ErrorCode::kInvalidArgument, "bit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= bit;
  } else {
    words_[i / 64] &= ~bit;
  }
}

std::size_t hamming_distance(const BitCode& a, const BitCode& b) {
  if (a.width() != b.width()) {
    throw Error(ErrorCode::kWidthMismatch,
                "hamming_distance: widths " + std::to_string(a.width()) +
                    " and " + std::to_string(b.width()));
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  }
  return d;
}

bool side_of(const Hyperplane& h, std::span<const double> x) {
  if (h.dim() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "side_of: plane dimension " + std::to_string(h.dim()) +
                    ", point dimension " + std::to_string(x.size()));
  }
  // Accumulation order matches side_of_origin on the lifted pair, so the
  // offset plane and its lifted counterpart produce bit-identical results.
  double s = 0.0;
  const auto& n = h.normal();
  for (std::size_t i = 0; i < n.size(); ++i) s += n[i] * x[i];
  s += h.offset();
  return s > 0.0;
}

bool side_of_origin(std::span<const double> normal,
                    std::span<const double> x) {
  return dot(normal, x) > 0.0;
}

}  // namespace lshlift
