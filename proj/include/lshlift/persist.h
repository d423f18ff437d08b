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

// On-disk formats. All integers and floats are little-endian; byte layouts
// are listed in docs/formats.md.
//
// Binary containers (model, params, codes) share one frame:
//
//   magic      8 bytes
//   version    u32
//   length     u64   payload byte count
//   crc32      u32   CRC-32 (zlib polynomial) of the payload
//   payload    `length` bytes
//
// Files are written to a temporary sibling and renamed into place.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lshlift/core.h"
#include "lshlift/eval.h"
#include "lshlift/hashing.h"
#include "lshlift/preprocess.h"

namespace lshlift {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint32_t kRawMagic = 0x3233464C;  // "LF32"

void save_model(const HashModel& model, const std::filesystem::path& path);
HashModel load_model(const std::filesystem::path& path);

void save_params(const PreprocessParams& params,
                 const std::filesystem::path& path);
PreprocessParams load_params(const std::filesystem::path& path);

void save_codes(std::span<const BitCode> codes,
                const std::filesystem::path& path);
std::vector<BitCode> load_codes(const std::filesystem::path& path);

/// In-memory forms of the files above.
std::vector<std::uint8_t> serialize_model(const HashModel& model);
HashModel deserialize_model(std::span<const std::uint8_t> bytes);

enum class DatasetFormat { kCsv, kRawF32 };
DatasetFormat parse_format(std::string_view text);
/// "raw-f32" for *.f32 / *.bin / *.raw, otherwise "csv".
DatasetFormat format_for_path(const std::filesystem::path& path);

struct Dataset {
  std::vector<Vector> vectors;
  /// Empty unless the CSV has a `label` column.
  std::vector<int> labels;
};

/// csv: one row per vector. An optional first row of column names is
/// detected by a non-numeric cell; a column named `label` holds integer
/// labels. raw-f32: u32 magic, version, count, dim, then count * dim f32.
/// Non-finite values are rejected.
Dataset read_dataset(const std::filesystem::path& path, DatasetFormat format);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path,
                   DatasetFormat format);

/// One split name per line (learn / database / query), aligned with the
/// dataset rows.
std::vector<Split> read_splits(const std::filesystem::path& path);

/// Writes `bytes` to a temporary file next to `path` and renames it over
/// `path`, so readers only ever see complete files.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace lshlift
