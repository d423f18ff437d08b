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

#include "lshlift/persist.h"

#include <zlib.h>
#include <unistd.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lshlift {

namespace {

constexpr std::array<char, 8> kModelMagic = {'L', 'S', 'H', 'L', 'M', 'D', 'L', '\0'};
constexpr std::array<char, 8> kParamsMagic = {'L', 'S', 'H', 'L', 'P', 'R', 'M', '\0'};
constexpr std::array<char, 8> kCodesMagic = {'L', 'S', 'H', 'L', 'C', 'O', 'D', '\0'};
constexpr std::size_t kFrameHeader = 8 + 4 + 8 + 4;

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64s(std::span<const double> v) {
    for (double x : v) f64(x);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  void raw(std::span<const std::uint8_t> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }
  void raw(std::span<const char> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, ErrorCode short_read)
      : bytes_(bytes), short_read_(short_read) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }
  Vector f64s(std::size_t n) {
    need(n * 8);
    Vector v(n);
    for (double& x : v) x = f64();
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(short_read_, short_read_ == ErrorCode::kTruncated
                                   ? "file is truncated"
                                   : "payload is malformed");
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  ErrorCode short_read_;
};

std::uint32_t crc(std::span<const std::uint8_t> payload) {
  uLong c = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t pos = 0;
  while (pos < payload.size()) {
    const std::size_t n = std::min<std::size_t>(payload.size() - pos, 1u << 30);
    c = crc32(c, payload.data() + pos, static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(c);
}

std::vector<std::uint8_t> frame(const std::array<char, 8>& magic,
                                std::span<const std::uint8_t> payload) {
  Writer w;
  w.raw(std::span<const char>(magic));
  w.u32(kFormatVersion);
  w.u64(payload.size());
  w.u32(crc(payload));
  w.raw(payload);
  return std::move(w.bytes());
}

std::span<const std::uint8_t> unframe(const std::array<char, 8>& magic,
                                      std::span<const std::uint8_t> bytes,
                                      std::string_view kind) {
  if (bytes.size() < kFrameHeader) {
    throw Error(ErrorCode::kTruncated,
                std::string(kind) + " file is truncated (" +
                    std::to_string(bytes.size()) + " bytes)");
  }
  if (std::memcmp(bytes.data(), magic.data(), magic.size()) != 0) {
    throw Error(ErrorCode::kBadMagic,
                "not a " + std::string(kind) + " file (bad magic)");
  }
  Reader r(bytes.subspan(8), ErrorCode::kTruncated);
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                std::string(kind) + " file has format version " +
                    std::to_string(version) + ", this build reads version " +
                    std::to_string(kFormatVersion));
  }
  const std::uint64_t length = r.u64();
  const std::uint32_t expected = r.u32();
  if (r.remaining() < length) {
    throw Error(ErrorCode::kTruncated,
                std::string(kind) + " file is truncated: payload needs " +
                    std::to_string(length) + " bytes, " +
                    std::to_string(r.remaining()) + " present");
  }
  if (r.remaining() > length) {
    throw Error(ErrorCode::kParse,
                std::string(kind) + " file has trailing bytes after payload");
  }
  auto payload = r.take(length);
  if (crc(payload) != expected) {
    throw Error(ErrorCode::kChecksum,
                std::string(kind) + " file failed checksum verification");
  }
  return payload;
}

void write_params(Writer& w, const PreprocessParams& p) {
  w.u32(static_cast<std::uint32_t>(p.input_dim()));
  w.u32(static_cast<std::uint32_t>(p.output_dim));
  w.f64(p.contribution);
  w.f64s(p.mean);
  w.f64s(p.scale);
  w.u32(static_cast<std::uint32_t>(p.eigenvalues.size()));
  w.f64s(p.eigenvalues);
  for (const auto& v : p.pca_basis) w.f64s(v);
}

PreprocessParams read_params(Reader& r) {
  PreprocessParams p;
  const std::uint32_t input_dim = r.u32();
  p.output_dim = r.u32();
  p.contribution = r.f64();
  p.mean = r.f64s(input_dim);
  p.scale = r.f64s(input_dim);
  const std::uint32_t n_eigen = r.u32();
  p.eigenvalues = r.f64s(n_eigen);
  if (p.output_dim > input_dim) {
    throw Error(ErrorCode::kParse, "params: output dimension exceeds input");
  }
  p.pca_basis.reserve(p.output_dim);
  for (std::size_t i = 0; i < p.output_dim; ++i) p.pca_basis.push_back(r.f64s(input_dim));
  return p;
}

std::vector<std::uint8_t> serialize_params_payload(const PreprocessParams& p) {
  Writer w;
  write_params(w, p);
  return std::move(w.bytes());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool parse_int(std::string_view s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset read_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  Dataset out;
  std::size_t dim = 0;
  bool first = true;
  std::ptrdiff_t label_col = -1;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    const auto where = [&] {
      return path.string() + ":" + std::to_string(line_no) + ": ";
    };
    if (first) {
      first = false;
      bool numeric = true;
      for (auto c : cells) {
        double v;
        if (!parse_double(c, v)) numeric = false;
      }
      if (!numeric) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (cells[c] == "label") {
            if (label_col >= 0) throw Error(ErrorCode::kParse, where() + "duplicate label column");
            label_col = static_cast<std::ptrdiff_t>(c);
          }
        }
        dim = cells.size() - (label_col >= 0 ? 1 : 0);
        if (dim == 0) throw Error(ErrorCode::kParse, where() + "no feature columns");
        continue;
      }
      dim = cells.size();
    }
    const std::size_t expected = dim + (label_col >= 0 ? 1 : 0);
    if (cells.size() != expected) {
      throw Error(ErrorCode::kDimensionMismatch,
                  where() + "expected " + std::to_string(expected) +
                      " columns, got " + std::to_string(cells.size()));
    }
    Vector v;
    v.reserve(dim);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<std::ptrdiff_t>(c) == label_col) {
        int label;
        if (!parse_int(cells[c], label)) {
          throw Error(ErrorCode::kParse, where() + "label '" + std::string(cells[c]) +
                                             "' is not an integer");
        }
        out.labels.push_back(label);
        continue;
      }
      double x;
      if (!parse_double(cells[c], x)) {
        throw Error(ErrorCode::kParse,
                    where() + "cannot parse '" + std::string(cells[c]) + "'");
      }
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNonFinite, where() + "non-finite value");
      }
      v.push_back(x);
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

Dataset read_raw(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  Reader r(bytes, ErrorCode::kTruncated);
  if (bytes.size() < 16) throw Error(ErrorCode::kTruncated, path.string() + ": header is truncated");
  if (r.u32() != kRawMagic) throw Error(ErrorCode::kBadMagic, path.string() + ": not a raw-f32 file");
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                path.string() + ": raw-f32 version " + std::to_string(version));
  }
  const std::uint64_t count = r.u32();
  const std::uint64_t dim = r.u32();
  const std::uint64_t need = count * dim * 4;
  if (r.remaining() < need) {
    throw Error(ErrorCode::kTruncated, path.string() + ": expected " +
                                           std::to_string(need) + " data bytes, found " +
                                           std::to_string(r.remaining()));
  }
  if (r.remaining() > need) {
    throw Error(ErrorCode::kParse, path.string() + ": trailing bytes after data");
  }
  if (count > 0 && dim == 0) throw Error(ErrorCode::kParse, path.string() + ": dimension is 0");
  Dataset out;
  out.vectors.resize(count);
  for (auto& v : out.vectors) {
    v.resize(dim);
    for (double& x : v) {
      const float f = r.f32();
      if (!std::isfinite(f)) throw Error(ErrorCode::kNonFinite, path.string() + ": non-finite value");
      x = f;
    }
  }
  return out;
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const HashModel& model) {
  model.validate();
  Writer w;
  w.u64(model.seed);
  w.str(model.method);
  write_params(w, model.preprocess);
  w.u32(static_cast<std::uint32_t>(model.hyperplanes.size()));
  w.u32(static_cast<std::uint32_t>(model.preprocess.output_dim));
  for (const auto& h : model.hyperplanes) {
    w.f64s(h.normal());
    w.f64(h.offset());
  }
  return frame(kModelMagic, w.bytes());
}

HashModel deserialize_model(std::span<const std::uint8_t> bytes) {
  Reader r(unframe(kModelMagic, bytes, "model"), ErrorCode::kParse);
  HashModel m;
  m.seed = r.u64();
  m.method = r.str();
  m.preprocess = read_params(r);
  const std::uint32_t bits = r.u32();
  const std::uint32_t dim = r.u32();
  if (dim != m.preprocess.output_dim) {
    throw Error(ErrorCode::kParse, "model: plane dimension differs from projection");
  }
  m.hyperplanes.reserve(bits);
  for (std::uint32_t i = 0; i < bits; ++i) {
    Vector n = r.f64s(dim);
    const double b = r.f64();
    m.hyperplanes.emplace_back(std::move(n), b);
  }
  if (r.remaining() != 0) throw Error(ErrorCode::kParse, "model: trailing payload bytes");
  return m;
}

void save_model(const HashModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

HashModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path));
}

void save_params(const PreprocessParams& params, const std::filesystem::path& path) {
  write_file_atomic(path, frame(kParamsMagic, serialize_params_payload(params)));
}

PreprocessParams load_params(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  Reader r(unframe(kParamsMagic, bytes, "params"), ErrorCode::kParse);
  PreprocessParams p = read_params(r);
  if (r.remaining() != 0) throw Error(ErrorCode::kParse, "params: trailing payload bytes");
  return p;
}

void save_codes(std::span<const BitCode> codes, const std::filesystem::path& path) {
  Writer w;
  const std::size_t width = codes.empty() ? 0 : codes.front().width();
  w.u64(codes.size());
  w.u32(static_cast<std::uint32_t>(width));
  for (const auto& c : codes) {
    if (c.width() != width) {
      throw Error(ErrorCode::kWidthMismatch, "save_codes: codes have mixed widths");
    }
    for (std::uint64_t word : c.words()) w.u64(word);
  }
  write_file_atomic(path, frame(kCodesMagic, w.bytes()));
}

std::vector<BitCode> load_codes(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  Reader r(unframe(kCodesMagic, bytes, "codes"), ErrorCode::kParse);
  const std::uint64_t count = r.u64();
  const std::uint32_t width = r.u32();
  const std::size_t words = BitCode::words_for(width);
  if (r.remaining() != count * words * 8) {
    throw Error(ErrorCode::kParse, "codes: payload size does not match header");
  }
  std::vector<BitCode> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<std::uint64_t> w(words);
    for (auto& x : w) x = r.u64();
    out.emplace_back(width, std::move(w));
  }
  return out;
}

DatasetFormat parse_format(std::string_view text) {
  if (text == "csv") return DatasetFormat::kCsv;
  if (text == "raw-f32" || text == "raw") return DatasetFormat::kRawF32;
  throw Error(ErrorCode::kInvalidArgument, "unknown dataset format '" + std::string(text) + "'");
}

DatasetFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".f32" || ext == ".bin" || ext == ".raw") return DatasetFormat::kRawF32;
  return DatasetFormat::kCsv;
}

Dataset read_dataset(const std::filesystem::path& path, DatasetFormat format) {
  return format == DatasetFormat::kCsv ? read_csv(path) : read_raw(path);
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path,
                   DatasetFormat format) {
  if (!dataset.labels.empty() && dataset.labels.size() != dataset.vectors.size()) {
    throw Error(ErrorCode::kInvalidArgument, "write_dataset: label count mismatch");
  }
  const std::size_t dim = dataset.vectors.empty() ? 0 : dataset.vectors.front().size();
  for (const auto& v : dataset.vectors) {
    if (v.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "write_dataset: mixed dimensions");
    if (!all_finite(v)) throw Error(ErrorCode::kNonFinite, "write_dataset: non-finite value");
  }
  if (format == DatasetFormat::kRawF32) {
    Writer w;
    w.u32(kRawMagic);
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(dataset.vectors.size()));
    w.u32(static_cast<std::uint32_t>(dim));
    for (const auto& v : dataset.vectors) {
      for (double x : v) w.f32(static_cast<float>(x));
    }
    write_file_atomic(path, w.bytes());
    return;
  }
  std::string text;
  if (!dataset.labels.empty()) {
    for (std::size_t j = 0; j < dim; ++j) text += "x" + std::to_string(j) + ",";
    text += "label\n";
  }
  for (std::size_t i = 0; i < dataset.vectors.size(); ++i) {
    const auto& v = dataset.vectors[i];
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j) text += ',';
      append_number(text, v[j]);
    }
    if (!dataset.labels.empty()) text += "," + std::to_string(dataset.labels[i]);
    text += '\n';
  }
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<Split> read_splits(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<Split> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    out.push_back(parse_split(t));
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move file into place at " + path.string());
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace lshlift
