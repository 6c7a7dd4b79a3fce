// Copyright 2026 The roadsound Authors.
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

#ifndef ROADSOUND_SRC_BYTE_IO_HPP_
#define ROADSOUND_SRC_BYTE_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "roadsound/error.hpp"

namespace roadsound::detail {

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

class ByteWriter {
 public:
  template <typename T>
    requires std::is_arithmetic_v<T>
  void Put(T value) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }

  void PutBytes(std::span<const std::uint8_t> data) {
    bytes_.insert(bytes_.end(), data.begin(), data.end());
  }

  void PutTag(const char (&tag)[5]) {
    bytes_.insert(bytes_.end(), tag, tag + 4);
  }

  void PutString(const std::string& s) {
    Put(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }

  std::vector<std::uint8_t>& bytes() { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

 private:
  std::vector<std::uint8_t> bytes_;
};

// Bounds-checked cursor; running off the end raises `overflow_code`.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, ErrorCode overflow_code)
      : data_(data), code_(overflow_code) {}

  template <typename T>
    requires std::is_arithmetic_v<T>
  T Get() {
    Need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::span<const std::uint8_t> GetBytes(std::size_t n) {
    Need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  bool TagIs(const char (&tag)[5]) {
    auto b = GetBytes(4);
    return std::memcmp(b.data(), tag, 4) == 0;
  }

  std::string GetString() {
    auto n = Get<std::uint32_t>();
    auto b = GetBytes(n);
    return std::string(b.begin(), b.end());
  }

  void Skip(std::size_t n) { GetBytes(n); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) Fail(code_, "unexpected end of data");
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  ErrorCode code_;
};

std::vector<std::uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace roadsound::detail

#endif  // ROADSOUND_SRC_BYTE_IO_HPP_
