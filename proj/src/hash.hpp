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

#ifndef ROADSOUND_SRC_HASH_HPP_
#define ROADSOUND_SRC_HASH_HPP_

#include <cstdint>
#include <span>
#include <string_view>

namespace roadsound::detail {

// FNV-1a, 64 bit. Stable across platforms, unlike std::hash.
inline std::uint64_t Fnv1a(std::span<const std::uint8_t> data,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (auto b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t Fnv1a(std::string_view s,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  return Fnv1a(std::span(reinterpret_cast<const std::uint8_t*>(s.data()),
                         s.size()),
               h);
}

// splitmix64 finalizer
inline std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t Combine(std::uint64_t a, std::uint64_t b) {
  return Mix(a ^ Mix(b));
}

}  // namespace roadsound::detail

#endif  // ROADSOUND_SRC_HASH_HPP_
