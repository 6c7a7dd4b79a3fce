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

#include <doctest.h>

#include "oracles.hpp"
#include "roadsound/error.hpp"
#include "roadsound/fft.hpp"

using roadsound::Complex;

TEST_CASE("power-of-two helpers") {
  CHECK(roadsound::IsPowerOfTwo(1));
  CHECK(roadsound::IsPowerOfTwo(2048));
  CHECK_FALSE(roadsound::IsPowerOfTwo(0));
  CHECK_FALSE(roadsound::IsPowerOfTwo(66150));
  CHECK(roadsound::NextPowerOfTwo(66150) == 131072);
  CHECK(roadsound::NextPowerOfTwo(1024) == 1024);
}

TEST_CASE("complex FFT matches the naive DFT") {
  for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
    CAPTURE(n);
    std::mt19937_64 rng(n);
    std::normal_distribution<double> g;
    std::vector<Complex> x(n);
    for (auto& v : x) v = {g(rng), g(rng)};
    auto fast = x;
    roadsound::Fft(fast);
    const auto slow = oracle::NaiveDft(x);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-9);
  }
}

TEST_CASE("inverse FFT is unscaled and undoes the forward transform") {
  auto x = std::vector<Complex>{{1, 0}, {2, -1}, {0, 3}, {-4, 0.5}};
  auto y = x;
  roadsound::Fft(y);
  roadsound::Fft(y, true);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] / 4.0 - x[i]) < 1e-12);
}

TEST_CASE("FFT rejects non power-of-two lengths") {
  std::vector<Complex> x(6);
  CHECK_THROWS_AS(roadsound::Fft(x), roadsound::Error);
}

TEST_CASE("real FFT returns the one-sided spectrum of the zero-padded input") {
  const auto x = oracle::RandomSignal(100, 7);
  const auto half = roadsound::RealFft(x, 128);
  REQUIRE(half.size() == 65);
  std::vector<oracle::cd> padded(128);
  for (std::size_t i = 0; i < x.size(); ++i) padded[i] = x[i];
  const auto slow = oracle::NaiveDft(padded);
  for (std::size_t k = 0; k < half.size(); ++k) CHECK(std::abs(half[k] - slow[k]) < 1e-9);

  const auto back = roadsound::InverseRealFft(half, 128);
  REQUIRE(back.size() == 128);
  for (std::size_t i = 0; i < 128; ++i) CHECK(back[i] == doctest::Approx(i < 100 ? x[i] : 0.0).epsilon(1e-12));
}

TEST_CASE("Parseval holds for random real signals") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = oracle::RandomSignal(2048, seed);
    std::vector<Complex> c(x.begin(), x.end());
    roadsound::Fft(c);
    double time = 0, freq = 0;
    for (double v : x) time += v * v;
    for (auto v : c) freq += std::norm(v);
    CHECK(oracle::RelDiff(time, freq / 2048.0) < 1e-10);
  }
}
