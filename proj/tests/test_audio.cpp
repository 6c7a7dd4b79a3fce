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

#include <cstring>

#include "oracles.hpp"
#include "roadsound/audio.hpp"
#include "roadsound/error.hpp"

using namespace roadsound;

namespace {

// Hand-assembled RIFF container; kept independent of EncodeWav.
std::vector<std::uint8_t> MakeWav(std::uint16_t format, std::uint16_t channels,
                                  std::uint32_t rate, std::uint16_t bits,
                                  const std::vector<std::uint8_t>& data) {
  std::vector<std::uint8_t> out;
  auto put = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  };
  auto u32 = [&](std::uint32_t v) { put(&v, 4); };
  auto u16 = [&](std::uint16_t v) { put(&v, 2); };
  put("RIFF", 4);
  u32(static_cast<std::uint32_t>(4 + 8 + 16 + 8 + data.size()));
  put("WAVE", 4);
  put("fmt ", 4);
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  const std::uint16_t align = static_cast<std::uint16_t>(channels * bits / 8);
  u32(rate * align);
  u16(align);
  u16(bits);
  put("data", 4);
  u32(static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

std::vector<std::uint8_t> Pcm16(const std::vector<std::int16_t>& v) {
  std::vector<std::uint8_t> out(v.size() * 2);
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

std::vector<std::uint8_t> Float32(const std::vector<float>& v) {
  std::vector<std::uint8_t> out(v.size() * 4);
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

ErrorCode CodeOf(const std::vector<std::uint8_t>& bytes) {
  try {
    DecodeWav(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("PCM16 samples are scaled by 1/32768") {
  const auto clip = DecodeWav(MakeWav(1, 1, 22050, 16, Pcm16({16384, -32768, 0, 32767})));
  REQUIRE(clip.size() == 4);
  CHECK(clip.samples[0] == 0.5);
  CHECK(clip.samples[1] == -1.0);
  CHECK(clip.samples[2] == 0.0);
  CHECK(clip.samples[3] == 32767.0 / 32768.0);
  CHECK(clip.sample_rate == 22050.0);
}

TEST_CASE("stereo frames are averaged to mono") {
  const auto clip = DecodeWav(MakeWav(3, 2, 8000, 32, Float32({0.2f, 0.4f, -1.0f, 1.0f})));
  REQUIRE(clip.size() == 2);
  CHECK(clip.samples[0] == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(clip.samples[1] == 0.0);
  CHECK(clip.sample_rate == 8000.0);
}

TEST_CASE("one second at 22050 Hz decodes to 22050 samples") {
  const auto clip = DecodeWav(MakeWav(1, 1, 22050, 16, Pcm16(std::vector<std::int16_t>(22050, 7))));
  CHECK(clip.size() == 22050);
  CHECK(clip.seconds() == 1.0);
}

TEST_CASE("chunks other than fmt and data are skipped") {
  auto bytes = MakeWav(1, 1, 16000, 16, Pcm16({100, 200}));
  // Insert a LIST chunk (odd length, so padded) between fmt and data.
  const std::vector<std::uint8_t> list = {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  std::uint32_t riff = static_cast<std::uint32_t>(bytes.size() - 8);
  std::memcpy(bytes.data() + 4, &riff, 4);
  const auto clip = DecodeWav(bytes);
  REQUIRE(clip.size() == 2);
  CHECK(clip.samples[1] == 200.0 / 32768.0);
}

TEST_CASE("malformed containers are rejected") {
  auto good = MakeWav(1, 1, 22050, 16, Pcm16({1, 2, 3}));
  CHECK(CodeOf({}) == ErrorCode::kMalformedWav);
  CHECK(CodeOf({'n', 'o', 'p', 'e'}) == ErrorCode::kMalformedWav);

  auto bad_magic = good;
  bad_magic[8] = 'X';
  CHECK(CodeOf(bad_magic) == ErrorCode::kMalformedWav);

  auto truncated = good;
  truncated.resize(truncated.size() - 3);
  CHECK(CodeOf(truncated) == ErrorCode::kMalformedWav);

  auto odd = MakeWav(1, 1, 22050, 16, {1, 2, 3});
  CHECK(CodeOf(odd) == ErrorCode::kMalformedWav);
}

TEST_CASE("unsupported encodings are reported as such") {
  CHECK(CodeOf(MakeWav(1, 1, 22050, 24, std::vector<std::uint8_t>(9))) ==
        ErrorCode::kUnsupportedEncoding);
  CHECK(CodeOf(MakeWav(2, 1, 22050, 16, std::vector<std::uint8_t>(4))) ==
        ErrorCode::kUnsupportedEncoding);
  CHECK(CodeOf(MakeWav(1, 3, 22050, 16, std::vector<std::uint8_t>(6))) ==
        ErrorCode::kUnsupportedEncoding);
}

TEST_CASE("a data chunk with no frames is an empty clip") {
  CHECK(CodeOf(MakeWav(1, 1, 22050, 16, {})) == ErrorCode::kEmptyClip);
}

TEST_CASE("write/load round trip stays within one quantization step") {
  oracle::TempDir dir("wav");
  auto clip = oracle::Noise(5000, 3, 0.99);
  clip.samples.push_back(1.5);   // clamps
  clip.samples.push_back(-2.0);  // clamps
  clip.sample_rate = 16000;
  WriteWav(dir / "x.wav", clip);
  const auto back = LoadWav(dir / "x.wav");
  REQUIRE(back.size() == clip.size());
  CHECK(back.sample_rate == 16000);
  for (std::size_t i = 0; i + 2 < clip.size(); ++i) {
    CHECK(std::abs(back.samples[i] - clip.samples[i]) <= std::ldexp(1.0, -15));
  }
  CHECK(back.samples[clip.size() - 2] == 32767.0 / 32768.0);
  CHECK(back.samples[clip.size() - 1] == -1.0);
}

TEST_CASE("loading a missing file is an I/O failure") {
  try {
    LoadWav("/nonexistent/definitely/missing.wav");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIoFailure);
  }
}

TEST_CASE("normalize pads short clips symmetrically") {
  AudioClip c;
  c.samples.assign(22050, 1.0);
  const auto n = Normalize(c);
  REQUIRE(n.size() == 66150);
  for (std::size_t i = 0; i < 22050; ++i) REQUIRE(n.samples[i] == 0.0);
  for (std::size_t i = 22050; i < 44100; ++i) REQUIRE(n.samples[i] == 1.0);
  for (std::size_t i = 44100; i < 66150; ++i) REQUIRE(n.samples[i] == 0.0);

  // Odd padding: the extra zero goes at the end.
  AudioClip odd;
  odd.sample_rate = 10;
  odd.samples = {1, 1};
  const auto p = Normalize(odd, 10, 0.5);
  CHECK(p.samples == std::vector<double>{0, 1, 1, 0, 0});
}

TEST_CASE("normalize is the identity on canonical clips") {
  const auto c = oracle::Noise(66150, 9);
  CHECK(Normalize(c).samples == c.samples);
}

TEST_CASE("normalize center-crops long clips") {
  AudioClip c;
  c.samples.resize(88200);
  for (std::size_t i = 0; i < c.size(); ++i) c.samples[i] = static_cast<double>(i);
  const auto n = Normalize(c);
  REQUIRE(n.size() == 66150);
  CHECK(n.samples.front() == 11025.0);
  CHECK(n.samples.back() == 77174.0);
}

TEST_CASE("normalize resamples linearly and is idempotent") {
  AudioClip c = oracle::Sine(100, 1.0, 44100);
  const auto n = Normalize(c);
  CHECK(n.sample_rate == 22050);
  CHECK(n.size() == 66150);
  // Sample 22050 + k of the output is input sample 2k (exact grid hit).
  for (std::size_t k = 0; k < 1000; k += 37) {
    CHECK(n.samples[22050 + k] == doctest::Approx(c.samples[2 * k]).epsilon(1e-12));
  }
  CHECK(Normalize(n).samples == n.samples);

  const auto odd = Normalize(oracle::Noise(12345, 1), 22050, 3);
  CHECK(Normalize(odd).samples == odd.samples);
}

TEST_CASE("normalize rejects empty clips and bad targets") {
  AudioClip empty;
  CHECK_THROWS_AS(Normalize(empty), Error);
  try {
    Normalize(empty);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyClip);
  }
  CHECK_THROWS_AS(Normalize(oracle::Noise(10, 1), 0.0, 3.0), Error);
}

TEST_CASE("pre-emphasis follows the difference equation") {
  AudioClip c;
  c.samples = {1, 1, 1};
  const auto y = PreEmphasis(c, 0.97);
  CHECK(y.samples[0] == 1.0);
  CHECK(y.samples[1] == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(y.samples[2] == doctest::Approx(0.03).epsilon(1e-12));

  c.samples = {0.5, -0.5};
  CHECK(PreEmphasis(c, 0.97).samples[1] == doctest::Approx(-0.985).epsilon(1e-12));

  const auto r = oracle::Noise(1000, 4);
  CHECK(PreEmphasis(r, 0.0).samples == r.samples);
  const auto e = PreEmphasis(r);
  CHECK(e.size() == r.size());
  double energy = 0;
  for (double v : e.samples) energy += v * v;
  CHECK(std::isfinite(energy));

  CHECK_THROWS_AS(PreEmphasis(r, 1.0), Error);
}
