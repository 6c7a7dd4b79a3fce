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

#include "roadsound/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "byte_io.hpp"
#include "roadsound/error.hpp"

namespace roadsound {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

FormatChunk ParseFormat(std::span<const std::uint8_t> body) {
  detail::ByteReader r(body, ErrorCode::kMalformedWav);
  FormatChunk fmt;
  fmt.format = r.Get<std::uint16_t>();
  fmt.channels = r.Get<std::uint16_t>();
  fmt.sample_rate = r.Get<std::uint32_t>();
  r.Get<std::uint32_t>();  // byte rate
  fmt.block_align = r.Get<std::uint16_t>();
  fmt.bits = r.Get<std::uint16_t>();
  if (fmt.format == kFormatExtensible) {
    // cbSize, valid bits, channel mask, then the sub-format GUID whose first
    // two bytes carry the real format tag.
    if (r.Get<std::uint16_t>() < 22) Fail(ErrorCode::kMalformedWav, "short extensible fmt");
    r.Skip(6);
    fmt.format = r.Get<std::uint16_t>();
  }
  return fmt;
}

}  // namespace

std::size_t CanonicalLength(double rate, double seconds) {
  return static_cast<std::size_t>(std::llround(rate * seconds));
}

AudioClip DecodeWav(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, ErrorCode::kMalformedWav);
  if (!r.TagIs("RIFF")) Fail(ErrorCode::kMalformedWav, "missing RIFF magic");
  const auto riff_size = r.Get<std::uint32_t>();
  if (!r.TagIs("WAVE")) Fail(ErrorCode::kMalformedWav, "missing WAVE magic");
  if (riff_size < 4 || riff_size - 4 > r.remaining()) {
    Fail(ErrorCode::kMalformedWav, "RIFF size exceeds file length");
  }

  bool have_fmt = false;
  FormatChunk fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  while (r.remaining() >= 8 && !have_data) {
    const auto id = r.GetBytes(4);
    const auto size = r.Get<std::uint32_t>();
    if (size > r.remaining()) {
      Fail(ErrorCode::kMalformedWav, "chunk length exceeds file length");
    }
    const auto body = r.GetBytes(size);
    if (std::memcmp(id.data(), "fmt ", 4) == 0) {
      fmt = ParseFormat(body);
      have_fmt = true;
    } else if (std::memcmp(id.data(), "data", 4) == 0) {
      data = body;
      have_data = true;
    }
    if ((size & 1u) && r.remaining() > 0) r.Skip(1);
  }
  if (!have_fmt) Fail(ErrorCode::kMalformedWav, "missing fmt chunk");
  if (!have_data) Fail(ErrorCode::kMalformedWav, "missing data chunk");

  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool f32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !f32) {
    Fail(ErrorCode::kUnsupportedEncoding,
         "unsupported encoding: format " + std::to_string(fmt.format) +
             ", " + std::to_string(fmt.bits) + " bits");
  }
  if (fmt.channels != 1 && fmt.channels != 2) {
    Fail(ErrorCode::kUnsupportedEncoding,
         "unsupported channel count " + std::to_string(fmt.channels));
  }
  if (fmt.sample_rate == 0) Fail(ErrorCode::kMalformedWav, "zero sample rate");
  const std::size_t frame_bytes = fmt.channels * (fmt.bits / 8u);
  if (fmt.block_align != frame_bytes) {
    Fail(ErrorCode::kMalformedWav, "block align disagrees with format");
  }
  if (data.size() % frame_bytes != 0) {
    Fail(ErrorCode::kMalformedWav, "data length is not a whole number of frames");
  }
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) Fail(ErrorCode::kEmptyClip, "wav has no samples");

  AudioClip clip;
  clip.sample_rate = fmt.sample_rate;
  clip.samples.resize(frames);
  const std::uint8_t* p = data.data();
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < fmt.channels; ++c) {
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        acc += static_cast<double>(v) / 32768.0;
        p += 2;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        acc += static_cast<double>(v);
        p += 4;
      }
    }
    clip.samples[i] = acc / fmt.channels;
  }
  return clip;
}

AudioClip LoadWav(const std::filesystem::path& path) {
  const auto bytes = detail::ReadFileBytes(path.string());
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodeWav(const AudioClip& clip) {
  Require(clip.sample_rate > 0, "sample rate must be positive");
  const auto rate = static_cast<std::uint32_t>(std::lround(clip.sample_rate));
  const auto data_bytes = static_cast<std::uint32_t>(clip.size() * 2);
  detail::ByteWriter w;
  w.PutTag("RIFF");
  w.Put<std::uint32_t>(36 + data_bytes);
  w.PutTag("WAVE");
  w.PutTag("fmt ");
  w.Put<std::uint32_t>(16);
  w.Put<std::uint16_t>(kFormatPcm);
  w.Put<std::uint16_t>(1);
  w.Put<std::uint32_t>(rate);
  w.Put<std::uint32_t>(rate * 2);
  w.Put<std::uint16_t>(2);
  w.Put<std::uint16_t>(16);
  w.PutTag("data");
  w.Put<std::uint32_t>(data_bytes);
  for (double x : clip.samples) {
    const double scaled = std::nearbyint(x * 32768.0);
    w.Put(static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0)));
  }
  return std::move(w.bytes());
}

void WriteWav(const std::filesystem::path& path, const AudioClip& clip) {
  detail::WriteFileBytes(path.string(), EncodeWav(clip));
}

AudioClip Normalize(const AudioClip& clip, double target_rate,
                    double target_seconds) {
  Require(target_rate > 0 && target_seconds > 0,
          "target rate and duration must be positive");
  Require(clip.sample_rate > 0, "clip sample rate must be positive");
  if (clip.samples.empty()) Fail(ErrorCode::kEmptyClip, "cannot normalize an empty clip");

  std::vector<double> resampled;
  if (clip.sample_rate == target_rate) {
    resampled = clip.samples;
  } else {
    const double ratio = clip.sample_rate / target_rate;
    const auto n_out = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(clip.size() / ratio)));
    resampled.resize(n_out);
    const std::size_t last = clip.size() - 1;
    for (std::size_t i = 0; i < n_out; ++i) {
      const double pos = i * ratio;
      const auto i0 = std::min(static_cast<std::size_t>(pos), last);
      const auto i1 = std::min(i0 + 1, last);
      const double frac = pos - static_cast<double>(i0);
      resampled[i] = clip.samples[i0] + frac * (clip.samples[i1] - clip.samples[i0]);
    }
  }

  const std::size_t target = CanonicalLength(target_rate, target_seconds);
  AudioClip out;
  out.sample_rate = target_rate;
  if (resampled.size() == target) {
    out.samples = std::move(resampled);
  } else if (resampled.size() < target) {
    const std::size_t lead = (target - resampled.size()) / 2;
    out.samples.assign(target, 0.0);
    std::copy(resampled.begin(), resampled.end(), out.samples.begin() + lead);
  } else {
    const std::size_t start = (resampled.size() - target) / 2;
    out.samples.assign(resampled.begin() + start,
                       resampled.begin() + start + target);
  }
  return out;
}

AudioClip PreEmphasis(const AudioClip& clip, double alpha) {
  Require(alpha >= 0.0 && alpha < 1.0, "pre-emphasis alpha must be in [0, 1)");
  AudioClip out = clip;
  for (std::size_t n = clip.size(); n-- > 1;) {
    out.samples[n] = clip.samples[n] - alpha * clip.samples[n - 1];
  }
  return out;
}

}  // namespace roadsound
